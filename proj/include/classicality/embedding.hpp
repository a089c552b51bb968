#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "classicality/quantum.hpp"
#include "classicality/rational.hpp"
#include "classicality/scenario.hpp"

namespace classicality::embedding {

/// Finite GPT fragment: states and effects in R^dim with the dot product.
/// Invariants: ⟨u,s⟩ = 1 and 0 ≤ ⟨e,s⟩ ≤ 1 (±1e-10) on the listed states.
struct Gpt {
  int dim = 0;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> effects;
  Eigen::VectorXd unit;
  /// Groups of effect indices, each summing to the unit.
  std::vector<std::vector<std::size_t>> sharp_contexts;

  /// Throws ShapeMismatch, InconsistentUnit or InvalidState.
  void validate() const;
  /// ⟨e_i, s_j⟩ as an effects × states matrix.
  Eigen::MatrixXd probability_table() const;
};

struct GptFromData {
  Gpt gpt;
  /// Input column/row → merged state/effect index.
  std::vector<std::size_t> state_of_column;
  std::vector<std::size_t> effect_of_row;
};

inline constexpr double kRankTol = 1e-8;
inline constexpr double kMergeTol = 1e-10;

/// Rank factorisation P = E·S of an effects × states table after merging
/// operationally equivalent rows and columns. Throws InconsistentUnit when
/// no combination of rows equals the all-ones row.
GptFromData gpt_from_data(const Eigen::MatrixXd& prob);

/// Real Hilbert-Schmidt coordinates of a Hermitian d×d operator, in the
/// orthonormal basis {E_kk} ∪ {(E_jk+E_kj)/√2} ∪ {i(E_jk−E_kj)/√2}.
Eigen::VectorXd hermitian_coordinates(const quantum::ComplexMatrix& a);

/// GPT of quantum states and projective contexts: states ρ, effects the
/// context projectors, unit the identity, one sharp context per measurement.
Gpt gpt_from_quantum(const std::vector<quantum::DensityMatrix>& states,
                     const std::vector<quantum::ProjectiveContext>& measurements);

/// Linear maps into the (d−1)-simplex and its dual hypercube.
struct SimplexEmbedding {
  int d = 0;
  Eigen::MatrixXd iota;   // d × dim
  Eigen::MatrixXd kappa;  // d × dim
};

inline constexpr double kEmbeddingTol = 1e-9;

/// ι(s) ∈ Δ_d, κ(e) ∈ [0,1]^d, ⟨κ(e), ι(s)⟩ = ⟨e,s⟩, all within 1e-9.
bool verify_embedding(const Gpt& gpt, const SimplexEmbedding& e, double tol = kEmbeddingTol);

enum class EmbedVerdict { Embeddable, NotEmbeddable, Unknown };

/// Refusal certificate: for state `state`, y with yᵀA ≤ 0 and yᵀb > 0 where
/// the columns of A are the deterministic assignments (with a final row of
/// ones) and b holds the state's probabilities followed by 1.
struct SharpRefusal {
  std::size_t state = 0;
  std::vector<std::vector<int>> assignments;  // one 0/1 vector per column
  VectorXr probabilities;
  VectorXr dual;
};

struct SharpEmbeddingResult {
  EmbedVerdict verdict = EmbedVerdict::Unknown;
  std::optional<SimplexEmbedding> embedding;
  std::optional<SharpRefusal> refusal;
  std::string note;
};

/// The empirical model seen by one state: every flagged effect is a
/// dichotomic measurement (outcome 0 ↔ effect occurs), contexts are the
/// sharp groups. Probabilities are rationalised as in to_exact.
ExactModel induced_model(const Gpt& gpt, std::size_t state);

/// Context-consistent {0,1} assignments to the flagged effects that also
/// respect every linear relation among the flagged effects and the unit.
std::vector<std::vector<int>> deterministic_assignments(const Gpt& gpt);

/// Simplex embedding with Boolean κ rows, or a refusal certificate.
/// Throws UnsharpEffectFlagged when a sharp context does not sum to the unit
/// or an effect lies outside the span of the flagged effects.
SharpEmbeddingResult embed_sharp(const Gpt& gpt);

bool verify_refusal(const SharpRefusal& r);

struct SearchOptions {
  std::uint64_t seed = 0;
  int restarts = 64;
  int sweeps = 60;
};

/// Alternating-LP heuristic with simplex size = dim. Returns Embeddable with
/// a verified embedding, otherwise Unknown. Throws DimensionTooLarge past dim 10.
SharpEmbeddingResult embed_search(const Gpt& gpt, const SearchOptions& options = {});

/// Ontological model over a finite ontic space.
struct OntModel {
  std::vector<std::string> ontic;
  std::vector<std::string> preparations;
  std::vector<std::vector<Rational>> mu;  // per preparation, over ontic
  std::vector<std::string> effects;
  std::vector<std::vector<Rational>> xi;  // per effect, over ontic
};

struct PrepEnsembleProblem {
  quantum::ComplexMatrix target;
  Rational q;
  std::vector<std::string> labels;
  std::vector<quantum::ComplexMatrix> components;
  std::vector<std::pair<std::size_t, std::size_t>> orthogonal_pairs;
  /// Each decomposition: (component, weight) with weights summing to 1.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> decompositions;
};

/// ρ = ½(𝟙 + q n̂·σ) with n̂ = r/|r| (ẑ when r = 0) and q = |r| unless given,
/// rationalised. Components φ, φ⊥, ψ_a, ψ_a⊥, ψ_b, ψ_b⊥, ψ_c, ψ_c⊥ with
/// ψ_a, ψ_b, ψ_c at 120° in the plane orthogonal to n̂; six decompositions.
/// Throws InvalidState unless 0 ≤ q < 1.
PrepEnsembleProblem six_decompositions(const Eigen::Vector3d& r, std::optional<Rational> q = std::nullopt);

struct SupportCase {
  std::uint32_t mask = 0;            // bit k set ↔ second member of pair k vanishes
  std::vector<std::string> zeroed;   // components forced to zero
  bool feasible = false;
  VectorXr dual;                     // Farkas certificate when infeasible
};

struct PrepNcResult {
  bool feasible = false;
  std::vector<SupportCase> cases;
  std::optional<OntModel> model;
  /// Farkas certificate of the joint LP when cases are open but the joint LP fails.
  VectorXr joint_dual;
};

/// Throws DecompositionMismatch when a decomposition misses the target by more than 1e-10.
PrepNcResult prep_nc_check(const PrepEnsembleProblem& problem);

/// Re-checks closed cases and, when feasible, the ontological model.
bool verify_prep_nc(const PrepEnsembleProblem& problem, const PrepNcResult& result);

/// Two weighted sets of preparations declared operationally equivalent.
struct OperationalEquivalence {
  std::vector<std::pair<std::size_t, Rational>> left;
  std::vector<std::pair<std::size_t, Rational>> right;
};

/// Statistics of preparations over a known (possibly incomplete) set of measurements.
struct PreparationData {
  std::vector<std::string> preparations;
  std::vector<std::string> measurements;
  std::vector<int> outcome_counts;
  /// stats[P][M][k] = p(k|P,M).
  std::vector<std::vector<VectorXr>> stats;
  std::vector<OperationalEquivalence> equivalences;
};

enum class PuseyVerdict { Contextual, Inconclusive };

struct PuseyResult {
  PuseyVerdict verdict = PuseyVerdict::Inconclusive;
  std::vector<std::size_t> vertex_counts;   // |vert Δ_P| per preparation
  std::vector<bool> equivalence_feasible;   // hull intersection per equivalence
  bool joint_feasible = true;
  VectorXr joint_dual;
};

/// Assignment polytope Δ_P as vertices over the deterministic assignments
/// (outcome per measurement, first measurement most significant).
std::vector<VectorXr> assignment_polytope_vertices(const PreparationData& data, std::size_t preparation);

/// Contextual iff some declared equivalence, or all of them jointly, admits
/// no points μ_P ∈ Δ_P whose weighted mixtures coincide. Throws
/// EmptyAssignmentPolytope and InconsistentEquivalence.
PuseyResult pusey_incomplete_check(const PreparationData& data);

/// Qubit preparations from rational Bloch vectors measured in X, Y, Z.
PreparationData qubit_xyz_data(const std::vector<std::string>& labels,
                               const std::vector<Eigen::Matrix<Rational, 3, 1>>& bloch,
                               std::vector<OperationalEquivalence> equivalences);

/// The six-decomposition instance as X, Y, Z statistics. Bloch vectors are
/// rationalised and shrunk just inside the ball so that ψ_c = −(ψ_a + ψ_b)
/// and ψ⊥ = −ψ hold exactly; each decomposition is declared equivalent to the first.
PreparationData six_ensemble_data(const PrepEnsembleProblem& problem);

}  // namespace classicality::embedding
