#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "classicality/quantum.hpp"
#include "classicality/rational.hpp"
#include "classicality/scenario.hpp"

namespace classicality::polytope {

/// Bipartite conditional table p(a,b|x,y), flattened with b fastest, then a,
/// then y, then x.
template <class Scalar>
class BehaviourT {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Throws ShapeMismatch or InvalidState (negative entry, slice not summing to 1).
  static BehaviourT create(int nX, int nY, int nA, int nB, Vector p);
  static BehaviourT uniform(int nX, int nY, int nA, int nB);

  int nX() const { return nX_; }
  int nY() const { return nY_; }
  int nA() const { return nA_; }
  int nB() const { return nB_; }
  const Vector& data() const { return p_; }

  static Eigen::Index index(int nY, int nA, int nB, int a, int b, int x, int y) {
    return ((static_cast<Eigen::Index>(x) * nY + y) * nA + a) * nB + b;
  }
  const Scalar& operator()(int a, int b, int x, int y) const { return p_[index(nY_, nA_, nB_, a, b, x, y)]; }

  /// Σ_{a,b} (−1)^{a+b} p(a,b|x,y) for dichotomic outcomes.
  Scalar correlator(int x, int y) const;
  bool is_no_signalling() const;

 private:
  BehaviourT(int nX, int nY, int nA, int nB, Vector p) : nX_(nX), nY_(nY), nA_(nA), nB_(nB), p_(std::move(p)) {}
  int nX_, nY_, nA_, nB_;
  Vector p_;
};

using Behaviour = BehaviourT<Rational>;
using FloatBehaviour = BehaviourT<double>;

/// Scenario with measurements A0…A(nX−1), B0…B(nY−1) and contexts {Ax, By}.
MeasurementScenario bell_scenario(int nX, int nY, int nA, int nB);
ExactModel to_model(const Behaviour& b);
FloatModel to_model(const FloatBehaviour& b);

/// Reads a model as a behaviour when every context is {Alice measurement, Bob
/// measurement}, all such pairs occur, and outcome counts are uniform per party.
std::optional<Behaviour> as_behaviour(const ExactModel& model, const std::vector<std::string>& alice,
                                      const std::vector<std::string>& bob);

/// Exact behaviour nearest to a floating one (see to_exact for models).
Behaviour to_exact(const FloatBehaviour& b);
FloatBehaviour to_float(const Behaviour& b);

/// p(a,b|x,y) = Tr((A_{a|x} ⊗ B_{b|y}) ρ).
FloatBehaviour behaviour_from_quantum(const quantum::DensityMatrix& state,
                                      const std::vector<quantum::ProjectiveContext>& alice,
                                      const std::vector<quantum::ProjectiveContext>& bob);

/// Singlet-type behaviour for spin observables cosθσ_z + sinθσ_x at angles
/// (a, c) for Alice and (b, d) for Bob.
FloatBehaviour chsh_behaviour(const quantum::DensityMatrix& state, double a, double b, double c, double d);

struct LdVertex {
  std::vector<int> f;  // Alice: setting → outcome
  std::vector<int> g;  // Bob: setting → outcome

  friend bool operator==(const LdVertex&, const LdVertex&) = default;
};

inline constexpr std::size_t kMaxLdVertices = 1'000'000;

/// All nA^nX · nB^nY local deterministic strategies, lexicographic in (f, g).
/// Throws TooLarge past 10⁶.
std::vector<LdVertex> enumerate_ld_vertices(int nX, int nY, int nA, int nB);
Behaviour vertex_behaviour(const LdVertex& v, int nA, int nB);

enum class InequalityKind { Bell, Noncontextuality };

/// Σ coefficients · p ≤ bound.
struct LinearInequality {
  int nX = 0, nY = 0, nA = 0, nB = 0;
  VectorXr coefficients;
  Rational bound;
  InequalityKind kind = InequalityKind::Bell;
};

template <class Scalar>
struct InequalityValue {
  Scalar value;
  bool satisfied = true;
};

/// Throws ShapeMismatch.
InequalityValue<Rational> evaluate_inequality(const LinearInequality& ineq, const Behaviour& b);
InequalityValue<double> evaluate_inequality(const LinearInequality& ineq, const FloatBehaviour& b);

/// E(0,0) − E(0,1) + E(1,0) + E(1,1) ≤ 2 on the (2,2,2,2) scenario.
LinearInequality chsh_inequality();

struct Membership {
  bool inside = false;
  /// Convex weights over enumerate_ld_vertices order (inside only).
  VectorXr weights;
  /// Bell inequality whose maximum over LD vertices equals its bound and
  /// which the behaviour violates (outside only).
  std::optional<LinearInequality> separating;
  /// First LD vertex, in enumeration order, attaining the bound.
  std::size_t tight_vertex = 0;
};

Membership membership_lp(const Behaviour& b);

/// Re-verifies a membership certificate against all LD vertices.
bool verify_membership(const Behaviour& b, const Membership& m);

/// Σ⟨A_i⟩ − ½ Σ_{(i,j)} ⟨A_iA_j⟩ ≤ n(d−2) − 2, with (i,j) ranging over the
/// compatible pairs of the declared contexts. The context structure is taken
/// as given and not checked against any KS property.
struct BadziagInequality {
  int n = 0;
  int d = 0;
  Rational bound;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  /// LHS for ±1 values (or expectations) of the n observables and pair correlators.
  Rational evaluate(const std::vector<Rational>& singles,
                    const std::vector<Rational>& pair_correlators) const;
  /// LHS for a deterministic ±1 assignment.
  Rational evaluate_assignment(const std::vector<int>& values) const;
};

/// Throws DegenerateContexts for d < 3 and InvalidScenario for n < 1.
BadziagInequality badziag_inequality(int n, int d, const std::vector<std::vector<std::size_t>>& contexts = {});

struct OrthogonalityGraph {
  std::vector<std::string> labels;
  std::vector<Rational> weights;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Empty, or one projector per vertex.
  std::vector<quantum::ComplexMatrix> projectors;

  std::size_t size() const { return labels.size(); }
  /// Throws InvalidScenario on self-loops, negative weights or size mismatch.
  void validate() const;
};

/// The n-cycle with unit weights and edges (i, i+1 mod n).
OrthogonalityGraph cycle_graph(std::size_t n);

struct IndependenceResult {
  Rational value;
  std::vector<std::size_t> witness;  // ascending
};

/// Exact maximum-weight independent set by branch and bound. Throws TooLarge past 40 vertices.
IndependenceResult weighted_independence_number(const OrthogonalityGraph& g);

struct CswResult {
  double lhs = 0.0;
  std::optional<Rational> exact_lhs;
  Rational bound;
  bool violated = false;
};

/// Σ w_i P(Π_i=1) − Σ_{edges} max(w_i,w_j) p(Π_i=1, Π_j=1) against α(G,w).
/// Vertices are matched to model measurements by label; outcome 0 ↔ Π = 1.
/// Throws LabelMismatch.
CswResult csw_inequality(const OrthogonalityGraph& g, const ExactModel& model);
/// Same functional from the graph's projectors on a quantum state.
CswResult csw_inequality(const OrthogonalityGraph& g, const quantum::DensityMatrix& state);

struct BellFromContextuality {
  LinearInequality inequality;
  FloatBehaviour behaviour;  // on max_entangled(d), Bob measuring conjugates
  double quantum_value = 0.0;
};

/// Bipartite functional Σ w_i P(Π_i^A=1, Π_i^B=1) − Σ_{edges} max(w_i,w_j)/2
/// [P(Π_i^A=1, Π_j^B=1) + P(Π_j^A=1, Π_i^B=1)] ≤ α(G,w), with setting i ↔
/// measurement {Π_i, 𝟙 − Π_i}. Throws MissingProjectors.
BellFromContextuality contextuality_to_bell(const OrthogonalityGraph& g, Eigen::Index d);

struct SdcReduction {
  ObservableSet reduced;
  quantum::Ket state;
};

/// Removes observable `chosen` and returns the Lüders post-measurement
/// eigenstate for `eigenvalue`. Contexts lose the chosen member; contexts
/// that become empty or duplicate are dropped. Throws BadEigenvalue.
SdcReduction sic_to_sdc_reduction(const ObservableSet& set, std::size_t chosen, double eigenvalue);

/// The Peres-Mermin square as an observable set with its six row/column contexts.
ObservableSet peres_mermin_set();

}  // namespace classicality::polytope
