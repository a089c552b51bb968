#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "classicality/quantum.hpp"
#include "classicality/rational.hpp"

namespace classicality {

struct Measurement {
  std::string label;
  std::vector<std::string> outcomes;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// A measurement scenario (X, O, M). Contexts hold measurement indices in
/// ascending order; joint outcomes of a context are enumerated
/// lexicographically with the first member most significant.
class MeasurementScenario {
 public:
  using Context = std::vector<std::size_t>;

  static MeasurementScenario create(std::vector<Measurement> measurements,
                                    const std::vector<std::vector<std::string>>& contexts);

  const std::vector<Measurement>& measurements() const { return measurements_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  std::size_t measurement_count() const { return measurements_.size(); }
  std::size_t context_count() const { return contexts_.size(); }

  /// Throws LabelMismatch for unknown labels.
  std::size_t index_of(std::string_view label) const;
  std::size_t outcome_count(std::size_t measurement) const {
    return measurements_[measurement].outcomes.size();
  }

  /// Number of joint outcomes of an arbitrary set of measurements.
  std::size_t joint_size(const Context& members) const;
  std::vector<std::size_t> decode(const Context& members, std::size_t flat) const;
  std::size_t encode(const Context& members, const std::vector<std::size_t>& outcomes) const;

  /// "A,B" for the context {A, B}.
  std::string context_key(std::size_t context) const;

  friend bool operator==(const MeasurementScenario&, const MeasurementScenario&) = default;

 private:
  std::vector<Measurement> measurements_;
  std::vector<Context> contexts_;
};

template <class Scalar>
using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// One outcome distribution per context. Entries are nonnegative and each
/// table sums to one (exactly for Rational, within 1e-12 for double).
template <class Scalar>
class EmpiricalModel {
 public:
  static EmpiricalModel create(MeasurementScenario scenario, std::vector<Table<Scalar>> tables);

  const MeasurementScenario& scenario() const { return scenario_; }
  const std::vector<Table<Scalar>>& tables() const { return tables_; }
  const Table<Scalar>& table(std::size_t context) const { return tables_[context]; }

 private:
  EmpiricalModel(MeasurementScenario scenario, std::vector<Table<Scalar>> tables)
      : scenario_(std::move(scenario)), tables_(std::move(tables)) {}
  MeasurementScenario scenario_;
  std::vector<Table<Scalar>> tables_;
};

using ExactModel = EmpiricalModel<Rational>;
using FloatModel = EmpiricalModel<double>;

/// Restriction of a table over `context` to `subset` (kept in ascending order).
/// Throws NotASubset.
template <class Scalar>
Table<Scalar> marginalize(const MeasurementScenario& scenario, const MeasurementScenario::Context& context,
                          const Table<Scalar>& table, const MeasurementScenario::Context& subset);

struct NoDisturbanceReport {
  bool pass = true;
  double worst_violation = 0.0;
  /// Context pair attaining the worst violation (meaningless when there is none).
  std::size_t context_a = 0;
  std::size_t context_b = 0;
};

inline constexpr double kNoDisturbanceTol = 1e-9;

/// ℓ∞ distance between marginals on every pairwise overlap; passes iff ≤ 1e-9.
template <class Scalar>
NoDisturbanceReport validate_no_disturbance(const EmpiricalModel<Scalar>& model);

/// Exact version: true iff all overlapping marginals agree exactly.
bool is_exactly_nondisturbing(const ExactModel& model);

/// One quantum context is a list of jointly measured projective measurements.
/// Measurement labels come from ProjectiveContext::label(), renamed through
/// `sharing` when present; equal labels must carry equal projectors.
FloatModel from_quantum(const quantum::DensityMatrix& state,
                        const std::vector<std::vector<quantum::ProjectiveContext>>& contexts,
                        const std::map<std::string, std::string>& sharing = {});

/// Hermitian observables grouped into commuting contexts (indices into
/// `observables`).
struct ObservableSet {
  std::vector<std::string> labels;
  std::vector<quantum::ComplexMatrix> observables;
  std::vector<std::vector<std::size_t>> contexts;
};

/// Model of an observable set measured on `state`: each observable becomes its
/// spectral measurement, outcome k ↔ k-th largest eigenvalue.
FloatModel from_observables(const quantum::DensityMatrix& state, const ObservableSet& set);

/// Exact rational model closest to a floating one. Entries are first tried as
/// continued-fraction approximants (denominator ≤ 10⁶); if that breaks
/// normalization or no-disturbance, the 10⁻⁶ grid rounding is projected
/// exactly onto the normalization and no-disturbance constraints.
/// Throws DisturbingModel when the input is not within tolerance of a
/// non-disturbing model.
ExactModel to_exact(const FloatModel& model);
FloatModel to_float(const ExactModel& model);

/// Statistics of sequential measurements of two dichotomic observables A, B.
/// Index 0 ↔ outcome +1, index 1 ↔ outcome −1.
struct SequentialStats {
  std::array<double, 2> single_a{};                   // p[±,A]
  std::array<double, 2> single_b{};                   // p[±,B]
  std::array<std::array<double, 2>, 2> pair_ab{};     // p[ab,AB], A first
  std::array<std::array<double, 2>, 2> joint{};       // p[(a|A)&(b|B)]
  std::array<std::array<double, 2>, 2> flip{};        // p[(b|B)&(•b'|AB)]
  std::array<std::array<double, 2>, 2> bab{};         // p[b•b',BAB], A discarded
};

struct FlipErrorReport {
  double correlator = 0.0;             // ⟨AB⟩
  double sequential_correlator = 0.0;  // ⟨A₁B₂⟩
  double lhs = 0.0;                    // |⟨AB⟩ − ⟨A₁B₂⟩|
  double p_flip = 0.0;
  double p_err = 0.0;
  bool chain_holds = false;
};

bool is_normalized(const SequentialStats& stats, double tol = 1e-9);

/// chain_holds iff |⟨AB⟩ − ⟨A₁B₂⟩| ≤ 2 p^flip ≤ 2 p^err + 1e-12.
FlipErrorReport flip_error_bounds(const SequentialStats& stats);

/// Lüders-rule statistics for dichotomic projective measurements A and B.
/// The joint is read from the sequence B then A, and p[(b|B)&(•b'|AB)] is
/// taken equal to its cumulative-noise bound p[b•b',BAB].
SequentialStats sequential_stats_from_quantum(const quantum::DensityMatrix& state,
                                              const quantum::ProjectiveContext& a,
                                              const quantum::ProjectiveContext& b);

}  // namespace classicality
