#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "classicality/lp.hpp"
#include "classicality/rational.hpp"
#include "classicality/scenario.hpp"

namespace classicality::sheaf {

/// A local section: one joint outcome of one context.
struct LocalSection {
  std::size_t context = 0;
  std::vector<std::size_t> outcomes;  // aligned with the context's members
};

/// An outcome index for every measurement of the scenario.
using GlobalAssignment = std::vector<std::size_t>;

inline constexpr std::uint64_t kMaxGlobalAssignments = std::uint64_t{1} << 24;

/// Rows ordered context by context, each block lexicographic; p = Σ_C Π_{m∈C}|O_m|.
std::vector<LocalSection> enumerate_local_sections(const MeasurementScenario& scenario);

/// Π_m |O_m|, saturating at kMaxGlobalAssignments + 1.
std::uint64_t global_assignment_count(const MeasurementScenario& scenario);

/// Global assignment number `index`, first measurement most significant.
GlobalAssignment global_assignment(const MeasurementScenario& scenario, std::uint64_t index);

/// p×q Boolean matrix with M[i,j] = 1 iff t_j restricted to the context of
/// row i equals s_i. Stored by column: each column has one 1 per context.
class IncidenceMatrix {
 public:
  /// Throws ScenarioTooLarge when q > 2²⁴.
  static IncidenceMatrix build(const MeasurementScenario& scenario);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return static_cast<Eigen::Index>(support_.size()); }
  bool operator()(Eigen::Index row, Eigen::Index col) const;
  /// Row indices of the 1s in column `col`, ascending.
  const std::vector<Eigen::Index>& column(Eigen::Index col) const {
    return support_[static_cast<std::size_t>(col)];
  }
  lp::Matrix<Rational> dense() const;

 private:
  Eigen::Index rows_ = 0;
  std::vector<std::vector<Eigen::Index>> support_;
};

/// The model's tables stacked in local-section order.
VectorXr section_vector(const ExactModel& model);

enum class SectionVerdict { Feasible, Infeasible };

/// Feasible: x ≥ 0 with Mx = v. Infeasible: y with yᵀM ≤ 0 and yᵀv > 0.
struct SectionFeasibility {
  SectionVerdict verdict = SectionVerdict::Infeasible;
  VectorXr primal;
  VectorXr dual;
};

/// Exact rational LP {Mx = v, x ≥ 0}. Throws DisturbingModel unless the
/// model is exactly non-disturbing.
SectionFeasibility solve_global_section(const ExactModel& model);

/// Re-checks a certificate by direct multiplication against the model.
bool verify_certificate(const ExactModel& model, const SectionFeasibility& result);

/// Factorisable hidden-variable model: Λ = support of x, h_Λ = x restricted
/// to Λ, h_C^λ = Dirac on λ|_C.
struct HiddenVariableModel {
  std::vector<GlobalAssignment> hidden;
  std::vector<Rational> weights;

  /// Σ_λ h_Λ(λ) h_C^λ for context `c`.
  Table<Rational> context_table(const MeasurementScenario& scenario, std::size_t c) const;
  /// h_C^λ(s) = Π_{m∈C} δ(λ(m), s(m)).
  static Rational response(const MeasurementScenario& scenario, const GlobalAssignment& lambda, std::size_t c,
                           std::size_t flat_section);
};

/// Throws InvalidCertificate unless x ≥ 0 has one entry per global assignment and sums to 1.
HiddenVariableModel hv_model_from_section(const VectorXr& x, const MeasurementScenario& scenario);

}  // namespace classicality::sheaf
