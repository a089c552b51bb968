#include "classicality/sheaf.hpp"

#include <algorithm>

#include "classicality/error.hpp"

namespace classicality::sheaf {

std::vector<LocalSection> enumerate_local_sections(const MeasurementScenario& scenario) {
  std::vector<LocalSection> out;
  for (std::size_t c = 0; c < scenario.context_count(); ++c) {
    const auto& members = scenario.contexts()[c];
    const std::size_t n = scenario.joint_size(members);
    for (std::size_t i = 0; i < n; ++i) out.push_back({c, scenario.decode(members, i)});
  }
  return out;
}

std::uint64_t global_assignment_count(const MeasurementScenario& scenario) {
  std::uint64_t q = 1;
  for (std::size_t m = 0; m < scenario.measurement_count(); ++m) {
    q *= scenario.outcome_count(m);
    if (q > kMaxGlobalAssignments) return kMaxGlobalAssignments + 1;
  }
  return q;
}

GlobalAssignment global_assignment(const MeasurementScenario& scenario, std::uint64_t index) {
  GlobalAssignment out(scenario.measurement_count());
  for (std::size_t m = out.size(); m-- > 0;) {
    const std::uint64_t base = scenario.outcome_count(m);
    out[m] = static_cast<std::size_t>(index % base);
    index /= base;
  }
  return out;
}

IncidenceMatrix IncidenceMatrix::build(const MeasurementScenario& scenario) {
  const std::uint64_t q = global_assignment_count(scenario);
  if (q > kMaxGlobalAssignments) {
    throw Error(ErrorCode::ScenarioTooLarge, "more than 2^24 global assignments");
  }
  std::vector<Eigen::Index> offset(scenario.context_count() + 1, 0);
  for (std::size_t c = 0; c < scenario.context_count(); ++c) {
    offset[c + 1] = offset[c] + static_cast<Eigen::Index>(scenario.joint_size(scenario.contexts()[c]));
  }
  IncidenceMatrix out;
  out.rows_ = offset.back();
  out.support_.resize(static_cast<std::size_t>(q));
  std::vector<std::size_t> local;
  for (std::uint64_t j = 0; j < q; ++j) {
    const GlobalAssignment t = global_assignment(scenario, j);
    auto& column = out.support_[static_cast<std::size_t>(j)];
    column.reserve(scenario.context_count());
    for (std::size_t c = 0; c < scenario.context_count(); ++c) {
      const auto& members = scenario.contexts()[c];
      local.resize(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) local[k] = t[members[k]];
      column.push_back(offset[c] + static_cast<Eigen::Index>(scenario.encode(members, local)));
    }
  }
  return out;
}

bool IncidenceMatrix::operator()(Eigen::Index row, Eigen::Index col) const {
  const auto& column = support_[static_cast<std::size_t>(col)];
  return std::binary_search(column.begin(), column.end(), row);
}

lp::Matrix<Rational> IncidenceMatrix::dense() const {
  lp::Matrix<Rational> m = lp::Matrix<Rational>::Zero(rows_, cols());
  for (Eigen::Index j = 0; j < cols(); ++j) {
    for (Eigen::Index i : column(j)) m(i, j) = 1;
  }
  return m;
}

VectorXr section_vector(const ExactModel& model) {
  Eigen::Index total = 0;
  for (const auto& t : model.tables()) total += t.size();
  VectorXr v(total);
  Eigen::Index at = 0;
  for (const auto& t : model.tables()) {
    v.segment(at, t.size()) = t;
    at += t.size();
  }
  return v;
}

SectionFeasibility solve_global_section(const ExactModel& model) {
  if (!is_exactly_nondisturbing(model)) {
    throw Error(ErrorCode::DisturbingModel, "context marginals disagree on an overlap");
  }
  const IncidenceMatrix M = IncidenceMatrix::build(model.scenario());
  const lp::Matrix<Rational> A = M.dense();
  const VectorXr v = section_vector(model);
  const auto solution = lp::find_feasible_point<Rational>(A, v);
  SectionFeasibility out;
  if (solution.status == lp::Status::Optimal) {
    out.verdict = SectionVerdict::Feasible;
    out.primal = solution.x;
  } else {
    out.verdict = SectionVerdict::Infeasible;
    out.dual = solution.farkas;
  }
  if (!verify_certificate(model, out)) {
    throw Error(ErrorCode::InvalidCertificate, "global-section certificate failed re-verification");
  }
  return out;
}

bool verify_certificate(const ExactModel& model, const SectionFeasibility& result) {
  const auto& scenario = model.scenario();
  if (global_assignment_count(scenario) > kMaxGlobalAssignments) return false;
  const IncidenceMatrix M = IncidenceMatrix::build(scenario);
  const VectorXr v = section_vector(model);
  if (result.verdict == SectionVerdict::Feasible) {
    if (result.primal.size() != M.cols()) return false;
    VectorXr Mx = VectorXr::Zero(M.rows());
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (result.primal[j] < 0) return false;
      if (result.primal[j] == 0) continue;
      for (Eigen::Index i : M.column(j)) Mx[i] += result.primal[j];
    }
    return Mx == v;
  }
  if (result.dual.size() != M.rows()) return false;
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    Rational s(0);
    for (Eigen::Index i : M.column(j)) s += result.dual[i];
    if (s > 0) return false;
  }
  return result.dual.dot(v) > 0;
}

Rational HiddenVariableModel::response(const MeasurementScenario& scenario, const GlobalAssignment& lambda,
                                       std::size_t c, std::size_t flat_section) {
  const auto& members = scenario.contexts()[c];
  const auto outcomes = scenario.decode(members, flat_section);
  Rational product(1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    product *= lambda[members[k]] == outcomes[k] ? 1 : 0;
  }
  return product;
}

Table<Rational> HiddenVariableModel::context_table(const MeasurementScenario& scenario, std::size_t c) const {
  const auto& members = scenario.contexts()[c];
  Table<Rational> t = Table<Rational>::Zero(static_cast<Eigen::Index>(scenario.joint_size(members)));
  for (std::size_t k = 0; k < hidden.size(); ++k) {
    for (Eigen::Index s = 0; s < t.size(); ++s) {
      t[s] += weights[k] * response(scenario, hidden[k], c, static_cast<std::size_t>(s));
    }
  }
  return t;
}

HiddenVariableModel hv_model_from_section(const VectorXr& x, const MeasurementScenario& scenario) {
  const std::uint64_t q = global_assignment_count(scenario);
  if (q > kMaxGlobalAssignments || static_cast<std::uint64_t>(x.size()) != q) {
    throw Error(ErrorCode::InvalidCertificate, "weight vector does not match the global assignments");
  }
  HiddenVariableModel out;
  Rational total(0);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] < 0) throw Error(ErrorCode::InvalidCertificate, "negative weight");
    if (x[j] == 0) continue;
    out.hidden.push_back(global_assignment(scenario, static_cast<std::uint64_t>(j)));
    out.weights.push_back(x[j]);
    total += x[j];
  }
  if (total != 1) throw Error(ErrorCode::InvalidCertificate, "weights do not sum to 1");
  return out;
}

}  // namespace classicality::sheaf
