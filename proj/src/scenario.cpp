#include "classicality/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "classicality/error.hpp"

namespace classicality {

using Context = MeasurementScenario::Context;

MeasurementScenario MeasurementScenario::create(std::vector<Measurement> measurements,
                                                const std::vector<std::vector<std::string>>& contexts) {
  MeasurementScenario out;
  std::set<std::string> labels;
  for (const auto& m : measurements) {
    if (m.label.empty()) throw Error(ErrorCode::InvalidScenario, "empty measurement label");
    if (!labels.insert(m.label).second) {
      throw Error(ErrorCode::InvalidScenario, "duplicate measurement label '" + m.label + "'");
    }
    if (m.outcomes.size() < 2) {
      throw Error(ErrorCode::InvalidScenario, "measurement '" + m.label + "' needs at least two outcomes");
    }
    std::set<std::string> outcomes(m.outcomes.begin(), m.outcomes.end());
    if (outcomes.size() != m.outcomes.size()) {
      throw Error(ErrorCode::InvalidScenario, "measurement '" + m.label + "' repeats an outcome");
    }
  }
  out.measurements_ = std::move(measurements);
  std::set<Context> seen;
  std::vector<bool> covered(out.measurements_.size(), false);
  for (const auto& labels_in_context : contexts) {
    if (labels_in_context.empty()) throw Error(ErrorCode::InvalidScenario, "empty context");
    Context c;
    for (const auto& label : labels_in_context) c.push_back(out.index_of(label));
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) {
      throw Error(ErrorCode::InvalidScenario, "context lists a measurement twice");
    }
    if (!seen.insert(c).second) throw Error(ErrorCode::InvalidScenario, "duplicate context");
    for (auto m : c) covered[m] = true;
    out.contexts_.push_back(std::move(c));
  }
  for (std::size_t m = 0; m < covered.size(); ++m) {
    if (!covered[m]) {
      throw Error(ErrorCode::InvalidScenario,
                  "measurement '" + out.measurements_[m].label + "' is in no context");
    }
  }
  if (out.contexts_.empty()) throw Error(ErrorCode::InvalidScenario, "scenario has no contexts");
  return out;
}

std::size_t MeasurementScenario::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    if (measurements_[i].label == label) return i;
  }
  throw Error(ErrorCode::LabelMismatch, "unknown measurement '" + std::string(label) + "'");
}

std::size_t MeasurementScenario::joint_size(const Context& members) const {
  std::size_t n = 1;
  for (auto m : members) n *= outcome_count(m);
  return n;
}

std::vector<std::size_t> MeasurementScenario::decode(const Context& members, std::size_t flat) const {
  std::vector<std::size_t> out(members.size());
  for (std::size_t k = members.size(); k-- > 0;) {
    const std::size_t base = outcome_count(members[k]);
    out[k] = flat % base;
    flat /= base;
  }
  return out;
}

std::size_t MeasurementScenario::encode(const Context& members, const std::vector<std::size_t>& outcomes) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < members.size(); ++k) flat = flat * outcome_count(members[k]) + outcomes[k];
  return flat;
}

std::string MeasurementScenario::context_key(std::size_t context) const {
  std::string key;
  for (auto m : contexts_[context]) {
    if (!key.empty()) key += ',';
    key += measurements_[m].label;
  }
  return key;
}

template <class Scalar>
EmpiricalModel<Scalar> EmpiricalModel<Scalar>::create(MeasurementScenario scenario,
                                                      std::vector<Table<Scalar>> tables) {
  if (tables.size() != scenario.context_count()) {
    throw Error(ErrorCode::ShapeMismatch, "one table per context is required");
  }
  for (std::size_t c = 0; c < tables.size(); ++c) {
    const auto expected = static_cast<Eigen::Index>(scenario.joint_size(scenario.contexts()[c]));
    if (tables[c].size() != expected) {
      throw Error(ErrorCode::ShapeMismatch, "table for context " + scenario.context_key(c) +
                                                " has the wrong number of entries");
    }
    Scalar sum(0);
    for (Eigen::Index i = 0; i < tables[c].size(); ++i) {
      if constexpr (std::is_floating_point_v<Scalar>) {
        if (!(tables[c][i] >= -1e-12)) {
          throw Error(ErrorCode::InvalidState, "negative probability in context " + scenario.context_key(c));
        }
        tables[c][i] = std::max(tables[c][i], 0.0);
      } else if (tables[c][i] < 0) {
        throw Error(ErrorCode::InvalidState, "negative probability in context " + scenario.context_key(c));
      }
      sum += tables[c][i];
    }
    bool normalized;
    if constexpr (std::is_floating_point_v<Scalar>) {
      normalized = std::abs(sum - 1.0) <= 1e-12;
    } else {
      normalized = sum == 1;
    }
    if (!normalized) {
      throw Error(ErrorCode::InvalidState, "table for context " + scenario.context_key(c) + " does not sum to 1");
    }
  }
  return EmpiricalModel(std::move(scenario), std::move(tables));
}

template <class Scalar>
Table<Scalar> marginalize(const MeasurementScenario& scenario, const Context& context, const Table<Scalar>& table,
                          const Context& subset) {
  std::vector<std::size_t> positions;
  for (auto m : subset) {
    auto it = std::find(context.begin(), context.end(), m);
    if (it == context.end()) {
      throw Error(ErrorCode::NotASubset, "measurement '" + scenario.measurements()[m].label +
                                             "' is not in the context");
    }
    positions.push_back(static_cast<std::size_t>(it - context.begin()));
  }
  Context sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != subset) throw Error(ErrorCode::NotASubset, "subset must be listed in ascending order");
  Table<Scalar> out = Table<Scalar>::Zero(static_cast<Eigen::Index>(scenario.joint_size(subset)));
  std::vector<std::size_t> sub(subset.size());
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    const auto full = scenario.decode(context, static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < positions.size(); ++k) sub[k] = full[positions[k]];
    out[static_cast<Eigen::Index>(scenario.encode(subset, sub))] += table[i];
  }
  return out;
}

namespace {

Context intersect(const Context& a, const Context& b) {
  Context out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

template <class Scalar>
NoDisturbanceReport validate_no_disturbance(const EmpiricalModel<Scalar>& model) {
  NoDisturbanceReport report;
  const auto& s = model.scenario();
  for (std::size_t a = 0; a < s.context_count(); ++a) {
    for (std::size_t b = a + 1; b < s.context_count(); ++b) {
      const Context overlap = intersect(s.contexts()[a], s.contexts()[b]);
      if (overlap.empty()) continue;
      const Table<Scalar> ma = marginalize(s, s.contexts()[a], model.table(a), overlap);
      const Table<Scalar> mb = marginalize(s, s.contexts()[b], model.table(b), overlap);
      for (Eigen::Index i = 0; i < ma.size(); ++i) {
        double gap;
        if constexpr (std::is_floating_point_v<Scalar>) {
          gap = std::abs(ma[i] - mb[i]);
        } else {
          gap = to_double(Rational(abs(Rational(ma[i] - mb[i]))));
        }
        if (gap > report.worst_violation) {
          report.worst_violation = gap;
          report.context_a = a;
          report.context_b = b;
        }
      }
    }
  }
  report.pass = report.worst_violation <= kNoDisturbanceTol;
  return report;
}

bool is_exactly_nondisturbing(const ExactModel& model) {
  const auto& s = model.scenario();
  for (std::size_t a = 0; a < s.context_count(); ++a) {
    for (std::size_t b = a + 1; b < s.context_count(); ++b) {
      const Context overlap = intersect(s.contexts()[a], s.contexts()[b]);
      if (overlap.empty()) continue;
      if (marginalize(s, s.contexts()[a], model.table(a), overlap) !=
          marginalize(s, s.contexts()[b], model.table(b), overlap)) {
        return false;
      }
    }
  }
  return true;
}

template class EmpiricalModel<double>;
template class EmpiricalModel<Rational>;
template Table<double> marginalize(const MeasurementScenario&, const Context&, const Table<double>&,
                                   const Context&);
template Table<Rational> marginalize(const MeasurementScenario&, const Context&, const Table<Rational>&,
                                     const Context&);
template NoDisturbanceReport validate_no_disturbance(const EmpiricalModel<double>&);
template NoDisturbanceReport validate_no_disturbance(const EmpiricalModel<Rational>&);

FloatModel from_quantum(const quantum::DensityMatrix& state,
                        const std::vector<std::vector<quantum::ProjectiveContext>>& contexts,
                        const std::map<std::string, std::string>& sharing) {
  using quantum::ComplexMatrix;
  auto rename = [&](const std::string& label) {
    auto it = sharing.find(label);
    return it == sharing.end() ? label : it->second;
  };
  std::vector<Measurement> measurements;
  std::vector<const quantum::ProjectiveContext*> representative;
  std::vector<std::vector<std::string>> context_labels;
  for (const auto& context : contexts) {
    std::vector<std::string> labels;
    for (const auto& pvm : context) {
      if (pvm.dim() != state.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "measurement '" + pvm.label() + "' acts on the wrong dimension");
      }
      const std::string label = rename(pvm.label());
      auto it = std::find_if(measurements.begin(), measurements.end(),
                             [&](const Measurement& m) { return m.label == label; });
      if (it == measurements.end()) {
        Measurement m{label, {}};
        for (std::size_t k = 0; k < pvm.projectors().size(); ++k) m.outcomes.push_back(std::to_string(k));
        measurements.push_back(std::move(m));
        representative.push_back(&pvm);
      } else {
        const auto& first = *representative[static_cast<std::size_t>(it - measurements.begin())];
        bool same = first.projectors().size() == pvm.projectors().size();
        for (std::size_t k = 0; same && k < pvm.projectors().size(); ++k) {
          same = quantum::max_abs(first.projectors()[k] - pvm.projectors()[k]) <= quantum::kConstructionTol;
        }
        if (!same) {
          throw Error(ErrorCode::InconsistentSharing, "measurement '" + label + "' is shared with different projectors");
        }
      }
      labels.push_back(label);
    }
    for (std::size_t i = 0; i < context.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        for (const auto& p : context[i].projectors()) {
          for (const auto& q : context[j].projectors()) {
            if (quantum::max_abs(p * q - q * p) > quantum::kConstructionTol) {
              throw Error(ErrorCode::NonCommutingContext,
                          "'" + labels[i] + "' and '" + labels[j] + "' do not commute");
            }
          }
        }
      }
    }
    context_labels.push_back(std::move(labels));
  }
  MeasurementScenario scenario = MeasurementScenario::create(std::move(measurements), context_labels);
  std::vector<Table<double>> tables;
  for (std::size_t c = 0; c < scenario.context_count(); ++c) {
    const Context& members = scenario.contexts()[c];
    Table<double> t(static_cast<Eigen::Index>(scenario.joint_size(members)));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const auto outcomes = scenario.decode(members, static_cast<std::size_t>(i));
      ComplexMatrix product = quantum::identity(state.dim());
      for (std::size_t k = 0; k < members.size(); ++k) {
        product = product * representative[members[k]]->projectors()[outcomes[k]];
      }
      t[i] = std::clamp((state.matrix() * product).trace().real(), 0.0, 1.0);
    }
    tables.push_back(std::move(t));
  }
  return FloatModel::create(std::move(scenario), std::move(tables));
}

FloatModel from_observables(const quantum::DensityMatrix& state, const ObservableSet& set) {
  if (set.labels.size() != set.observables.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one label per observable is required");
  }
  std::vector<quantum::ProjectiveContext> pvms;
  for (std::size_t i = 0; i < set.observables.size(); ++i) {
    pvms.push_back(quantum::ProjectiveContext::spectral(set.labels[i], set.observables[i]));
  }
  std::vector<std::vector<quantum::ProjectiveContext>> contexts;
  for (const auto& c : set.contexts) {
    std::vector<quantum::ProjectiveContext> members;
    for (auto i : c) {
      if (i >= pvms.size()) throw Error(ErrorCode::LabelMismatch, "context refers to a missing observable");
      members.push_back(pvms[i]);
    }
    contexts.push_back(std::move(members));
  }
  return from_quantum(state, contexts);
}

namespace {

struct ConstraintSystem {
  // Rows over the concatenation of all table entries.
  std::vector<std::vector<std::pair<Eigen::Index, int>>> rows;
  std::vector<Rational> rhs;
};

ConstraintSystem consistency_constraints(const MeasurementScenario& s) {
  ConstraintSystem out;
  std::vector<Eigen::Index> offset(s.context_count() + 1, 0);
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    offset[c + 1] = offset[c] + static_cast<Eigen::Index>(s.joint_size(s.contexts()[c]));
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    std::vector<std::pair<Eigen::Index, int>> row;
    for (Eigen::Index i = offset[c]; i < offset[c + 1]; ++i) row.emplace_back(i, 1);
    out.rows.push_back(std::move(row));
    out.rhs.emplace_back(1);
  }
  for (std::size_t a = 0; a < s.context_count(); ++a) {
    for (std::size_t b = a + 1; b < s.context_count(); ++b) {
      const Context overlap = intersect(s.contexts()[a], s.contexts()[b]);
      if (overlap.empty()) continue;
      const std::size_t n = s.joint_size(overlap);
      std::vector<std::vector<std::pair<Eigen::Index, int>>> block(n);
      for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t c = side == 0 ? a : b;
        const Context& members = s.contexts()[c];
        std::vector<std::size_t> positions;
        for (auto m : overlap) {
          positions.push_back(static_cast<std::size_t>(std::find(members.begin(), members.end(), m) - members.begin()));
        }
        std::vector<std::size_t> sub(overlap.size());
        for (std::size_t i = 0; i < s.joint_size(members); ++i) {
          const auto full = s.decode(members, i);
          for (std::size_t k = 0; k < positions.size(); ++k) sub[k] = full[positions[k]];
          block[s.encode(overlap, sub)].emplace_back(offset[c] + static_cast<Eigen::Index>(i), side == 0 ? 1 : -1);
        }
      }
      for (auto& row : block) {
        out.rows.push_back(std::move(row));
        out.rhs.emplace_back(0);
      }
    }
  }
  return out;
}

std::vector<Table<Rational>> split(const MeasurementScenario& s, const VectorXr& flat) {
  std::vector<Table<Rational>> out;
  Eigen::Index at = 0;
  for (const auto& c : s.contexts()) {
    const auto n = static_cast<Eigen::Index>(s.joint_size(c));
    out.push_back(flat.segment(at, n));
    at += n;
  }
  return out;
}

}  // namespace

ExactModel to_exact(const FloatModel& model) {
  const auto report = validate_no_disturbance(model);
  if (!report.pass) {
    throw Error(ErrorCode::DisturbingModel,
                "contexts " + model.scenario().context_key(report.context_a) + " and " +
                    model.scenario().context_key(report.context_b) + " disagree on their overlap");
  }
  const auto& s = model.scenario();
  Eigen::Index total = 0;
  for (const auto& t : model.tables()) total += t.size();
  Eigen::VectorXd flat(total);
  {
    Eigen::Index at = 0;
    for (const auto& t : model.tables()) {
      flat.segment(at, t.size()) = t;
      at += t.size();
    }
  }

  VectorXr approx(total);
  for (Eigen::Index i = 0; i < total; ++i) approx[i] = to_rational(flat[i]);
  {
    auto tables = split(s, approx);
    bool normalized = true;
    for (const auto& t : tables) normalized = normalized && t.sum() == 1;
    if (normalized) {
      auto candidate = ExactModel::create(s, std::move(tables));
      if (is_exactly_nondisturbing(candidate)) return candidate;
    }
  }

  const ConstraintSystem system = consistency_constraints(s);
  const auto m = static_cast<Eigen::Index>(system.rows.size());
  VectorXr x0(total);
  for (Eigen::Index i = 0; i < total; ++i) x0[i] = round_to_grid(std::max(flat[i], 0.0));
  std::vector<bool> support(static_cast<std::size_t>(total));
  for (Eigen::Index i = 0; i < total; ++i) support[static_cast<std::size_t>(i)] = x0[i] > 0;

  for (int attempt = 0; attempt < 16; ++attempt) {
    MatrixXr A = MatrixXr::Zero(m, total);
    VectorXr r(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      Rational lhs(0);
      for (const auto& [j, coefficient] : system.rows[static_cast<std::size_t>(k)]) {
        if (support[static_cast<std::size_t>(j)]) A(k, j) = coefficient;
        lhs += coefficient * x0[j];
      }
      r[k] = system.rhs[static_cast<std::size_t>(k)] - lhs;
    }
    // Least-norm correction on the support: δ = Aᵀz with (AAᵀ)z = r.
    const MatrixXr gram = A * A.transpose();
    const auto z = solve_exact(gram, r);
    if (!z) break;
    const VectorXr x = x0 + A.transpose() * *z;
    bool nonnegative = true;
    for (Eigen::Index i = 0; i < total; ++i) {
      if (x[i] < 0) {
        nonnegative = false;
        support[static_cast<std::size_t>(i)] = false;
        x0[i] = 0;
      }
    }
    if (!nonnegative) continue;
    auto candidate = ExactModel::create(s, split(s, x));
    if (is_exactly_nondisturbing(candidate)) return candidate;
    break;
  }
  throw Error(ErrorCode::DisturbingModel, "no exact non-disturbing model lies within rounding distance");
}

FloatModel to_float(const ExactModel& model) {
  std::vector<Table<double>> tables;
  for (const auto& t : model.tables()) tables.push_back(to_double(t));
  // Per-entry rounding may leave the sum a few ulps away from 1.
  for (auto& t : tables) {
    const double sum = t.sum();
    if (sum > 0) t /= sum;
  }
  return FloatModel::create(model.scenario(), std::move(tables));
}

bool is_normalized(const SequentialStats& stats, double tol) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  auto check2 = [&](const std::array<double, 2>& p) {
    return in_unit(p[0]) && in_unit(p[1]) && std::abs(p[0] + p[1] - 1.0) <= tol;
  };
  auto check4 = [&](const std::array<std::array<double, 2>, 2>& p, bool distribution) {
    double sum = 0.0;
    for (const auto& row : p) {
      for (double v : row) {
        if (!in_unit(v)) return false;
        sum += v;
      }
    }
    return !distribution || std::abs(sum - 1.0) <= tol;
  };
  return check2(stats.single_a) && check2(stats.single_b) && check4(stats.pair_ab, true) &&
         check4(stats.joint, true) && check4(stats.flip, false) && check4(stats.bab, true);
}

FlipErrorReport flip_error_bounds(const SequentialStats& stats) {
  constexpr double kSlack = 1e-12;
  const double sign[2] = {1.0, -1.0};
  FlipErrorReport out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out.correlator += sign[a] * sign[b] * stats.joint[a][b];
      out.sequential_correlator += sign[a] * sign[b] * stats.pair_ab[a][b];
    }
  }
  out.p_flip = stats.flip[0][1] + stats.flip[1][0];
  out.p_err = stats.bab[0][1] + stats.bab[1][0];
  out.lhs = std::abs(out.correlator - out.sequential_correlator);
  out.chain_holds = out.lhs <= 2.0 * out.p_flip + kSlack && 2.0 * out.p_flip <= 2.0 * out.p_err + kSlack;
  return out;
}

SequentialStats sequential_stats_from_quantum(const quantum::DensityMatrix& state,
                                              const quantum::ProjectiveContext& a,
                                              const quantum::ProjectiveContext& b) {
  if (a.projectors().size() != 2 || b.projectors().size() != 2) {
    throw Error(ErrorCode::InvalidScenario, "sequential statistics need dichotomic measurements");
  }
  if (a.dim() != state.dim() || b.dim() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "measurement and state dimensions differ");
  }
  using quantum::ComplexMatrix;
  // Probability of a Lüders sequence of projectors.
  auto sequence = [&](std::initializer_list<const ComplexMatrix*> ops) {
    ComplexMatrix rho = state.matrix();
    for (const auto* p : ops) rho = (*p * rho * *p).eval();
    return std::clamp(rho.trace().real(), 0.0, 1.0);
  };
  const auto& A = a.projectors();
  const auto& B = b.projectors();
  SequentialStats out;
  for (int i = 0; i < 2; ++i) {
    out.single_a[i] = sequence({&A[i]});
    out.single_b[i] = sequence({&B[i]});
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.pair_ab[i][j] = sequence({&A[i], &B[j]});
      out.joint[i][j] = sequence({&B[j], &A[i]});
      double discarded = 0.0;
      for (int k = 0; k < 2; ++k) discarded += sequence({&B[i], &A[k], &B[j]});
      out.bab[i][j] = discarded;
      out.flip[i][j] = i == j ? 0.0 : discarded;
    }
  }
  return out;
}

}  // namespace classicality
