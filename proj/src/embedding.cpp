#include "classicality/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "classicality/error.hpp"
#include "classicality/lp.hpp"

namespace classicality::embedding {

namespace {

constexpr double kGptTol = 1e-10;

Eigen::MatrixXd columns_of(const std::vector<Eigen::VectorXd>& vs, int dim) {
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vs[k];
  return m;
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m) {
  return m.completeOrthogonalDecomposition().pseudoInverse();
}

/// Flagged effects in ascending index order.
std::vector<std::size_t> flagged_effects(const Gpt& gpt) {
  std::set<std::size_t> s;
  for (const auto& c : gpt.sharp_contexts) s.insert(c.begin(), c.end());
  return {s.begin(), s.end()};
}

std::string effect_label(std::size_t e) { return "e" + std::to_string(e); }

}  // namespace

void Gpt::validate() const {
  if (dim < 1) throw Error(ErrorCode::ShapeMismatch, "GPT dimension must be positive");
  if (unit.size() != dim) throw Error(ErrorCode::ShapeMismatch, "unit has the wrong length");
  for (const auto& s : states) {
    if (s.size() != dim) throw Error(ErrorCode::ShapeMismatch, "state has the wrong length");
    if (std::abs(unit.dot(s) - 1.0) > kGptTol) {
      throw Error(ErrorCode::InconsistentUnit, "unit does not evaluate to 1 on a state");
    }
  }
  for (const auto& e : effects) {
    if (e.size() != dim) throw Error(ErrorCode::ShapeMismatch, "effect has the wrong length");
    for (const auto& s : states) {
      const double p = e.dot(s);
      if (p < -kGptTol || p > 1.0 + kGptTol) {
        throw Error(ErrorCode::InvalidState, "effect probability outside [0,1]");
      }
    }
  }
  for (const auto& c : sharp_contexts) {
    if (c.empty()) throw Error(ErrorCode::InvalidScenario, "empty sharp context");
    for (auto k : c) {
      if (k >= effects.size()) throw Error(ErrorCode::ShapeMismatch, "sharp context names an unknown effect");
    }
  }
}

Eigen::MatrixXd Gpt::probability_table() const {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(effects.size()), static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < effects.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = effects[i].dot(states[j]);
    }
  }
  return p;
}

GptFromData gpt_from_data(const Eigen::MatrixXd& prob) {
  if (prob.rows() == 0 || prob.cols() == 0) throw Error(ErrorCode::ShapeMismatch, "empty probability table");
  if (prob.minCoeff() < -kGptTol || prob.maxCoeff() > 1.0 + kGptTol) {
    throw Error(ErrorCode::InvalidState, "probabilities outside [0,1]");
  }
  GptFromData out;
  // Representatives of operationally distinct columns and rows, first occurrence kept.
  std::vector<Eigen::Index> cols, rows;
  for (Eigen::Index j = 0; j < prob.cols(); ++j) {
    std::size_t found = cols.size();
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if ((prob.col(j) - prob.col(cols[k])).cwiseAbs().maxCoeff() <= kMergeTol) {
        found = k;
        break;
      }
    }
    if (found == cols.size()) cols.push_back(j);
    out.state_of_column.push_back(found);
  }
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    std::size_t found = rows.size();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if ((prob.row(i) - prob.row(rows[k])).cwiseAbs().maxCoeff() <= kMergeTol) {
        found = k;
        break;
      }
    }
    if (found == rows.size()) rows.push_back(i);
    out.effect_of_row.push_back(found);
  }
  Eigen::MatrixXd p(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = prob(rows[i], cols[j]);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = kRankTol * std::max(1.0, sigma.size() > 0 ? sigma[0] : 0.0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma[r] > cutoff) ++r;
  if (r == 0) throw Error(ErrorCode::InvalidState, "probability table is zero");
  const Eigen::MatrixXd E = svd.matrixU().leftCols(r) * sigma.head(r).asDiagonal();  // rows: effects
  const Eigen::MatrixXd S = svd.matrixV().leftCols(r).transpose();                  // columns: states

  // The unit is the combination of effects that is identically 1 on the states.
  const Eigen::RowVectorXd ones = Eigen::RowVectorXd::Ones(p.cols());
  const Eigen::RowVectorXd c = ones * pinv(p);
  if ((c * p - ones).cwiseAbs().maxCoeff() > kRankTol) {
    throw Error(ErrorCode::InconsistentUnit, "no combination of effects is 1 on every state");
  }
  Gpt& g = out.gpt;
  g.dim = static_cast<int>(r);
  g.unit = (c * E).transpose();
  for (Eigen::Index i = 0; i < E.rows(); ++i) g.effects.push_back(E.row(i).transpose());
  for (Eigen::Index j = 0; j < S.cols(); ++j) g.states.push_back(S.col(j));
  return out;
}

Eigen::VectorXd hermitian_coordinates(const quantum::ComplexMatrix& a) {
  const Eigen::Index d = a.rows();
  Eigen::VectorXd v(d * d);
  Eigen::Index at = 0;
  for (Eigen::Index k = 0; k < d; ++k) v[at++] = a(k, k).real();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      v[at++] = std::numbers::sqrt2 * a(j, k).real();
      v[at++] = std::numbers::sqrt2 * a(j, k).imag();
    }
  }
  return v;
}

Gpt gpt_from_quantum(const std::vector<quantum::DensityMatrix>& states,
                     const std::vector<quantum::ProjectiveContext>& measurements) {
  if (states.empty() || measurements.empty()) throw Error(ErrorCode::ShapeMismatch, "need states and measurements");
  const Eigen::Index d = states.front().dim();
  Gpt g;
  g.dim = static_cast<int>(d * d);
  g.unit = hermitian_coordinates(quantum::identity(d));
  for (const auto& s : states) {
    if (s.dim() != d) throw Error(ErrorCode::DimensionMismatch, "states of different dimension");
    g.states.push_back(hermitian_coordinates(s.matrix()));
  }
  std::vector<quantum::ComplexMatrix> seen;
  for (const auto& m : measurements) {
    if (m.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement dimension differs from the states");
    std::vector<std::size_t> context;
    for (const auto& p : m.projectors()) {
      std::size_t k = 0;
      while (k < seen.size() && quantum::max_abs(seen[k] - p) > kGptTol) ++k;
      if (k == seen.size()) {
        seen.push_back(p);
        g.effects.push_back(hermitian_coordinates(p));
      }
      context.push_back(k);
    }
    g.sharp_contexts.push_back(std::move(context));
  }
  return g;
}

bool verify_embedding(const Gpt& gpt, const SimplexEmbedding& e, double tol) {
  if (e.d < 1 || e.iota.rows() != e.d || e.kappa.rows() != e.d || e.iota.cols() != gpt.dim ||
      e.kappa.cols() != gpt.dim) {
    return false;
  }
  std::vector<Eigen::VectorXd> is, ks;
  for (const auto& s : gpt.states) {
    Eigen::VectorXd v = e.iota * s;
    if (v.minCoeff() < -tol || std::abs(v.sum() - 1.0) > tol) return false;
    is.push_back(std::move(v));
  }
  for (const auto& f : gpt.effects) {
    Eigen::VectorXd v = e.kappa * f;
    if (v.minCoeff() < -tol || v.maxCoeff() > 1.0 + tol) return false;
    ks.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < gpt.effects.size(); ++i) {
    for (std::size_t j = 0; j < gpt.states.size(); ++j) {
      if (std::abs(ks[i].dot(is[j]) - gpt.effects[i].dot(gpt.states[j])) > tol) return false;
    }
  }
  return true;
}

ExactModel induced_model(const Gpt& gpt, std::size_t state) {
  const auto flagged = flagged_effects(gpt);
  std::vector<Measurement> ms;
  for (auto e : flagged) ms.push_back({effect_label(e), {"0", "1"}});
  std::vector<std::vector<std::string>> contexts;
  for (const auto& c : gpt.sharp_contexts) {
    std::vector<std::string> labels;
    for (auto e : c) labels.push_back(effect_label(e));
    contexts.push_back(std::move(labels));
  }
  auto scenario = MeasurementScenario::create(std::move(ms), contexts);
  std::vector<Table<double>> tables;
  for (std::size_t c = 0; c < scenario.context_count(); ++c) {
    const auto& members = scenario.contexts()[c];
    Table<double> t = Table<double>::Zero(static_cast<Eigen::Index>(scenario.joint_size(members)));
    for (std::size_t k = 0; k < members.size(); ++k) {
      std::vector<std::size_t> outcome(members.size(), 1);
      outcome[k] = 0;
      const double p = gpt.effects[flagged[members[k]]].dot(gpt.states[state]);
      t[static_cast<Eigen::Index>(scenario.encode(members, outcome))] = std::clamp(p, 0.0, 1.0);
    }
    t /= t.sum();
    tables.push_back(std::move(t));
  }
  return to_exact(FloatModel::create(std::move(scenario), std::move(tables)));
}

namespace {

/// Throws UnsharpEffectFlagged unless every sharp context sums to the unit.
void check_sharp_contexts(const Gpt& gpt) {
  if (gpt.sharp_contexts.empty()) throw Error(ErrorCode::UnsharpEffectFlagged, "no sharp contexts flagged");
  for (const auto& c : gpt.sharp_contexts) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(gpt.dim);
    for (auto e : c) sum += gpt.effects[e];
    if ((sum - gpt.unit).cwiseAbs().maxCoeff() > kGptTol) {
      throw Error(ErrorCode::UnsharpEffectFlagged, "a sharp context does not sum to the unit");
    }
  }
}

/// Coefficients expressing each effect in the basis [flagged effects, unit];
/// throws UnsharpEffectFlagged for effects outside that span.
Eigen::MatrixXd span_coefficients(const Gpt& gpt, const std::vector<std::size_t>& flagged) {
  Eigen::MatrixXd basis(gpt.dim, static_cast<Eigen::Index>(flagged.size()) + 1);
  for (std::size_t k = 0; k < flagged.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = gpt.effects[flagged[k]];
  basis.col(basis.cols() - 1) = gpt.unit;
  const Eigen::MatrixXd bp = pinv(basis);
  Eigen::MatrixXd coeffs(basis.cols(), static_cast<Eigen::Index>(gpt.effects.size()));
  for (std::size_t e = 0; e < gpt.effects.size(); ++e) {
    const Eigen::VectorXd c = bp * gpt.effects[e];
    if ((basis * c - gpt.effects[e]).cwiseAbs().maxCoeff() > kRankTol) {
      throw Error(ErrorCode::UnsharpEffectFlagged,
                  "effect " + std::to_string(e) + " lies outside the span of the flagged effects");
    }
    coeffs.col(static_cast<Eigen::Index>(e)) = c;
  }
  return coeffs;
}

constexpr std::size_t kMaxAssignments = 1'000'000;

}  // namespace

std::vector<std::vector<int>> deterministic_assignments(const Gpt& gpt) {
  const auto flagged = flagged_effects(gpt);
  std::map<std::size_t, std::size_t> position;
  for (std::size_t k = 0; k < flagged.size(); ++k) position[flagged[k]] = k;

  // Null space of [flagged effects, unit]: the linear relations to honour.
  Eigen::MatrixXd basis(gpt.dim, static_cast<Eigen::Index>(flagged.size()) + 1);
  for (std::size_t k = 0; k < flagged.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = gpt.effects[flagged[k]];
  basis.col(basis.cols() - 1) = gpt.unit;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = kRankTol * std::max(1.0, sigma.size() > 0 ? sigma[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
  const Eigen::MatrixXd relations = svd.matrixV().rightCols(basis.cols() - rank);

  std::vector<std::vector<int>> out;
  std::vector<int> value(flagged.size(), -1);
  // Depth-first over contexts: exactly one member of each context occurs.
  auto descend = [&](auto&& self, std::size_t c) -> void {
    if (c == gpt.sharp_contexts.size()) {
      Eigen::VectorXd v(basis.cols());
      for (std::size_t k = 0; k < flagged.size(); ++k) v[static_cast<Eigen::Index>(k)] = value[k];
      v[v.size() - 1] = 1.0;
      if (relations.cols() > 0 && (relations.transpose() * v).cwiseAbs().maxCoeff() > 1e-6) return;
      out.push_back(value);
      if (out.size() > kMaxAssignments) throw Error(ErrorCode::TooLarge, "too many deterministic assignments");
      return;
    }
    const auto& members = gpt.sharp_contexts[c];
    for (auto chosen : members) {
      bool ok = true;
      for (auto e : members) {
        const int want = e == chosen ? 1 : 0;
        const int have = value[position[e]];
        if (have >= 0 && have != want) ok = false;
      }
      // The same effect listed twice in one context would need to be both.
      if (std::count(members.begin(), members.end(), chosen) > 1) ok = false;
      if (!ok) continue;
      std::vector<int> saved = value;
      for (auto e : members) value[position[e]] = e == chosen ? 1 : 0;
      self(self, c + 1);
      value = std::move(saved);
    }
  };
  descend(descend, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

lp::Matrix<Rational> assignment_matrix(const std::vector<std::vector<int>>& assignments, std::size_t effects) {
  lp::Matrix<Rational> a(static_cast<Eigen::Index>(effects) + 1, static_cast<Eigen::Index>(assignments.size()));
  for (std::size_t j = 0; j < assignments.size(); ++j) {
    for (std::size_t k = 0; k < effects; ++k) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = assignments[j][k];
    }
    a(static_cast<Eigen::Index>(effects), static_cast<Eigen::Index>(j)) = 1;
  }
  return a;
}

/// Exact occurrence probabilities of the flagged effects, read off the induced model.
VectorXr exact_probabilities(const Gpt& gpt, std::size_t state) {
  const auto model = induced_model(gpt, state);
  const auto& scenario = model.scenario();
  VectorXr b(static_cast<Eigen::Index>(scenario.measurement_count()) + 1);
  for (std::size_t m = 0; m < scenario.measurement_count(); ++m) {
    for (std::size_t c = 0; c < scenario.context_count(); ++c) {
      const auto& members = scenario.contexts()[c];
      const auto it = std::find(members.begin(), members.end(), m);
      if (it == members.end()) continue;
      b[static_cast<Eigen::Index>(m)] = marginalize(scenario, members, model.table(c), {m})[0];
      break;
    }
  }
  b[b.size() - 1] = 1;
  return b;
}

/// The exact weights fit the rationalised probabilities only to ~1e-7. Keep
/// their support and re-solve on it against the floating probabilities, so
/// the embedding reproduces the GPT at verification tolerance.
Eigen::VectorXd refine_weights(const Gpt& gpt, const std::vector<std::size_t>& flagged,
                               const lp::Matrix<Rational>& A, const VectorXr& exact, std::size_t state) {
  Eigen::VectorXd w = to_double(exact);
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < exact.size(); ++j)
    if (exact[j] > 0) support.push_back(j);
  Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) As.col(static_cast<Eigen::Index>(k)) = to_double(VectorXr(A.col(support[k])));
  Eigen::VectorXd b(A.rows());
  for (std::size_t k = 0; k < flagged.size(); ++k)
    b[static_cast<Eigen::Index>(k)] = gpt.effects[flagged[k]].dot(gpt.states[state]);
  b[b.size() - 1] = 1.0;
  const Eigen::VectorXd ws = As.colPivHouseholderQr().solve(b);
  if (ws.minCoeff() < 0.0 || (As * ws - b).cwiseAbs().maxCoeff() > kGptTol) return w;
  w.setZero();
  for (std::size_t k = 0; k < support.size(); ++k) w[support[k]] = ws[static_cast<Eigen::Index>(k)];
  return w;
}

}  // namespace

bool verify_refusal(const SharpRefusal& r) {
  if (r.probabilities.size() < 1 || r.dual.size() != r.probabilities.size()) return false;
  const auto effects = static_cast<std::size_t>(r.probabilities.size() - 1);
  for (const auto& a : r.assignments) {
    if (a.size() != effects) return false;
  }
  if (r.assignments.empty()) return r.dual.dot(r.probabilities) > 0;
  const auto A = assignment_matrix(r.assignments, effects);
  return lp::is_farkas_certificate<Rational>(A, r.probabilities, r.dual);
}

SharpEmbeddingResult embed_sharp(const Gpt& gpt) {
  gpt.validate();
  check_sharp_contexts(gpt);
  const auto flagged = flagged_effects(gpt);
  const Eigen::MatrixXd coeffs = span_coefficients(gpt, flagged);
  auto assignments = deterministic_assignments(gpt);

  // Unflagged effects take the linearly implied value, which must lie in [0,1].
  std::erase_if(assignments, [&](const std::vector<int>& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(flagged.size()) + 1);
    for (std::size_t k = 0; k < flagged.size(); ++k) v[static_cast<Eigen::Index>(k)] = a[k];
    v[v.size() - 1] = 1.0;
    const Eigen::VectorXd implied = coeffs.transpose() * v;
    return implied.minCoeff() < -1e-9 || implied.maxCoeff() > 1.0 + 1e-9;
  });

  SharpEmbeddingResult out;
  const auto A = assignment_matrix(assignments, flagged.size());
  Eigen::MatrixXd weights(static_cast<Eigen::Index>(assignments.size()), static_cast<Eigen::Index>(gpt.states.size()));
  for (std::size_t s = 0; s < gpt.states.size(); ++s) {
    const VectorXr b = exact_probabilities(gpt, s);
    SharpRefusal refusal{s, assignments, b, VectorXr()};
    if (assignments.empty()) {
      refusal.dual = VectorXr::Zero(b.size());
      refusal.dual[b.size() - 1] = 1;
    } else {
      const auto sol = lp::find_feasible_point<Rational>(A, b);
      if (sol.status == lp::Status::Optimal) {
        weights.col(static_cast<Eigen::Index>(s)) = refine_weights(gpt, flagged, A, sol.x, s);
        continue;
      }
      refusal.dual = sol.farkas;
    }
    if (!verify_refusal(refusal)) {
      throw Error(ErrorCode::InvalidCertificate, "refusal certificate failed re-verification");
    }
    out.verdict = EmbedVerdict::NotEmbeddable;
    out.refusal = std::move(refusal);
    return out;
  }

  // Keep the assignments that carry weight; they are the simplex vertices.
  std::vector<Eigen::Index> used;
  for (Eigen::Index j = 0; j < weights.rows(); ++j) {
    if (weights.row(j).maxCoeff() > 0.0) used.push_back(j);
  }
  SimplexEmbedding emb;
  emb.d = static_cast<int>(used.size());
  Eigen::MatrixXd W(emb.d, weights.cols());
  Eigen::MatrixXd V(emb.d, static_cast<Eigen::Index>(flagged.size()) + 1);
  for (int r = 0; r < emb.d; ++r) {
    W.row(r) = weights.row(used[static_cast<std::size_t>(r)]);
    const auto& a = assignments[static_cast<std::size_t>(used[static_cast<std::size_t>(r)])];
    for (std::size_t k = 0; k < flagged.size(); ++k) V(r, static_cast<Eigen::Index>(k)) = a[k];
    V(r, V.cols() - 1) = 1.0;
  }
  Eigen::MatrixXd basis(gpt.dim, static_cast<Eigen::Index>(flagged.size()) + 1);
  for (std::size_t k = 0; k < flagged.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = gpt.effects[flagged[k]];
  basis.col(basis.cols() - 1) = gpt.unit;
  emb.iota = W * pinv(columns_of(gpt.states, gpt.dim));
  emb.kappa = V * pinv(basis);
  if (verify_embedding(gpt, emb)) {
    out.verdict = EmbedVerdict::Embeddable;
    out.embedding = std::move(emb);
  } else {
    out.verdict = EmbedVerdict::Unknown;
    out.note = "every state is a mixture of deterministic assignments, but no linear map reproduces the weights";
  }
  return out;
}

namespace {

/// One alternating step. With `fixed` the current state images z_j (or effect
/// images k_i), solves for the other map M (d × dim) minimising the ℓ1
/// residual of the product rule. Returns the residual, or +inf on failure.
double alternate(const Gpt& gpt, const Eigen::MatrixXd& P, int d, bool solve_kappa,
                 const std::vector<Eigen::VectorXd>& fixed, Eigen::MatrixXd& result) {
  lp::LinearProgram<double> prog;
  const int dim = gpt.dim;
  std::vector<Eigen::Index> var(static_cast<std::size_t>(d * dim));
  for (auto& v : var) v = prog.add_variable(false);
  auto row_terms = [&](int r, const Eigen::VectorXd& x) {
    std::vector<std::pair<Eigen::Index, double>> terms;
    for (int c = 0; c < dim; ++c) {
      if (x[c] != 0.0) terms.emplace_back(var[static_cast<std::size_t>(r * dim + c)], x[c]);
    }
    return terms;
  };
  const auto& own = solve_kappa ? gpt.effects : gpt.states;
  for (const auto& x : own) {
    for (int r = 0; r < d; ++r) {
      prog.add_constraint(row_terms(r, x), lp::Sense::GreaterEqual, 0.0);
      if (solve_kappa) prog.add_constraint(row_terms(r, x), lp::Sense::LessEqual, 1.0);
    }
    if (!solve_kappa) {
      std::vector<std::pair<Eigen::Index, double>> total;
      for (int r = 0; r < d; ++r) {
        auto t = row_terms(r, x);
        total.insert(total.end(), t.begin(), t.end());
      }
      prog.add_constraint(std::move(total), lp::Sense::Equal, 1.0);
    }
  }
  if (solve_kappa) {
    for (int r = 0; r < d; ++r) prog.add_constraint(row_terms(r, gpt.unit), lp::Sense::Equal, 1.0);
  }
  for (std::size_t i = 0; i < gpt.effects.size(); ++i) {
    for (std::size_t j = 0; j < gpt.states.size(); ++j) {
      const Eigen::VectorXd& x = solve_kappa ? gpt.effects[i] : gpt.states[j];
      const Eigen::VectorXd& w = solve_kappa ? fixed[j] : fixed[i];
      std::vector<std::pair<Eigen::Index, double>> terms;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < dim; ++c) {
          const double coefficient = w[r] * x[c];
          if (coefficient != 0.0) terms.emplace_back(var[static_cast<std::size_t>(r * dim + c)], coefficient);
        }
      }
      const auto plus = prog.add_variable(true, 1.0);
      const auto minus = prog.add_variable(true, 1.0);
      terms.emplace_back(plus, -1.0);
      terms.emplace_back(minus, 1.0);
      prog.add_constraint(std::move(terms), lp::Sense::Equal, P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  const auto sol = prog.solve(200'000);
  if (sol.status != lp::Status::Optimal) return std::numeric_limits<double>::infinity();
  result.resize(d, dim);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < dim; ++c) result(r, c) = sol.x[var[static_cast<std::size_t>(r * dim + c)]];
  }
  return sol.objective;
}

}  // namespace

SharpEmbeddingResult embed_search(const Gpt& gpt, const SearchOptions& options) {
  gpt.validate();
  if (gpt.dim > 10) throw Error(ErrorCode::DimensionTooLarge, "embedding search is limited to dimension 10");
  const int d = gpt.dim;
  const Eigen::MatrixXd P = gpt.probability_table();
  SharpEmbeddingResult out;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int restart = 0; restart < options.restarts; ++restart) {
    // Random initial state images on the simplex.
    std::vector<Eigen::VectorXd> z;
    for (std::size_t j = 0; j < gpt.states.size(); ++j) {
      Eigen::VectorXd v(d);
      for (int r = 0; r < d; ++r) v[r] = -std::log(1.0 - uniform(rng));
      z.push_back(v / v.sum());
    }
    Eigen::MatrixXd kappa, iota;
    double previous = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < options.sweeps; ++sweep) {
      if (!std::isfinite(alternate(gpt, P, d, true, z, kappa))) break;
      std::vector<Eigen::VectorXd> k;
      for (const auto& e : gpt.effects) k.push_back(kappa * e);
      const double residual = alternate(gpt, P, d, false, k, iota);
      if (!std::isfinite(residual)) break;
      z.clear();
      for (const auto& s : gpt.states) z.push_back(iota * s);
      if (residual < 1e-11) {
        // Polish κ against the final ι before verifying.
        alternate(gpt, P, d, true, z, kappa);
        SimplexEmbedding emb{d, iota, kappa};
        if (verify_embedding(gpt, emb)) {
          out.verdict = EmbedVerdict::Embeddable;
          out.embedding = std::move(emb);
          out.note = "restart " + std::to_string(restart);
          return out;
        }
      }
      if (residual > previous - 1e-12) break;
      previous = residual;
    }
  }
  out.verdict = EmbedVerdict::Unknown;
  out.note = "no embedding found in " + std::to_string(options.restarts) + " restarts";
  return out;
}

PrepEnsembleProblem six_decompositions(const Eigen::Vector3d& r, std::optional<Rational> q) {
  const double length = r.norm();
  const Rational qq = q ? *q : to_rational(length);
  if (qq < 0 || qq >= 1) throw Error(ErrorCode::InvalidState, "q must lie in [0, 1)");
  const Eigen::Vector3d n = length > 1e-12 ? Eigen::Vector3d(r / length) : Eigen::Vector3d::UnitZ();
  // Orthonormal pair spanning the plane orthogonal to n.
  Eigen::Index smallest;
  n.cwiseAbs().minCoeff(&smallest);
  const Eigen::Vector3d e1 = n.cross(Eigen::Vector3d::Unit(smallest)).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  const double third = 2.0 * std::numbers::pi / 3.0;
  const Eigen::Vector3d a = e1;
  const Eigen::Vector3d b = std::cos(third) * e1 + std::sin(third) * e2;
  const Eigen::Vector3d c = std::cos(2 * third) * e1 + std::sin(2 * third) * e2;

  auto bloch_state = [](const Eigen::Vector3d& v) -> quantum::ComplexMatrix {
    return 0.5 * (quantum::identity(2) + v[0] * quantum::pauli_x() + v[1] * quantum::pauli_y() +
                  v[2] * quantum::pauli_z());
  };
  PrepEnsembleProblem p;
  p.q = qq;
  p.target = bloch_state(to_double(qq) * n);
  p.labels = {"phi", "phi_perp", "psi_a", "psi_a_perp", "psi_b", "psi_b_perp", "psi_c", "psi_c_perp"};
  for (const auto& v : {n, a, b, c}) {
    p.components.push_back(bloch_state(v));
    p.components.push_back(bloch_state(-v));
  }
  p.orthogonal_pairs = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  const Rational half = Rational(1, 2), third_r = Rational(1, 3);
  const Rational rest = 1 - qq;
  p.decompositions.push_back({{0, (1 + qq) * half}, {1, rest * half}});
  for (std::size_t k : {2u, 4u, 6u}) p.decompositions.push_back({{0, qq}, {k, rest * half}, {k + 1, rest * half}});
  p.decompositions.push_back({{0, qq}, {2, rest * third_r}, {4, rest * third_r}, {6, rest * third_r}});
  p.decompositions.push_back({{0, qq}, {3, rest * third_r}, {5, rest * third_r}, {7, rest * third_r}});
  return p;
}

namespace {

void check_problem(const PrepEnsembleProblem& p) {
  if (p.labels.size() != p.components.size()) throw Error(ErrorCode::ShapeMismatch, "labels and components differ in number");
  if (p.orthogonal_pairs.size() > 20) throw Error(ErrorCode::TooLarge, "more than 20 orthogonal pairs");
  for (const auto& [x, y] : p.orthogonal_pairs) {
    if (x >= p.components.size() || y >= p.components.size() || x == y) {
      throw Error(ErrorCode::ShapeMismatch, "orthogonal pair names an unknown component");
    }
  }
  if (p.decompositions.empty()) throw Error(ErrorCode::DecompositionMismatch, "no decompositions");
  for (std::size_t i = 0; i < p.decompositions.size(); ++i) {
    Rational total(0);
    quantum::ComplexMatrix mix = quantum::ComplexMatrix::Zero(p.target.rows(), p.target.cols());
    for (const auto& [k, w] : p.decompositions[i]) {
      if (k >= p.components.size()) throw Error(ErrorCode::ShapeMismatch, "decomposition names an unknown component");
      if (w < 0) throw Error(ErrorCode::DecompositionMismatch, "negative weight");
      if (p.components[k].rows() != p.target.rows()) throw Error(ErrorCode::DimensionMismatch, "component dimension");
      total += w;
      mix += to_double(w) * p.components[k];
    }
    if (total != 1) throw Error(ErrorCode::DecompositionMismatch, "weights of decomposition " + std::to_string(i) + " do not sum to 1");
    if (quantum::max_abs(mix - p.target) > 1e-10) {
      throw Error(ErrorCode::DecompositionMismatch, "decomposition " + std::to_string(i) + " does not reproduce the state");
    }
  }
}

std::vector<bool> zeroed_by(const PrepEnsembleProblem& p, std::uint32_t mask) {
  std::vector<bool> zero(p.components.size(), false);
  for (std::size_t k = 0; k < p.orthogonal_pairs.size(); ++k) {
    const auto& [x, y] = p.orthogonal_pairs[k];
    zero[(mask >> k) & 1u ? y : x] = true;
  }
  return zero;
}

/// Rows: each decomposition evaluates to 1 at the ontic state. Columns: the
/// components not forced to zero.
std::pair<lp::Matrix<Rational>, VectorXr> case_system(const PrepEnsembleProblem& p, std::uint32_t mask) {
  const auto zero = zeroed_by(p, mask);
  std::vector<Eigen::Index> column(p.components.size(), -1);
  Eigen::Index cols = 0;
  for (std::size_t s = 0; s < zero.size(); ++s) {
    if (!zero[s]) column[s] = cols++;
  }
  const auto rows = static_cast<Eigen::Index>(p.decompositions.size());
  lp::Matrix<Rational> A = lp::Matrix<Rational>::Zero(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (const auto& [k, w] : p.decompositions[static_cast<std::size_t>(i)]) {
      if (column[k] >= 0) A(i, column[k]) += w;
    }
  }
  return {A, VectorXr::Ones(rows)};
}

struct JointSystem {
  lp::Matrix<Rational> A;
  VectorXr b;
  std::vector<std::pair<std::size_t, std::size_t>> columns;  // (open case, component)
};

/// μ(λ_k|s) over open cases k: each μ(·|s) normalised and, at each λ_k, every
/// decomposition equal to the first.
JointSystem joint_system(const PrepEnsembleProblem& p, const std::vector<std::uint32_t>& open) {
  JointSystem js;
  for (std::size_t k = 0; k < open.size(); ++k) {
    const auto zero = zeroed_by(p, open[k]);
    for (std::size_t s = 0; s < p.components.size(); ++s) {
      if (!zero[s]) js.columns.emplace_back(k, s);
    }
  }
  const auto n = static_cast<Eigen::Index>(p.components.size());
  const auto eqs = static_cast<Eigen::Index>(p.decompositions.size()) - 1;
  const Eigen::Index rows = n + static_cast<Eigen::Index>(open.size()) * eqs;
  js.A = lp::Matrix<Rational>::Zero(rows, static_cast<Eigen::Index>(js.columns.size()));
  js.b = VectorXr::Zero(rows);
  js.b.head(n).setOnes();
  for (std::size_t j = 0; j < js.columns.size(); ++j) {
    const auto [k, s] = js.columns[j];
    const auto col = static_cast<Eigen::Index>(j);
    js.A(static_cast<Eigen::Index>(s), col) = 1;
    for (Eigen::Index i = 1; i <= eqs; ++i) {
      const Eigen::Index row = n + static_cast<Eigen::Index>(k) * eqs + (i - 1);
      for (const auto& [c, w] : p.decompositions[0]) {
        if (c == s) js.A(row, col) += w;
      }
      for (const auto& [c, w] : p.decompositions[static_cast<std::size_t>(i)]) {
        if (c == s) js.A(row, col) -= w;
      }
    }
  }
  return js;
}

std::vector<std::uint32_t> open_masks(const PrepNcResult& r) {
  std::vector<std::uint32_t> open;
  for (const auto& c : r.cases) {
    if (c.feasible) open.push_back(c.mask);
  }
  return open;
}

std::string ontic_label(std::uint32_t mask) { return "lambda_" + std::to_string(mask); }

}  // namespace

PrepNcResult prep_nc_check(const PrepEnsembleProblem& problem) {
  check_problem(problem);
  PrepNcResult out;
  const std::uint32_t patterns = 1u << problem.orthogonal_pairs.size();
  for (std::uint32_t mask = 0; mask < patterns; ++mask) {
    SupportCase c;
    c.mask = mask;
    const auto zero = zeroed_by(problem, mask);
    for (std::size_t s = 0; s < zero.size(); ++s) {
      if (zero[s]) c.zeroed.push_back(problem.labels[s]);
    }
    const auto [A, b] = case_system(problem, mask);
    if (A.cols() == 0) {
      c.dual = VectorXr::Zero(b.size());
      c.dual[0] = 1;
    } else {
      const auto sol = lp::find_feasible_point<Rational>(A, b);
      c.feasible = sol.status == lp::Status::Optimal;
      if (!c.feasible) c.dual = sol.farkas;
    }
    out.cases.push_back(std::move(c));
  }
  const auto open = open_masks(out);
  if (!open.empty()) {
    const auto js = joint_system(problem, open);
    const auto sol = lp::find_feasible_point<Rational>(js.A, js.b);
    if (sol.status == lp::Status::Optimal) {
      out.feasible = true;
      OntModel m;
      for (auto mask : open) m.ontic.push_back(ontic_label(mask));
      m.preparations = problem.labels;
      m.preparations.push_back("target");
      m.mu.assign(problem.components.size() + 1, std::vector<Rational>(open.size(), Rational(0)));
      for (std::size_t j = 0; j < js.columns.size(); ++j) {
        const auto [k, s] = js.columns[j];
        m.mu[s][k] = sol.x[static_cast<Eigen::Index>(j)];
      }
      for (std::size_t k = 0; k < open.size(); ++k) {
        for (const auto& [s, w] : problem.decompositions[0]) m.mu.back()[k] += w * m.mu[s][k];
      }
      out.model = std::move(m);
    } else {
      out.joint_dual = sol.farkas;
    }
  }
  if (!verify_prep_nc(problem, out)) {
    throw Error(ErrorCode::InvalidCertificate, "preparation noncontextuality certificate failed re-verification");
  }
  return out;
}

bool verify_prep_nc(const PrepEnsembleProblem& problem, const PrepNcResult& result) {
  const std::uint32_t patterns = 1u << problem.orthogonal_pairs.size();
  if (result.cases.size() != patterns) return false;
  for (const auto& c : result.cases) {
    if (c.feasible) continue;
    const auto [A, b] = case_system(problem, c.mask);
    if (c.dual.size() != b.size()) return false;
    if (A.cols() == 0) {
      if (c.dual.dot(b) <= 0) return false;
    } else if (!lp::is_farkas_certificate<Rational>(A, b, c.dual)) {
      return false;
    }
  }
  const auto open = open_masks(result);
  if (open.empty()) return !result.feasible;
  const auto js = joint_system(problem, open);
  if (!result.feasible) return lp::is_farkas_certificate<Rational>(js.A, js.b, result.joint_dual);
  if (!result.model) return false;
  const auto& m = *result.model;
  if (m.mu.size() != problem.components.size() + 1) return false;
  VectorXr x(static_cast<Eigen::Index>(js.columns.size()));
  for (std::size_t j = 0; j < js.columns.size(); ++j) {
    const auto [k, s] = js.columns[j];
    if (m.mu[s].size() != open.size()) return false;
    x[static_cast<Eigen::Index>(j)] = m.mu[s][k];
    if (x[static_cast<Eigen::Index>(j)] < 0) return false;
  }
  // Entries outside the columns are forced zeros.
  Rational listed(0), all(0);
  for (Eigen::Index j = 0; j < x.size(); ++j) listed += x[j];
  for (std::size_t s = 0; s < problem.components.size(); ++s) {
    for (const auto& v : m.mu[s]) all += v;
  }
  return listed == all && VectorXr(js.A * x) == js.b;
}

PreparationData qubit_xyz_data(const std::vector<std::string>& labels,
                               const std::vector<Eigen::Matrix<Rational, 3, 1>>& bloch,
                               std::vector<OperationalEquivalence> equivalences) {
  if (labels.size() != bloch.size()) throw Error(ErrorCode::ShapeMismatch, "labels and Bloch vectors differ in number");
  PreparationData d;
  d.preparations = labels;
  d.measurements = {"X", "Y", "Z"};
  d.outcome_counts = {2, 2, 2};
  for (const auto& v : bloch) {
    if (v.squaredNorm() > 1) throw Error(ErrorCode::InvalidState, "Bloch vector outside the ball");
    std::vector<VectorXr> per;
    for (int m = 0; m < 3; ++m) {
      VectorXr p(2);
      p[0] = (1 + v[m]) / 2;
      p[1] = (1 - v[m]) / 2;
      per.push_back(std::move(p));
    }
    d.stats.push_back(std::move(per));
  }
  d.equivalences = std::move(equivalences);
  return d;
}

PreparationData six_ensemble_data(const PrepEnsembleProblem& problem) {
  if (problem.components.size() != 8 || problem.target.rows() != 2) {
    throw Error(ErrorCode::InvalidScenario, "expected the eight-component qubit instance");
  }
  using Bloch = Eigen::Matrix<Rational, 3, 1>;
  auto bloch_of = [](const quantum::ComplexMatrix& rho) {
    Bloch v;
    v[0] = to_rational((rho * quantum::pauli_x()).trace().real());
    v[1] = to_rational((rho * quantum::pauli_y()).trace().real());
    v[2] = to_rational((rho * quantum::pauli_z()).trace().real());
    return v;
  };
  // Largest grid factor s ≤ 1 with s²·n2 ≤ 1.
  auto shrink = [](const Rational& n2) {
    if (n2 <= 1) return Rational(1);
    Rational s = round_to_grid(1.0 / std::sqrt(to_double(n2)), 1'000'000'000);
    while (s * s * n2 > 1) s -= Rational(1, 1'000'000'000);
    return s;
  };
  Bloch phi = bloch_of(problem.components[0]);
  phi *= shrink(phi.squaredNorm());
  Bloch a = bloch_of(problem.components[2]);
  Bloch b = bloch_of(problem.components[4]);
  const Rational worst = std::max({a.squaredNorm(), b.squaredNorm(), Bloch(a + b).squaredNorm()});
  const Rational s = shrink(worst);
  a *= s;
  b *= s;
  const Bloch c = -(a + b);
  const std::vector<Bloch> vs = {phi, -phi, a, -a, b, -b, c, -c};
  std::vector<OperationalEquivalence> eqs;
  for (std::size_t i = 1; i < problem.decompositions.size(); ++i) {
    eqs.push_back({problem.decompositions[0], problem.decompositions[i]});
  }
  return qubit_xyz_data(problem.labels, vs, std::move(eqs));
}

namespace {

std::size_t ontic_count(const PreparationData& d) {
  std::size_t q = 1;
  for (int k : d.outcome_counts) {
    q *= static_cast<std::size_t>(k);
    if (q > (1u << 16)) throw Error(ErrorCode::TooLarge, "more than 2^16 deterministic assignments");
  }
  return q;
}

/// Outcome of measurement m under deterministic assignment λ.
int outcome_of(const PreparationData& d, std::size_t lambda, std::size_t m) {
  for (std::size_t k = d.outcome_counts.size(); k-- > m + 1;) lambda /= static_cast<std::size_t>(d.outcome_counts[k]);
  return static_cast<int>(lambda % static_cast<std::size_t>(d.outcome_counts[m]));
}

void check_data(const PreparationData& d) {
  if (d.measurements.size() != d.outcome_counts.size() || d.stats.size() != d.preparations.size()) {
    throw Error(ErrorCode::ShapeMismatch, "preparation data has inconsistent sizes");
  }
  for (const auto& per : d.stats) {
    if (per.size() != d.measurements.size()) throw Error(ErrorCode::ShapeMismatch, "missing statistics");
    for (std::size_t m = 0; m < per.size(); ++m) {
      if (per[m].size() != d.outcome_counts[m]) throw Error(ErrorCode::ShapeMismatch, "wrong outcome count");
      if (per[m].minCoeff() < 0 || per[m].sum() != 1) throw Error(ErrorCode::InvalidState, "statistics are not a distribution");
    }
  }
  for (const auto& e : d.equivalences) {
    if (e.left.empty() || e.right.empty()) throw Error(ErrorCode::InconsistentEquivalence, "empty side");
    Rational wl(0), wr(0);
    for (const auto& [p, w] : e.left) {
      if (p >= d.preparations.size() || w < 0) throw Error(ErrorCode::InconsistentEquivalence, "bad term");
      wl += w;
    }
    for (const auto& [p, w] : e.right) {
      if (p >= d.preparations.size() || w < 0) throw Error(ErrorCode::InconsistentEquivalence, "bad term");
      wr += w;
    }
    if (wl != wr || wl == 0) throw Error(ErrorCode::InconsistentEquivalence, "sides carry different total weight");
    for (std::size_t m = 0; m < d.measurements.size(); ++m) {
      VectorXr l = VectorXr::Zero(d.outcome_counts[m]), r = VectorXr::Zero(d.outcome_counts[m]);
      for (const auto& [p, w] : e.left) l += w * d.stats[p][m];
      for (const auto& [p, w] : e.right) r += w * d.stats[p][m];
      if (l != r) {
        throw Error(ErrorCode::InconsistentEquivalence,
                    "declared equivalence disagrees on measurement " + d.measurements[m]);
      }
    }
  }
}

struct HullSystem {
  lp::Matrix<Rational> A;
  VectorXr b;
};

/// Variables c_{P,v} ≥ 0 (vertex weights per involved preparation). Rows:
/// Σ_v c_{P,v} = 1, then for each equivalence and λ the two mixtures agree.
HullSystem hull_system(const PreparationData& d, const std::vector<std::vector<VectorXr>>& vertices,
                       const std::vector<std::size_t>& which) {
  std::vector<Eigen::Index> offset(d.preparations.size(), -1);
  Eigen::Index cols = 0;
  std::set<std::size_t> involved;
  for (auto e : which) {
    for (const auto& [p, w] : d.equivalences[e].left) involved.insert(p);
    for (const auto& [p, w] : d.equivalences[e].right) involved.insert(p);
  }
  for (auto p : involved) {
    offset[p] = cols;
    cols += static_cast<Eigen::Index>(vertices[p].size());
  }
  const auto Q = static_cast<Eigen::Index>(ontic_count(d));
  const Eigen::Index rows = static_cast<Eigen::Index>(involved.size()) + Q * static_cast<Eigen::Index>(which.size());
  HullSystem h{lp::Matrix<Rational>::Zero(rows, cols), VectorXr::Zero(rows)};
  Eigen::Index row = 0;
  for (auto p : involved) {
    for (std::size_t v = 0; v < vertices[p].size(); ++v) h.A(row, offset[p] + static_cast<Eigen::Index>(v)) = 1;
    h.b[row++] = 1;
  }
  for (auto e : which) {
    auto add = [&](const std::vector<std::pair<std::size_t, Rational>>& side, int sign) {
      for (const auto& [p, w] : side) {
        for (std::size_t v = 0; v < vertices[p].size(); ++v) {
          for (Eigen::Index l = 0; l < Q; ++l) {
            h.A(row + l, offset[p] + static_cast<Eigen::Index>(v)) += sign * w * vertices[p][v][l];
          }
        }
      }
    };
    add(d.equivalences[e].left, 1);
    add(d.equivalences[e].right, -1);
    row += Q;
  }
  return h;
}

}  // namespace

std::vector<VectorXr> assignment_polytope_vertices(const PreparationData& data, std::size_t preparation) {
  const std::size_t Q = ontic_count(data);
  // Normalisation plus all but the last outcome of each measurement: independent rows.
  Eigen::Index rows = 1;
  for (int k : data.outcome_counts) rows += k - 1;
  lp::Matrix<Rational> A = lp::Matrix<Rational>::Zero(rows, static_cast<Eigen::Index>(Q));
  VectorXr b(rows);
  for (std::size_t l = 0; l < Q; ++l) A(0, static_cast<Eigen::Index>(l)) = 1;
  b[0] = 1;
  Eigen::Index row = 1;
  for (std::size_t m = 0; m < data.measurements.size(); ++m) {
    for (int k = 0; k + 1 < data.outcome_counts[m]; ++k, ++row) {
      for (std::size_t l = 0; l < Q; ++l) {
        if (outcome_of(data, l, m) == k) A(row, static_cast<Eigen::Index>(l)) = 1;
      }
      b[row] = data.stats[preparation][m][k];
    }
  }
  auto vs = lp::enumerate_vertices<Rational>(A, b);
  if (vs.empty()) {
    throw Error(ErrorCode::EmptyAssignmentPolytope, "no distribution over assignments reproduces " + data.preparations[preparation]);
  }
  return vs;
}

PuseyResult pusey_incomplete_check(const PreparationData& data) {
  check_data(data);
  PuseyResult out;
  std::vector<std::vector<VectorXr>> vertices;
  for (std::size_t p = 0; p < data.preparations.size(); ++p) {
    vertices.push_back(assignment_polytope_vertices(data, p));
    out.vertex_counts.push_back(vertices.back().size());
  }
  bool contextual = false;
  for (std::size_t e = 0; e < data.equivalences.size(); ++e) {
    const auto h = hull_system(data, vertices, {e});
    const bool ok = lp::find_feasible_point<Rational>(h.A, h.b).status == lp::Status::Optimal;
    out.equivalence_feasible.push_back(ok);
    contextual = contextual || !ok;
  }
  if (!data.equivalences.empty()) {
    std::vector<std::size_t> all(data.equivalences.size());
    for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
    const auto h = hull_system(data, vertices, all);
    const auto sol = lp::find_feasible_point<Rational>(h.A, h.b);
    out.joint_feasible = sol.status == lp::Status::Optimal;
    if (!out.joint_feasible) {
      out.joint_dual = sol.farkas;
      if (!lp::is_farkas_certificate<Rational>(h.A, h.b, out.joint_dual)) {
        throw Error(ErrorCode::InvalidCertificate, "joint hull certificate failed re-verification");
      }
      contextual = true;
    }
  }
  out.verdict = contextual ? PuseyVerdict::Contextual : PuseyVerdict::Inconclusive;
  return out;
}

}  // namespace classicality::embedding
