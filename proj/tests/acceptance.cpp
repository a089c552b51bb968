// Acceptance run: one line per criterion, non-zero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "classicality/classify.hpp"
#include "classicality/embedding.hpp"
#include "classicality/error.hpp"
#include "classicality/polytope.hpp"
#include "classicality/qsl.hpp"
#include "classicality/sheaf.hpp"

using namespace classicality;
using io::Json;
using quantum::ComplexMatrix;
using quantum::DensityMatrix;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

// ---------------------------------------------------------------- oracles

// Maximum-weight independent set by subset enumeration.
Rational brute_independence(const polytope::OrthogonalityGraph& g) {
  Rational best(0);
  for (std::uint32_t mask = 0; mask < (1u << g.size()); ++mask) {
    bool ok = true;
    for (const auto& [i, j] : g.edges) ok = ok && !(((mask >> i) & 1u) && ((mask >> j) & 1u));
    if (!ok) continue;
    Rational w(0);
    for (std::size_t i = 0; i < g.size(); ++i)
      if ((mask >> i) & 1u) w += g.weights[i];
    if (w > best) best = w;
  }
  return best;
}

// yᵀM ≤ 0 and yᵀv > 0, with M rebuilt from the restriction definition.
bool dual_separates(const ExactModel& model, const VectorXr& y) {
  const auto& s = model.scenario();
  const auto sections = sheaf::enumerate_local_sections(s);
  const VectorXr v = sheaf::section_vector(model);
  if (y.size() != v.size()) return false;
  for (std::uint64_t g = 0; g < sheaf::global_assignment_count(s); ++g) {
    const auto t = sheaf::global_assignment(s, g);
    Rational col(0);
    for (std::size_t i = 0; i < sections.size(); ++i) {
      const auto& members = s.contexts()[sections[i].context];
      bool match = true;
      for (std::size_t k = 0; k < members.size(); ++k) match = match && t[members[k]] == sections[i].outcomes[k];
      if (match) col += y[static_cast<Eigen::Index>(i)];
    }
    if (col > 0) return false;
  }
  return y.dot(v) > 0;
}

// Singlet correlator for spin observables in the z-x plane.
double singlet_correlator(double a, double b) { return -std::cos(a - b); }

double chsh_of_correlators(double e00, double e01, double e10, double e11) { return e00 - e01 + e10 + e11; }

Rational best_ld_value(const polytope::LinearInequality& ineq) {
  Rational best;
  bool first = true;
  for (const auto& v : polytope::enumerate_ld_vertices(ineq.nX, ineq.nY, ineq.nA, ineq.nB)) {
    const auto val = polytope::evaluate_inequality(ineq, polytope::vertex_behaviour(v, ineq.nA, ineq.nB)).value;
    if (first || val > best) best = val;
    first = false;
  }
  return best;
}

quantum::Ket bloch_ket(double theta, double phi) {
  quantum::Ket k(2);
  k << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return k;
}

// ---------------------------------------------------------------- builders

polytope::Behaviour pr_box(int alpha, int beta, int gamma) {
  VectorXr p(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const int rhs = (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma;
          p[polytope::Behaviour::index(2, 2, 2, a, b, x, y)] = (a ^ b) == rhs ? Rational(1, 2) : Rational(0);
        }
  return polytope::Behaviour::create(2, 2, 2, 2, p);
}

// Convex mixture of local vertices, PR boxes and white noise with small integer weights.
polytope::Behaviour random_ns_behaviour(std::mt19937_64& rng) {
  static const auto verts = polytope::enumerate_ld_vertices(2, 2, 2, 2);
  std::uniform_int_distribution<int> count(1, 4), weight(1, 9), vpick(0, 15), bit(0, 1), kind(0, 3);
  VectorXr p = VectorXr::Zero(16);
  Rational total(0);
  const int parts = count(rng);
  for (int k = 0; k < parts; ++k) {
    const Rational w(weight(rng));
    const int which = kind(rng);
    VectorXr term;
    if (which == 0) {
      term = pr_box(bit(rng), bit(rng), bit(rng)).data();
    } else if (which == 1) {
      term = polytope::Behaviour::uniform(2, 2, 2, 2).data();
    } else {
      term = polytope::vertex_behaviour(verts[static_cast<std::size_t>(vpick(rng))], 2, 2).data();
    }
    p += w * term;
    total += w;
  }
  return polytope::Behaviour::create(2, 2, 2, 2, VectorXr(p / total));
}

std::array<quantum::Ket, 5> kcbs_vectors(const ComplexMatrix& U) {
  const auto k = quantum::kcbs_construction();
  std::array<quantum::Ket, 5> out;
  for (int j = 0; j < 5; ++j) out[j] = U * k.vectors[j];
  return out;
}

// KCBS-shaped contexts: each exclusive pair plus the remainder is one measurement.
std::vector<quantum::ProjectiveContext> kcbs_measurements(const std::array<quantum::Ket, 5>& v) {
  std::vector<quantum::ProjectiveContext> ms;
  for (int j = 0; j < 5; ++j) {
    const ComplexMatrix Pa = quantum::outer(v[j]), Pb = quantum::outer(v[(j + 1) % 5]);
    ms.push_back(quantum::ProjectiveContext::create("C" + std::to_string(j), {Pa, Pb, quantum::identity(3) - Pa - Pb}));
  }
  return ms;
}

// The same statistics as an empirical model assembled through the scenario
// module: dichotomic measurements P_j and R_j, context j = {P_j, P_{j+1}, R_j}.
ExactModel kcbs_scenario_model(const DensityMatrix& rho, const std::array<quantum::Ket, 5>& v) {
  std::vector<std::vector<quantum::ProjectiveContext>> contexts;
  for (int j = 0; j < 5; ++j) {
    const int n = (j + 1) % 5;
    const ComplexMatrix rest = quantum::identity(3) - quantum::outer(v[j]) - quantum::outer(v[n]);
    contexts.push_back({quantum::ProjectiveContext::dichotomic("P" + std::to_string(j), v[j]),
                        quantum::ProjectiveContext::dichotomic("P" + std::to_string(n), v[n]),
                        quantum::ProjectiveContext::create("R" + std::to_string(j), {rest, quantum::identity(3) - rest})});
  }
  return to_exact(from_quantum(rho, contexts));
}

// States near the KCBS optimum, random pure states and noisy mixtures.
DensityMatrix random_kcbs_state(std::mt19937_64& rng, const ComplexMatrix& U, int style) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (style == 0) {
    quantum::Ket k = quantum::basis_ket(3, 0);
    for (Eigen::Index i = 0; i < 3; ++i) k[i] += 0.15 * quantum::Complex(n(rng), n(rng));
    return DensityMatrix::from_ket(U * k);
  }
  if (style == 1) return DensityMatrix::from_ket(quantum::random_ket(3, rng));
  const double p = 0.3 + 0.7 * u(rng);
  const ComplexMatrix pure = quantum::outer(U * quantum::basis_ket(3, 0));
  return DensityMatrix::from_matrix(p * pure + (1 - p) * quantum::identity(3) / 3.0);
}

Json observable_json(const std::string& label, const ComplexMatrix& m) {
  return {{"label", label}, {"observable", io::to_json(m)}};
}

Json werner_json(double alpha, double a0, double a1, double b0, double b1) {
  return {{"kind", "quantum"},
          {"state", io::to_json(quantum::werner_state(alpha).matrix())},
          {"parties",
           {{"dims", {2, 2}},
            {"alice", {observable_json("A0", quantum::spin_observable(a0)), observable_json("A1", quantum::spin_observable(a1))}},
            {"bob", {observable_json("B0", quantum::spin_observable(b0)), observable_json("B1", quantum::spin_observable(b1))}}}}};
}

// ---------------------------------------------------------------- criteria

Outcome kcbs() {
  const auto k = quantum::kcbs_construction();
  const double target = 5.0 - 4.0 * std::sqrt(5.0);
  const bool sum_ok = std::abs(k.kcbs_sum - target) <= 1e-9;

  ObservableSet set;
  for (std::size_t j = 0; j < 5; ++j) {
    set.labels.push_back("A" + std::to_string(j));
    set.observables.push_back(k.observables[j]);
    set.contexts.push_back({j, (j + 1) % 5});
  }
  const auto model = to_exact(from_observables(DensityMatrix::from_ket(k.state), set));
  const auto section = sheaf::solve_global_section(model);
  const bool sheaf_ok = section.verdict == sheaf::SectionVerdict::Infeasible &&
                        sheaf::verify_certificate(model, section) && dual_separates(model, section.dual);

  auto g = polytope::cycle_graph(5);
  for (const auto& v : k.vectors) g.projectors.push_back(quantum::outer(v));
  const auto csw = polytope::csw_inequality(g, DensityMatrix::from_ket(k.state));
  const Rational alpha = brute_independence(g);
  const bool csw_ok = std::abs(csw.lhs - std::sqrt(5.0)) <= 1e-9 && alpha == Rational(2) && csw.bound == alpha;

  char buf[200];
  std::snprintf(buf, sizeof buf, "sum=%.12f (target %.12f), sheaf %s, CSW lhs=%.12f vs alpha=%s",
                k.kcbs_sum, target, sheaf_ok ? "infeasible+verified" : "FAILED", csw.lhs, to_string(alpha).c_str());
  return {sum_ok && sheaf_ok && csw_ok, buf};
}

Outcome chsh() {
  // Grid oracle on the closed-form singlet correlator.
  const int steps = 16;
  double best = -10.0;
  std::array<double, 4> arg{};
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j)
      for (int k = 0; k < steps; ++k)
        for (int l = 0; l < steps; ++l) {
          const double a0 = 2 * M_PI * i / steps, a1 = 2 * M_PI * k / steps;
          const double b0 = 2 * M_PI * j / steps, b1 = 2 * M_PI * l / steps;
          const double v = chsh_of_correlators(singlet_correlator(a0, b0), singlet_correlator(a0, b1),
                                               singlet_correlator(a1, b0), singlet_correlator(a1, b1));
          if (v > best) {
            best = v;
            arg = {a0, b0, a1, b1};
          }
        }
  const auto singlet = DensityMatrix::from_ket(quantum::singlet());
  const auto fb = polytope::chsh_behaviour(singlet, arg[0], arg[1], arg[2], arg[3]);
  const double library_value = polytope::evaluate_inequality(polytope::chsh_inequality(), fb).value;
  const bool grid_ok = best >= 2.828 - 1e-3 && std::abs(library_value - best) <= 1e-9;

  bool vertices_ok = true;
  int count = 0;
  for (const auto& v : polytope::enumerate_ld_vertices(2, 2, 2, 2)) {
    ++count;
    vertices_ok = vertices_ok && polytope::evaluate_inequality(polytope::chsh_inequality(),
                                                               polytope::vertex_behaviour(v, 2, 2)).value <= 2;
  }
  vertices_ok = vertices_ok && count == 16;

  const auto exact = polytope::to_exact(fb);
  const auto m = polytope::membership_lp(exact);
  bool sep_ok = !m.inside && m.separating && polytope::verify_membership(exact, m);
  if (sep_ok) {
    sep_ok = best_ld_value(*m.separating) == m.separating->bound &&
             polytope::evaluate_inequality(*m.separating, exact).value > m.separating->bound;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "grid best=%.6f, library=%.6f, %d LD vertices <= 2: %s, separating inequality tight: %s",
                best, library_value, count, vertices_ok ? "yes" : "no", sep_ok ? "yes" : "no");
  return {grid_ok && vertices_ok && sep_ok, buf};
}

Outcome werner_gap() {
  // CHSH-optimal settings for the singlet.
  const double a0 = 0.0, a1 = M_PI / 2, b0 = M_PI / 4, b1 = 3 * M_PI / 4;
  const auto w = quantum::werner_state(0.4);
  const auto b = polytope::to_exact(polytope::chsh_behaviour(w, a0, b0, a1, b1));
  const auto m = polytope::membership_lp(b);
  const bool local_ok = m.inside && polytope::verify_membership(b, m);

  const ComplexMatrix local = quantum::partial_trace(w.matrix(), 2, 2, true);
  const Eigen::Vector3d r((local * quantum::pauli_x()).trace().real(), (local * quantum::pauli_y()).trace().real(),
                          (local * quantum::pauli_z()).trace().real());
  const auto problem = embedding::six_decompositions(r);
  const auto prep = embedding::prep_nc_check(problem);
  int closed = 0;
  for (const auto& c : prep.cases) closed += c.feasible ? 0 : 1;
  const bool prep_ok = !prep.feasible && prep.cases.size() == 16 && closed == 16 && embedding::verify_prep_nc(problem, prep);

  const auto report = classify(werner_json(0.4, a0, a1, b0, b1));
  const bool cls_ok = report.bell_local == Verdict::Yes && report.spekkens_noncontextual == Verdict::No &&
                      !check_implications(report);
  char buf[200];
  std::snprintf(buf, sizeof buf, "local polytope: %s, prep cases closed %d/%zu, classifier bell=%s spekkens=%s",
                local_ok ? "inside" : "NOT inside", closed, prep.cases.size(), to_string(report.bell_local).c_str(),
                to_string(report.spekkens_noncontextual).c_str());
  return {local_ok && prep_ok && cls_ok, buf};
}

Outcome peres_mermin() {
  const auto set = polytope::peres_mermin_set();
  // Operator-product oracle: each context multiplies to ±𝟙.
  std::vector<int> sign;
  bool products_ok = true;
  for (const auto& ctx : set.contexts) {
    ComplexMatrix prod = quantum::identity(4);
    for (auto i : ctx) prod = (prod * set.observables[i]).eval();
    const double s = prod(0, 0).real();
    products_ok = products_ok && std::abs(std::abs(s) - 1.0) < 1e-12 &&
                  quantum::max_abs(prod - s * quantum::identity(4)) < 1e-12;
    sign.push_back(s > 0 ? 1 : -1);
  }
  int satisfying = 0;
  for (int mask = 0; mask < 512; ++mask) {
    bool all = true;
    for (std::size_t c = 0; c < set.contexts.size(); ++c) {
      int prod = 1;
      for (auto i : set.contexts[c]) prod *= ((mask >> i) & 1) ? -1 : 1;
      all = all && prod == sign[c];
    }
    satisfying += all ? 1 : 0;
  }
  std::mt19937_64 rng(2024);
  int infeasible = 0;
  for (int t = 0; t < 3; ++t) {
    const auto model = to_exact(from_observables(quantum::random_density(4, rng), set));
    const auto r = sheaf::solve_global_section(model);
    if (r.verdict == sheaf::SectionVerdict::Infeasible && sheaf::verify_certificate(model, r)) ++infeasible;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d of 512 assignments satisfy all six products; sheaf infeasible on %d/3 random states",
                satisfying, infeasible);
  return {products_ok && satisfying == 0 && infeasible == 3, buf};
}

Outcome qsl_vs_quantum() {
  const std::uint64_t shots = 100000;
  int ok = 0;
  double worst = 0.0;
  for (auto p : {qsl::Basis::X, qsl::Basis::Y, qsl::Basis::Z})
    for (auto m : {qsl::Basis::X, qsl::Basis::Y, qsl::Basis::Z}) {
      const auto r = qsl::compare({.prep_basis = p, .prep_value = 0, .measure_basis = m, .shots = shots, .seed = 99});
      // +1 eigenstate of one Pauli: certain in its own basis, a fair coin in the others.
      const double exact = p == m ? 1.0 : 0.5;
      const double err = std::abs(r.freqs[0] - exact);
      const bool pass = p == m ? (r.counts[0] == shots && r.quantum[0] == 1.0)
                               : err <= 3.0 * std::sqrt(exact * (1 - exact) / static_cast<double>(shots)) &&
                                     std::abs(r.quantum[0] - exact) < 1e-15;
      ok += pass ? 1 : 0;
      if (p != m) worst = std::max(worst, err);
    }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d/9 basis pairs within 3 sigma (worst deviation %.5f, bound %.5f)", ok, worst,
                3.0 * std::sqrt(0.25 / static_cast<double>(shots)));
  return {ok == 9, buf};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(606);
  int agree = 0, local = 0;
  for (int t = 0; t < 200; ++t) {
    const auto b = random_ns_behaviour(rng);
    const auto model = polytope::to_model(b);
    const auto s = sheaf::solve_global_section(model);
    const auto m = polytope::membership_lp(b);
    const bool sheaf_feasible = s.verdict == sheaf::SectionVerdict::Feasible;
    const bool certified = sheaf::verify_certificate(model, s) && polytope::verify_membership(b, m);
    if (certified && sheaf_feasible == m.inside) ++agree;
    local += m.inside ? 1 : 0;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d/200 agree (%d local, %d nonlocal)", agree, local, 200 - local);
  return {agree == 200, buf};
}

Outcome sharp_correspondence() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> style(0, 2), nstates(1, 3);
  int agree = 0, embeddable = 0;
  auto tally = [&](const embedding::Gpt& gpt, const std::vector<ExactModel>& models) {
    const auto r = embedding::embed_sharp(gpt);
    bool sheaf_all = true;
    for (const auto& model : models) {
      sheaf_all = sheaf_all && sheaf::solve_global_section(model).verdict == sheaf::SectionVerdict::Feasible;
    }
    if (r.verdict == embedding::EmbedVerdict::Embeddable) {
      ++embeddable;
      return sheaf_all && r.embedding && embedding::verify_embedding(gpt, *r.embedding);
    }
    return r.verdict == embedding::EmbedVerdict::NotEmbeddable && !sheaf_all && r.refusal &&
           embedding::verify_refusal(*r.refusal);
  };
  for (int t = 0; t < 40; ++t) {
    const ComplexMatrix U = quantum::random_unitary(3, rng);
    const auto v = kcbs_vectors(U);
    std::vector<DensityMatrix> states;
    std::vector<ExactModel> models;
    const int n = nstates(rng);
    for (int s = 0; s < n; ++s) {
      states.push_back(random_kcbs_state(rng, U, style(rng)));
      models.push_back(kcbs_scenario_model(states.back(), v));
    }
    agree += tally(embedding::gpt_from_quantum(states, kcbs_measurements(v)), models) ? 1 : 0;
  }
  std::uniform_int_distribution<int> nbases(2, 3);
  for (int t = 0; t < 10; ++t) {
    // Qubit: disjoint random bases, each its own context.
    std::vector<quantum::ProjectiveContext> bases;
    std::vector<std::vector<quantum::ProjectiveContext>> contexts;
    const int k = nbases(rng);
    for (int b = 0; b < k; ++b) {
      bases.push_back(quantum::ProjectiveContext::dichotomic("B" + std::to_string(b), quantum::random_ket(2, rng)));
      contexts.push_back({bases.back()});
    }
    std::vector<DensityMatrix> states;
    std::vector<ExactModel> models;
    const int n = nstates(rng);
    for (int s = 0; s < n; ++s) {
      states.push_back(quantum::random_density(2, rng));
      models.push_back(to_exact(from_quantum(states.back(), contexts)));
    }
    agree += tally(embedding::gpt_from_quantum(states, bases), models) ? 1 : 0;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d/50 agree (%d embeddable, %d refused)", agree, embeddable, 50 - embeddable);
  return {agree == 50, buf};
}

Outcome lattice() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI), unit(0.0, 1.0);
  int violations = 0, errors = 0;
  std::map<std::string, int> levels;
  auto run = [&](const Json& in) {
    try {
      const auto r = classify(in, {.seed = 1, .search_restarts = 4});
      if (check_implications(r)) ++violations;
      ++levels[r.hierarchy_level];
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LatticeViolation) {
        ++violations;
      } else {
        ++errors;
        std::fprintf(stderr, "  input error: %s\n", e.what());
      }
    }
  };
  for (int t = 0; t < 150; ++t) {
    // Empirical Bell tables.
    const auto b = random_ns_behaviour(rng);
    Json in = io::to_json(polytope::to_model(b));
    in["kind"] = "empirical";
    in["parties"] = {{"alice", {"A0", "A1"}}, {"bob", {"B0", "B1"}}};
    run(in);
  }
  for (int t = 0; t < 150; ++t) {
    // Random two-qubit states at random coplanar settings.
    const auto rho = t % 2 ? quantum::random_density(4, rng) : quantum::werner_state(-1.0 / 3.0 + 4.0 / 3.0 * unit(rng));
    Json in = {{"kind", "quantum"},
               {"state", io::to_json(rho.matrix())},
               {"parties",
                {{"dims", {2, 2}},
                 {"alice", {observable_json("A0", quantum::spin_observable(angle(rng))),
                            observable_json("A1", quantum::spin_observable(angle(rng)))}},
                 {"bob", {observable_json("B0", quantum::spin_observable(angle(rng))),
                          observable_json("B1", quantum::spin_observable(angle(rng)))}}}}};
    run(in);
  }
  for (int t = 0; t < 100; ++t) {
    // Qutrit five-cycle inputs.
    const ComplexMatrix U = quantum::random_unitary(3, rng);
    const auto v = kcbs_vectors(U);
    const auto rho = random_kcbs_state(rng, U, t % 3);
    Json ms = Json::array(), ctx = Json::array();
    for (int j = 0; j < 5; ++j) {
      ms.push_back({{"label", "A" + std::to_string(j)}, {"vector", io::to_json(ComplexMatrix(v[j]))}});
      ctx.push_back({"A" + std::to_string(j), "A" + std::to_string((j + 1) % 5)});
    }
    run({{"kind", "quantum"}, {"state", io::to_json(rho.matrix())}, {"measurements", ms}, {"contexts", ctx}});
  }
  for (int t = 0; t < 50; ++t) {
    // Sharp GPTs.
    const ComplexMatrix U = quantum::random_unitary(3, rng);
    const auto gpt = embedding::gpt_from_quantum({random_kcbs_state(rng, U, t % 3)}, kcbs_measurements(kcbs_vectors(U)));
    run(io::to_json(gpt));
  }
  for (int t = 0; t < 50; ++t) {
    // Preparation ensembles and qubit states.
    const double len = 0.95 * unit(rng);
    const double th = std::acos(2 * unit(rng) - 1), ph = angle(rng);
    if (t % 2) {
      run({{"kind", "prep-ensemble"},
           {"bloch", {len * std::sin(th) * std::cos(ph), len * std::sin(th) * std::sin(ph), len * std::cos(th)}}});
    } else {
      const auto k = bloch_ket(th, ph);
      const double p = unit(rng);
      const ComplexMatrix rho = p * quantum::outer(k) + (1 - p) * quantum::identity(2) / 2.0;
      run({{"kind", "quantum"},
           {"state", io::to_json(rho)},
           {"measurements", {observable_json("X", quantum::pauli_x()), observable_json("Z", quantum::pauli_z())}},
           {"contexts", {{"X"}, {"Z"}}}});
    }
  }
  std::string spread;
  for (const auto& [k, n] : levels) spread += " " + k + "=" + std::to_string(n);
  char buf[400];
  std::snprintf(buf, sizeof buf, "500 inputs, %d lattice violations, %d input errors;%s", violations, errors,
                spread.c_str());
  return {violations == 0 && errors == 0, buf};
}

Outcome badziag() {
  auto formula = [](int n, int d) { return n * (d - 2) - 2; };
  const bool closed_ok = polytope::badziag_inequality(9, 6).bound == Rational(34) &&
                         polytope::badziag_inequality(5, 3).bound == Rational(3) && formula(9, 6) == 34 &&
                         formula(5, 3) == 3;
  const std::vector<std::vector<std::size_t>> contexts = {{0, 1}, {1, 2}, {0, 2}, {0, 1, 2}};
  const auto ineq = polytope::badziag_inequality(3, 4, contexts);
  int respected = 0;
  Rational worst(-100);
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<int> v(3);
    for (int i = 0; i < 3; ++i) v[i] = ((mask >> i) & 1) ? -1 : 1;
    // LHS written out: Σ v_i − ½ Σ over the three compatible pairs.
    const Rational lhs = Rational(v[0] + v[1] + v[2]) - Rational(v[0] * v[1] + v[1] * v[2] + v[0] * v[2], 2);
    if (lhs == ineq.evaluate_assignment(v) && lhs <= ineq.bound) ++respected;
    if (lhs > worst) worst = lhs;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "B(9,6)=%s, B(5,3)=%s; toy bound %s, max over 8 assignments %s, respected %d/8",
                to_string(polytope::badziag_inequality(9, 6).bound).c_str(),
                to_string(polytope::badziag_inequality(5, 3).bound).c_str(), to_string(ineq.bound).c_str(),
                to_string(worst).c_str(), respected);
  return {closed_ok && respected == 8, buf};
}

Outcome pusey_route() {
  const Eigen::Vector3d r = 0.4 * Eigen::Vector3d(0.6, 0.0, 0.8);
  const auto problem = embedding::six_decompositions(r);
  const auto data = embedding::six_ensemble_data(problem);
  const auto six = embedding::pusey_incomplete_check(data);
  const auto prep = embedding::prep_nc_check(problem);
  using V = Eigen::Matrix<Rational, 3, 1>;
  const auto single = embedding::pusey_incomplete_check(
      embedding::qubit_xyz_data({"rho"}, {V(Rational(6, 25), 0, Rational(8, 25))}, {}));
  const bool six_ok = six.verdict == embedding::PuseyVerdict::Contextual;
  const bool single_ok = single.verdict == embedding::PuseyVerdict::Inconclusive;
  const bool agree = six_ok == !prep.feasible;
  char buf[200];
  std::snprintf(buf, sizeof buf, "six-ensemble %s, single preparation %s, prep_nc %s",
                six_ok ? "contextual" : "inconclusive", single_ok ? "inconclusive" : "contextual",
                prep.feasible ? "feasible" : "infeasible");
  return {six_ok && single_ok && agree, buf};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "KCBS", 2.0, kcbs},
      {2, "CHSH", 5.0, chsh},
      {3, "Werner gap", 5.0, werner_gap},
      {4, "Peres-Mermin", 5.0, peres_mermin},
      {5, "QSL vs quantum", 10.0, qsl_vs_quantum},
      {6, "sheaf vs local polytope", 0.0, oracle_equivalence},
      {7, "sharp embedding vs sheaf", 0.0, sharp_correspondence},
      {8, "implication lattice", 0.0, lattice},
      {9, "Badziag bound", 0.0, badziag},
      {10, "incomplete tomography", 0.0, pusey_route},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_seconds <= 0 || secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %2d %-26s %s  %.2fs%s  %s\n", c.id, c.name.c_str(), pass ? "PASS" : "FAIL", secs,
                in_time ? "" : " (over budget)", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
