#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "classicality/error.hpp"
#include "classicality/polytope.hpp"

using namespace classicality;
using namespace classicality::polytope;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::SchemaError;
}

Behaviour pr_box() {
  VectorXr p(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          p[Behaviour::index(2, 2, 2, a, b, x, y)] = ((a ^ b) == ((1 - x) & y)) ? Rational(1, 2) : Rational(0);
  return Behaviour::create(2, 2, 2, 2, p);
}

Behaviour mixture(const Behaviour& a, const Behaviour& b, const Rational& t) {
  return Behaviour::create(a.nX(), a.nY(), a.nA(), a.nB(), VectorXr(t * a.data() + (Rational(1) - t) * b.data()));
}

// Independent oracle: max-weight independent set by subset enumeration.
Rational brute_independence(const OrthogonalityGraph& g) {
  const std::size_t n = g.size();
  Rational best(0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (const auto& [i, j] : g.edges) ok = ok && !((mask >> i) & 1u && (mask >> j) & 1u);
    if (!ok) continue;
    Rational w(0);
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) w += g.weights[i];
    if (w > best) best = w;
  }
  return best;
}

OrthogonalityGraph kcbs_graph() {
  auto g = cycle_graph(5);
  const auto k = quantum::kcbs_construction();
  for (const auto& v : k.vectors) g.projectors.push_back(quantum::outer(v));
  return g;
}

}  // namespace

TEST(Behaviours, ValidatesShapeAndNormalization) {
  EXPECT_EQ(code_of([] { Behaviour::create(2, 2, 2, 2, VectorXr::Zero(15)); }), ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([] { Behaviour::create(0, 2, 2, 2, VectorXr::Zero(0)); }), ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([] { Behaviour::create(2, 2, 2, 2, VectorXr::Zero(16)); }), ErrorCode::InvalidState);
  VectorXr neg = Behaviour::uniform(2, 2, 2, 2).data();
  neg[0] = Rational(-1, 4);
  neg[1] = Rational(3, 4);
  EXPECT_EQ(code_of([&] { Behaviour::create(2, 2, 2, 2, neg); }), ErrorCode::InvalidState);
  EXPECT_TRUE(pr_box().is_no_signalling());
}

TEST(Behaviours, ModelRoundTripPreservesEntries) {
  const auto b = pr_box();
  const auto model = to_model(b);
  const auto back = as_behaviour(model, {"A0", "A1"}, {"B0", "B1"});
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->data(), b.data());
}

TEST(Vertices, CountAndOrder) {
  const auto v = enumerate_ld_vertices(2, 2, 2, 2);
  ASSERT_EQ(v.size(), 16u);
  EXPECT_EQ(v[0].f, (std::vector<int>{0, 0}));
  EXPECT_EQ(v[1].g, (std::vector<int>{0, 1}));
  EXPECT_EQ(enumerate_ld_vertices(3, 2, 3, 2).size(), 27u * 4u);
  EXPECT_EQ(code_of([] { enumerate_ld_vertices(10, 10, 2, 2); }), ErrorCode::TooLarge);
}

TEST(Vertices, DeterministicBehaviourIsAProductOfDeltas) {
  for (const auto& v : enumerate_ld_vertices(2, 2, 2, 2)) {
    const auto b = vertex_behaviour(v, 2, 2);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int bb = 0; bb < 2; ++bb) EXPECT_EQ(b(a, bb, x, y), Rational((a == v.f[x] && bb == v.g[y]) ? 1 : 0));
  }
}

TEST(Chsh, LocalBoundIsTwoAndPrBoxReachesFour) {
  const auto ineq = chsh_inequality();
  Rational best(-100);
  for (const auto& v : enumerate_ld_vertices(2, 2, 2, 2)) {
    const auto val = evaluate_inequality(ineq, vertex_behaviour(v, 2, 2));
    EXPECT_TRUE(val.satisfied);
    if (val.value > best) best = val.value;
  }
  EXPECT_EQ(best, Rational(2));
  EXPECT_EQ(evaluate_inequality(ineq, pr_box()).value, Rational(4));
}

TEST(Chsh, SingletAtOptimalAnglesReachesTsirelson) {
  const auto psi = quantum::DensityMatrix::from_ket(quantum::singlet());
  const auto b = chsh_behaviour(psi, 0.0, M_PI / 4, M_PI / 2, 3 * M_PI / 4);
  // The singlet anticorrelates, so these angles reach −2√2.
  EXPECT_NEAR(evaluate_inequality(chsh_inequality(), b).value, -2.0 * std::sqrt(2.0), 1e-12);
}

TEST(Membership, WernerBelowThresholdIsInsideWithValidWeights) {
  const auto b = to_exact(chsh_behaviour(quantum::werner_state(0.4), 0.0, M_PI / 2, M_PI / 4, -M_PI / 4));
  const auto m = membership_lp(b);
  ASSERT_TRUE(m.inside);
  EXPECT_TRUE(verify_membership(b, m));
  VectorXr recon = VectorXr::Zero(16);
  const auto verts = enumerate_ld_vertices(2, 2, 2, 2);
  Rational total(0);
  for (std::size_t k = 0; k < verts.size(); ++k) {
    EXPECT_GE(m.weights[static_cast<Eigen::Index>(k)], 0);
    total += m.weights[static_cast<Eigen::Index>(k)];
    recon += m.weights[static_cast<Eigen::Index>(k)] * vertex_behaviour(verts[k], 2, 2).data();
  }
  EXPECT_EQ(total, Rational(1));
  EXPECT_EQ(recon, b.data());
}

TEST(Membership, OutsideBehavioursGetATightSeparatingInequality) {
  const auto verts = enumerate_ld_vertices(2, 2, 2, 2);
  const auto uniform = Behaviour::uniform(2, 2, 2, 2);
  for (const Rational t : {Rational(1), Rational(3, 4), Rational(2, 3)}) {
    const auto b = mixture(pr_box(), uniform, t);
    const auto m = membership_lp(b);
    ASSERT_FALSE(m.inside);
    ASSERT_TRUE(m.separating.has_value());
    Rational best(0);
    bool first = true;
    for (const auto& v : verts) {
      const auto val = evaluate_inequality(*m.separating, vertex_behaviour(v, 2, 2)).value;
      if (first || val > best) best = val;
      first = false;
    }
    EXPECT_EQ(best, m.separating->bound);
    EXPECT_EQ(evaluate_inequality(*m.separating, vertex_behaviour(verts[m.tight_vertex], 2, 2)).value,
              m.separating->bound);
    EXPECT_GT(evaluate_inequality(*m.separating, b).value, m.separating->bound);
    EXPECT_TRUE(verify_membership(b, m));
  }
  // At t = 1/2 the PR mixture sits exactly on the CHSH facet and is local.
  EXPECT_TRUE(membership_lp(mixture(pr_box(), uniform, Rational(1, 2))).inside);
}

TEST(Membership, ShapeMismatchIsReported) {
  const auto ineq = chsh_inequality();
  EXPECT_EQ(code_of([&] { evaluate_inequality(ineq, Behaviour::uniform(3, 2, 2, 2)); }), ErrorCode::ShapeMismatch);
}

TEST(Badziag, BoundsFollowTheClosedForm) {
  EXPECT_EQ(badziag_inequality(9, 6).bound, Rational(34));
  EXPECT_EQ(badziag_inequality(5, 3).bound, Rational(3));
  EXPECT_EQ(code_of([] { badziag_inequality(5, 2); }), ErrorCode::DegenerateContexts);
  EXPECT_EQ(code_of([] { badziag_inequality(0, 3); }), ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of([] { badziag_inequality(3, 3, {{0, 1}, {1, 5}, {0, 2}}); }), ErrorCode::InvalidScenario);
}

TEST(Badziag, PairsComeFromContexts) {
  const auto b = badziag_inequality(3, 4, {{0, 1}, {1, 2}, {0, 2}, {0, 1, 2}});
  EXPECT_EQ(b.pairs.size(), 3u);
  // Oracle: LHS written out for all-plus values is 3 − ½·3.
  EXPECT_EQ(b.evaluate_assignment({1, 1, 1}), Rational(3, 2));
  EXPECT_EQ(b.evaluate_assignment({-1, -1, -1}), Rational(-9, 2));
}

TEST(Independence, CycleAndRandomGraphsMatchBruteForce) {
  EXPECT_EQ(weighted_independence_number(cycle_graph(5)).value, Rational(2));
  EXPECT_EQ(weighted_independence_number(cycle_graph(6)).value, Rational(3));
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coin(0, 2), weight(0, 6);
  for (int trial = 0; trial < 60; ++trial) {
    OrthogonalityGraph g;
    const std::size_t n = 3 + trial % 10;
    for (std::size_t i = 0; i < n; ++i) {
      g.labels.push_back("v" + std::to_string(i));
      g.weights.push_back(Rational(weight(rng), 2));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (coin(rng) == 0) g.edges.emplace_back(i, j);
    const auto r = weighted_independence_number(g);
    EXPECT_EQ(r.value, brute_independence(g));
    Rational w(0);
    for (auto i : r.witness) w += g.weights[i];
    EXPECT_EQ(w, r.value);
    for (const auto& [i, j] : g.edges) {
      const bool both = std::count(r.witness.begin(), r.witness.end(), i) && std::count(r.witness.begin(), r.witness.end(), j);
      EXPECT_FALSE(both);
    }
  }
}

TEST(Independence, GraphValidation) {
  auto g = cycle_graph(4);
  g.edges.emplace_back(1, 1);
  EXPECT_EQ(code_of([&] { g.validate(); }), ErrorCode::InvalidScenario);
  auto h = cycle_graph(4);
  h.weights[0] = -1;
  EXPECT_EQ(code_of([&] { h.validate(); }), ErrorCode::InvalidScenario);
}

TEST(Csw, KcbsGraphIsViolatedBySqrtFive) {
  const auto g = kcbs_graph();
  const auto r = csw_inequality(g, quantum::DensityMatrix::from_ket(quantum::kcbs_construction().state));
  EXPECT_NEAR(r.lhs, std::sqrt(5.0), 1e-9);
  EXPECT_EQ(r.bound, Rational(2));
  EXPECT_TRUE(r.violated);
  EXPECT_EQ(code_of([] { csw_inequality(cycle_graph(5), quantum::DensityMatrix::from_ket(quantum::basis_ket(3, 0))); }),
            ErrorCode::MissingProjectors);
}

TEST(BellFromContextuality, QuantumValueMatchesTraceFormula) {
  const auto g = kcbs_graph();
  const auto r = contextuality_to_bell(g, 3);
  // Maximally entangled state with conjugate projectors: P(Πi, Πj) = Tr(Πi Πj)/d.
  double oracle = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) oracle += to_double(g.weights[i]) * g.projectors[i].trace().real() / 3.0;
  for (const auto& [i, j] : g.edges) {
    const double w = std::max(to_double(g.weights[i]), to_double(g.weights[j]));
    oracle -= w * (g.projectors[i] * g.projectors[j]).trace().real() / 3.0;
  }
  EXPECT_NEAR(r.quantum_value, oracle, 1e-9);
  EXPECT_EQ(r.inequality.bound, Rational(2));
  for (const auto& v : enumerate_ld_vertices(5, 5, 2, 2))
    EXPECT_TRUE(evaluate_inequality(r.inequality, vertex_behaviour(v, 2, 2)).satisfied);
  EXPECT_EQ(code_of([] { contextuality_to_bell(cycle_graph(5), 3); }), ErrorCode::MissingProjectors);
}

TEST(SdcReduction, DropsChosenObservableAndPreparesEigenstate) {
  const auto set = peres_mermin_set();
  const auto r = sic_to_sdc_reduction(set, 0, 1.0);
  EXPECT_EQ(r.reduced.observables.size(), 8u);
  EXPECT_EQ(r.reduced.contexts.size(), 6u);
  const quantum::ComplexMatrix& Z1 = set.observables[0];
  EXPECT_LT(quantum::max_abs(quantum::Ket(Z1 * r.state) - r.state), 1e-12);
  EXPECT_NEAR(r.state.norm(), 1.0, 1e-12);
  EXPECT_EQ(code_of([&] { sic_to_sdc_reduction(set, 0, 0.5); }), ErrorCode::BadEigenvalue);
  EXPECT_EQ(code_of([&] { sic_to_sdc_reduction(set, 42, 1.0); }), ErrorCode::LabelMismatch);
}
