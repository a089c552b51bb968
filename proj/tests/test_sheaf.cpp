#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "classicality/error.hpp"
#include "classicality/polytope.hpp"
#include "classicality/sheaf.hpp"

using namespace classicality;

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

// Dual check written out independently of verify_certificate: yᵀM ≤ 0 column
// by column, straight from the definition of a restriction, and yᵀv > 0.
bool dual_separates(const ExactModel& model, const VectorXr& y) {
  const auto& s = model.scenario();
  const auto sections = sheaf::enumerate_local_sections(s);
  const VectorXr v = sheaf::section_vector(model);
  if (y.size() != v.size()) return false;
  for (std::uint64_t g = 0; g < sheaf::global_assignment_count(s); ++g) {
    const auto t = sheaf::global_assignment(s, g);
    Rational col(0);
    for (std::size_t i = 0; i < sections.size(); ++i) {
      bool match = true;
      const auto& members = s.contexts()[sections[i].context];
      for (std::size_t k = 0; k < members.size(); ++k) match = match && t[members[k]] == sections[i].outcomes[k];
      if (match) col += y[static_cast<Eigen::Index>(i)];
    }
    if (col > 0) return false;
  }
  return y.dot(v) > 0;
}

ExactModel pr_box() {
  Rational h(1, 2);
  VectorXr p(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          p[polytope::Behaviour::index(2, 2, 2, a, b, x, y)] = ((a ^ b) == ((1 - x) & y)) ? h : Rational(0);
  return polytope::to_model(polytope::Behaviour::create(2, 2, 2, 2, p));
}

ExactModel kcbs_model() {
  const auto k = quantum::kcbs_construction();
  ObservableSet set;
  for (int j = 0; j < 5; ++j) {
    set.labels.push_back("A" + std::to_string(j));
    set.observables.push_back(k.observables[j]);
    set.contexts.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>((j + 1) % 5)});
  }
  return to_exact(from_observables(quantum::DensityMatrix::from_ket(k.state), set));
}

}  // namespace

TEST(Sections, CountsMatchTheProductFormula) {
  const auto s = polytope::bell_scenario(2, 3, 2, 3);
  EXPECT_EQ(sheaf::enumerate_local_sections(s).size(), 6u * 6u);
  EXPECT_EQ(sheaf::global_assignment_count(s), 2u * 2u * 3u * 3u * 3u);
  const auto M = sheaf::IncidenceMatrix::build(s);
  EXPECT_EQ(M.rows(), 36);
  EXPECT_EQ(M.cols(), 108);
  // Every column restricts to exactly one section per context.
  for (Eigen::Index j = 0; j < M.cols(); ++j) EXPECT_EQ(M.column(j).size(), s.context_count());
}

TEST(Sections, GlobalAssignmentsAreLexicographic) {
  const auto s = polytope::bell_scenario(2, 2, 2, 2);
  EXPECT_EQ(sheaf::global_assignment(s, 0), (sheaf::GlobalAssignment{0, 0, 0, 0}));
  EXPECT_EQ(sheaf::global_assignment(s, 1), (sheaf::GlobalAssignment{0, 0, 0, 1}));
  EXPECT_EQ(sheaf::global_assignment(s, 8), (sheaf::GlobalAssignment{1, 0, 0, 0}));
}

TEST(GlobalSection, PrBoxHasNoGlobalSection) {
  const auto m = pr_box();
  const auto r = sheaf::solve_global_section(m);
  ASSERT_EQ(r.verdict, sheaf::SectionVerdict::Infeasible);
  EXPECT_TRUE(sheaf::verify_certificate(m, r));
  EXPECT_TRUE(dual_separates(m, r.dual));
}

TEST(GlobalSection, KcbsStatisticsHaveNoGlobalSection) {
  const auto m = kcbs_model();
  const auto r = sheaf::solve_global_section(m);
  ASSERT_EQ(r.verdict, sheaf::SectionVerdict::Infeasible);
  EXPECT_TRUE(dual_separates(m, r.dual));
}

TEST(GlobalSection, RandomMixturesOfDeterministicModelsAreReconstructed) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> w(0, 5);
  const auto s = MeasurementScenario::create(
      {{"A", {"0", "1"}}, {"B", {"0", "1", "2"}}, {"C", {"0", "1"}}, {"D", {"0", "1"}}},
      {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"A", "D"}});
  const auto q = sheaf::global_assignment_count(s);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> weights(q);
    Rational total(0);
    for (auto& x : weights) {
      x = (w(rng) == 0) ? Rational(w(rng) + 1) : Rational(0);
      total += x;
    }
    if (total == 0) weights[0] = total = 1;
    std::vector<Table<Rational>> tables;
    for (std::size_t c = 0; c < s.context_count(); ++c) {
      Table<Rational> t = Table<Rational>::Zero(static_cast<Eigen::Index>(s.joint_size(s.contexts()[c])));
      for (std::uint64_t g = 0; g < q; ++g) {
        if (weights[g] == 0) continue;
        const auto lambda = sheaf::global_assignment(s, g);
        std::vector<std::size_t> out;
        for (auto m : s.contexts()[c]) out.push_back(lambda[m]);
        t[static_cast<Eigen::Index>(s.encode(s.contexts()[c], out))] += weights[g] / total;
      }
      tables.push_back(t);
    }
    const auto model = ExactModel::create(s, tables);
    const auto r = sheaf::solve_global_section(model);
    ASSERT_EQ(r.verdict, sheaf::SectionVerdict::Feasible);
    EXPECT_TRUE(sheaf::verify_certificate(model, r));
    const auto hv = sheaf::hv_model_from_section(r.primal, s);
    for (std::size_t c = 0; c < s.context_count(); ++c) EXPECT_EQ(hv.context_table(s, c), model.table(c));
  }
}

TEST(GlobalSection, TamperedCertificatesAreRejected) {
  const auto m = pr_box();
  auto r = sheaf::solve_global_section(m);
  ASSERT_EQ(r.verdict, sheaf::SectionVerdict::Infeasible);
  auto flipped = r;
  flipped.dual = -r.dual;
  EXPECT_FALSE(sheaf::verify_certificate(m, flipped));
  auto claimed = r;
  claimed.verdict = sheaf::SectionVerdict::Feasible;
  claimed.primal = VectorXr::Zero(16);
  claimed.primal[0] = 1;
  EXPECT_FALSE(sheaf::verify_certificate(m, claimed));
}

TEST(GlobalSection, DisturbingModelsAreRefused) {
  const auto s = MeasurementScenario::create({{"A", {"0", "1"}}, {"B", {"0", "1"}}, {"C", {"0", "1"}}},
                                             {{"A", "B"}, {"B", "C"}});
  Table<Rational> t1(4), t2(4);
  t1 << 1, 0, 0, 0;
  t2 << 0, 0, 1, 0;
  EXPECT_EQ(code_of([&] { sheaf::solve_global_section(ExactModel::create(s, {t1, t2})); }),
            ErrorCode::DisturbingModel);
}

TEST(GlobalSection, OversizedScenariosAreRefused) {
  std::vector<Measurement> ms;
  std::vector<std::vector<std::string>> ctx;
  for (int i = 0; i < 25; ++i) {
    ms.push_back({"M" + std::to_string(i), {"0", "1"}});
    ctx.push_back({"M" + std::to_string(i)});
  }
  const auto s = MeasurementScenario::create(ms, ctx);
  EXPECT_EQ(code_of([&] { sheaf::IncidenceMatrix::build(s); }), ErrorCode::ScenarioTooLarge);
}

TEST(HiddenVariables, RejectsMalformedWeights) {
  const auto s = polytope::bell_scenario(2, 2, 2, 2);
  VectorXr x = VectorXr::Zero(16);
  EXPECT_EQ(code_of([&] { sheaf::hv_model_from_section(x, s); }), ErrorCode::InvalidCertificate);
  x[0] = 2;
  x[1] = -1;
  EXPECT_EQ(code_of([&] { sheaf::hv_model_from_section(x, s); }), ErrorCode::InvalidCertificate);
  EXPECT_EQ(code_of([&] { sheaf::hv_model_from_section(VectorXr::Ones(3), s); }), ErrorCode::InvalidCertificate);
}
