#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "classicality/error.hpp"
#include "classicality/qsl.hpp"

using namespace classicality;
using namespace classicality::qsl;

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

}  // namespace

TEST(Toy, PreparationFixesTheNamedValue) {
  auto rng = shot_rng(5, 0);
  for (int trial = 0; trial < 100; ++trial)
    for (Basis b : {Basis::X, Basis::Y, Basis::Z})
      for (int v : {0, 1}) {
        const auto s = prepare(b, v, rng);
        EXPECT_EQ(value_assignment(s)[static_cast<int>(b)], v);
      }
}

TEST(Toy, GatesActOnTheRightBits) {
  const QslState s{0, 1};
  EXPECT_EQ(apply_x(s), (QslState{1, 1}));
  EXPECT_EQ(apply_z(s), (QslState{0, 0}));
  EXPECT_EQ(apply_swap(s), (QslState{1, 0}));
  // X and Z both flip the Y parity; together they leave it alone.
  EXPECT_NE(value_assignment(apply_x(s))[1], value_assignment(s)[1]);
  EXPECT_EQ(value_assignment(apply_z(apply_x(s)))[1], value_assignment(s)[1]);
}

TEST(Toy, RepeatedMeasurementIsStable) {
  auto rng = shot_rng(9, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = prepare(Basis::X, trial % 2, rng);
    for (Basis b : {Basis::X, Basis::Y, Basis::Z}) {
      auto [first, after] = measure(s, b, rng);
      auto [second, again] = measure(after, b, rng);
      EXPECT_EQ(first, second);
      (void)again;
    }
  }
}

TEST(Toy, MeasurementDisturbsComplementaryBits) {
  // After measuring Z, an X outcome is a fresh coin: both values must occur.
  int ones = 0;
  for (std::uint64_t shot = 0; shot < 200; ++shot) {
    auto rng = shot_rng(1, shot);
    auto s = prepare(Basis::X, 0, rng);
    s = measure(s, Basis::Z, rng).second;
    ones += measure(s, Basis::X, rng).first;
  }
  EXPECT_GT(ones, 50);
  EXPECT_LT(ones, 150);
}

TEST(Toy, SameBasisRunsAreExact) {
  for (Basis b : {Basis::X, Basis::Y, Basis::Z}) {
    const auto r = compare({.prep_basis = b, .prep_value = 1, .measure_basis = b, .shots = 1000, .seed = 4});
    EXPECT_EQ(r.counts[1], 1000u);
    EXPECT_EQ(r.quantum[1], 1.0);
    EXPECT_EQ(r.fidelity, 1.0);
  }
}

TEST(Toy, CrossBasisRunsFollowTheBornRule) {
  const auto r = compare({.prep_basis = Basis::Z, .measure_basis = Basis::Y, .shots = 20000, .seed = 8});
  EXPECT_NEAR(r.quantum[0], 0.5, 1e-15);
  EXPECT_LE(std::abs(r.freqs[0] - 0.5), 3.0 * std::sqrt(0.25 / 20000.0));
}

TEST(Toy, GateSequencesMatchTheQubitCircuit) {
  // |+⟩ → Z → |−⟩, so X measures 1 with certainty.
  const auto r = compare({.prep_basis = Basis::X, .gates = {Gate::Z}, .measure_basis = Basis::X, .shots = 50});
  EXPECT_EQ(r.counts[1], 50u);
  EXPECT_EQ(r.quantum[1], 1.0);
}

TEST(Toy, SeedMakesRunsReproducible) {
  const QslProgram p{.prep_basis = Basis::Z, .measure_basis = Basis::X, .shots = 500, .seed = 77};
  EXPECT_EQ(compare(p).counts, compare(p).counts);
  auto q = p;
  q.seed = 78;
  EXPECT_NE(compare(p).counts, compare(q).counts);
}

TEST(Toy, SwapNeedsExtensionsAndMatchesHadamardOnAxes) {
  QslProgram p{.prep_basis = Basis::Z, .gates = {Gate::Swap}, .measure_basis = Basis::X, .shots = 100};
  EXPECT_EQ(code_of([&] { compare(p); }), ErrorCode::InvalidScenario);
  p.extensions = true;
  const auto r = compare(p);
  EXPECT_EQ(r.counts[0], 100u);
  EXPECT_EQ(r.fidelity, 1.0);
}

TEST(Toy, InvalidProgramsAreRejected) {
  EXPECT_EQ(code_of([] { compare({.shots = 0}); }), ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of([] { compare({.prep_value = 2}); }), ErrorCode::InvalidScenario);
  EXPECT_EQ(parse_basis("y"), Basis::Y);
  EXPECT_EQ(to_string(Basis::X), "X");
  EXPECT_EQ(parse_gate("H"), Gate::Swap);
  EXPECT_THROW(parse_basis("W"), Error);
  EXPECT_THROW(parse_gate("T"), Error);
}
