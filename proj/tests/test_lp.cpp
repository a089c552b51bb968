#include <random>

#include <gtest/gtest.h>

#include "classicality/lp.hpp"

using namespace classicality;
using lp::Matrix;
using lp::Status;
using lp::Vector;

namespace {

Matrix<Rational> rat(const Eigen::MatrixXd& m) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_rational(m(i, j));
  return out;
}

}  // namespace

TEST(Simplex, FindsFeasiblePointOfSimplex) {
  Matrix<Rational> A(1, 3);
  A << 1, 1, 1;
  Vector<Rational> b(1);
  b << 1;
  const auto s = lp::find_feasible_point<Rational>(A, b);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ((A * s.x)[0], Rational(1));
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_GE(s.x[j], 0);
}

TEST(Simplex, InfeasibleSystemCarriesVerifiedFarkasVector) {
  // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
  Matrix<Rational> A(2, 2);
  A << 1, 1, 1, 1;
  Vector<Rational> b(2);
  b << 1, 2;
  const auto s = lp::find_feasible_point<Rational>(A, b);
  ASSERT_EQ(s.status, Status::Infeasible);
  EXPECT_TRUE(lp::is_farkas_certificate<Rational>(A, b, s.farkas));
}

TEST(Simplex, NegativeRightHandSideIsHandled) {
  Matrix<Rational> A(1, 2);
  A << -1, -2;
  Vector<Rational> b(1);
  b << -4;
  const auto s = lp::find_feasible_point<Rational>(A, b);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ((A * s.x)[0], Rational(-4));
}

TEST(Simplex, RedundantRowsDoNotBreakPhaseOne) {
  Matrix<Rational> A(3, 3);
  A << 1, 1, 0, 0, 1, 1, 1, 2, 1;
  Vector<Rational> b(3);
  b << 1, 1, 2;
  const auto s = lp::find_feasible_point<Rational>(A, b);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(Vector<Rational>(A * s.x), b);
}

TEST(Simplex, MinimizesKnownProgram) {
  // min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6; optimum at (8/5, 6/5).
  Matrix<Rational> A(2, 4);
  A << 1, 2, 1, 0, 3, 1, 0, 1;
  Vector<Rational> b(2), c(4);
  b << 4, 6;
  c << -1, -1, 0, 0;
  const auto s = lp::minimize<Rational>(A, b, c);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(s.objective, Rational(-14, 5));
  EXPECT_EQ(s.x[0], Rational(8, 5));
  EXPECT_EQ(s.x[1], Rational(6, 5));
}

TEST(Simplex, ReportsUnboundedPrograms) {
  Matrix<Rational> A(1, 2);
  A << 1, -1;
  Vector<Rational> b(1), c(2);
  b << 0;
  c << -1, 0;
  EXPECT_EQ(lp::minimize<Rational>(A, b, c).status, Status::Unbounded);
}

TEST(Simplex, GeneralFormWithFreeVariablesAndInequalities) {
  // min x subject to x >= -3 (x free), x + y <= 5, y >= 0.
  lp::LinearProgram<Rational> prog;
  const auto x = prog.add_variable(false, Rational(1));
  const auto y = prog.add_variable(true);
  prog.add_constraint({{x, Rational(1)}}, lp::Sense::GreaterEqual, Rational(-3));
  prog.add_constraint({{x, Rational(1)}, {y, Rational(1)}}, lp::Sense::LessEqual, Rational(5));
  const auto s = prog.solve();
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(s.objective, Rational(-3));
  EXPECT_EQ(s.x[x], Rational(-3));
}

TEST(Simplex, RandomFeasibleSystemsAreSolvedAndInfeasibleOnesCertified) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coeff(-3, 3), pick(0, 1);
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index m = 2 + trial % 3, n = 3 + trial % 4;
    Eigen::MatrixXd Ad(m, n);
    for (Eigen::Index i = 0; i < Ad.size(); ++i) Ad.data()[i] = coeff(rng);
    const Matrix<Rational> A = rat(Ad);
    Vector<Rational> b(m);
    const bool planted = pick(rng) == 1;
    if (planted) {
      Vector<Rational> x0(n);
      for (Eigen::Index j = 0; j < n; ++j) x0[j] = Rational(std::abs(coeff(rng)), 2);
      b = A * x0;
    } else {
      for (Eigen::Index i = 0; i < m; ++i) b[i] = coeff(rng);
    }
    const auto s = lp::find_feasible_point<Rational>(A, b);
    if (s.status == Status::Optimal) {
      EXPECT_EQ(Vector<Rational>(A * s.x), b);
      for (Eigen::Index j = 0; j < n; ++j) EXPECT_GE(s.x[j], 0);
    } else {
      EXPECT_FALSE(planted);
      EXPECT_TRUE(lp::is_farkas_certificate<Rational>(A, b, s.farkas));
    }
  }
}

TEST(Simplex, DoubleInstantiationAgreesWithExactOnSmallPrograms) {
  Eigen::MatrixXd Ad(2, 3);
  Ad << 1, 1, 1, 1, -1, 0;
  const Matrix<double> A = Ad;
  Vector<double> b(2);
  b << 1, 0.25;
  const auto s = lp::find_feasible_point<double>(A, b);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR((A * s.x - b).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(VertexEnumeration, UnitSimplexHasOneVertexPerCoordinate) {
  Matrix<Rational> A(1, 4);
  A << 1, 1, 1, 1;
  Vector<Rational> b(1);
  b << 1;
  const auto v = lp::enumerate_vertices<Rational>(A, b);
  EXPECT_EQ(v.size(), 4u);
}

TEST(VertexEnumeration, SquareAsStandardFormHasFourVertices) {
  // 0 <= x, y <= 1 with slacks.
  Matrix<Rational> A(2, 4);
  A << 1, 0, 1, 0, 0, 1, 0, 1;
  Vector<Rational> b(2);
  b << 1, 1;
  const auto v = lp::enumerate_vertices<Rational>(A, b);
  ASSERT_EQ(v.size(), 4u);
  for (const auto& x : v) {
    EXPECT_TRUE(x[0] == 0 || x[0] == 1);
    EXPECT_TRUE(x[1] == 0 || x[1] == 1);
  }
}

TEST(VertexEnumeration, TransportationPolytopeMatchesBirkhoffCount) {
  // Doubly stochastic 3×3 matrices: 3! = 6 permutation vertices. One of the
  // six marginal rows is redundant and dropped.
  Matrix<Rational> A = Matrix<Rational>::Zero(5, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, 3 * i + j) = 1;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 3; ++i) A(3 + j, 3 * i + j) = 1;
  Vector<Rational> b = Vector<Rational>::Ones(5);
  EXPECT_EQ(lp::enumerate_vertices<Rational>(A, b).size(), 6u);
}
