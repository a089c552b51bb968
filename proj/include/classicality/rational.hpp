#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace classicality {

using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

using VectorXr = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using MatrixXr = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

/// Default denominator bound for converting floating-point input to rationals.
inline constexpr std::int64_t kMaxDenominator = 1'000'000;

/// Best rational approximation of `x` with denominator at most `max_denominator`
/// (continued-fraction convergents and semiconvergents).
Rational to_rational(double x, std::int64_t max_denominator = kMaxDenominator);

/// Nearest point of the grid k / denominator.
Rational round_to_grid(double x, std::int64_t denominator = kMaxDenominator);

/// Accepts "3/10", "-2", "0.125" and "1e-3". Decimal strings are read exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

double to_double(const Rational& value);

VectorXr to_rational(const Eigen::VectorXd& v, std::int64_t max_denominator = kMaxDenominator);
Eigen::VectorXd to_double(const VectorXr& v);

/// Some solution of A x = b (free variables set to zero), or nullopt when the
/// system is inconsistent. Exact Gauss-Jordan elimination.
std::optional<VectorXr> solve_exact(MatrixXr A, VectorXr b);

/// Rank of A, exactly.
Eigen::Index rank_exact(MatrixXr A);

/// Comparison policy used by the templated numeric code: exact for Rational,
/// absolute tolerance for double.
template <class Scalar>
struct NumericPolicy;

template <>
struct NumericPolicy<Rational> {
  static bool is_zero(const Rational& v) { return v == 0; }
  static bool is_positive(const Rational& v) { return v > 0; }
  static bool is_negative(const Rational& v) { return v < 0; }
};

template <>
struct NumericPolicy<double> {
  static constexpr double kEps = 1e-10;
  static bool is_zero(double v) { return v <= kEps && v >= -kEps; }
  static bool is_positive(double v) { return v > kEps; }
  static bool is_negative(double v) { return v < -kEps; }
};

}  // namespace classicality
