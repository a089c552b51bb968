#include "classicality/rational.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "classicality/error.hpp"

namespace classicality {

namespace {

using boost::multiprecision::mpz_int;

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::SchemaError, "non-finite number cannot be converted to a rational");
  }
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // 53 bits of mantissa are exact in an int64.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r{mpz_int(scaled)};
  exponent -= 53;
  mpz_int power = 1;
  power <<= std::abs(exponent);
  if (exponent >= 0) {
    r *= Rational(power);
  } else {
    r /= Rational(power);
  }
  return r;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianEffect: return "NonHermitianEffect";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NotASubset: return "NotASubset";
    case ErrorCode::NonCommutingContext: return "NonCommutingContext";
    case ErrorCode::InconsistentSharing: return "InconsistentSharing";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::ScenarioTooLarge: return "ScenarioTooLarge";
    case ErrorCode::DisturbingModel: return "DisturbingModel";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DegenerateContexts: return "DegenerateContexts";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::MissingProjectors: return "MissingProjectors";
    case ErrorCode::BadEigenvalue: return "BadEigenvalue";
    case ErrorCode::InconsistentUnit: return "InconsistentUnit";
    case ErrorCode::UnsharpEffectFlagged: return "UnsharpEffectFlagged";
    case ErrorCode::DecompositionMismatch: return "DecompositionMismatch";
    case ErrorCode::EmptyAssignmentPolytope: return "EmptyAssignmentPolytope";
    case ErrorCode::InconsistentEquivalence: return "InconsistentEquivalence";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::LatticeViolation: return "LatticeViolation";
  }
  return "Unknown";
}

Rational to_rational(double x, std::int64_t max_denominator) {
  const Rational exact = exact_from_double(x);
  if (boost::multiprecision::denominator(exact) <= max_denominator) {
    return exact;
  }
  // Same scheme as Python's Fraction.limit_denominator.
  mpz_int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_int n = boost::multiprecision::numerator(exact);
  mpz_int d = boost::multiprecision::denominator(exact);
  const mpz_int bound = max_denominator;
  while (true) {
    mpz_int a = n / d;
    if (n < 0 && a * d != n) {
      a -= 1;  // floor division
    }
    const mpz_int q2 = q0 + a * q1;
    if (q2 > bound) {
      break;
    }
    mpz_int tp = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = tp;
    q1 = q2;
    mpz_int tn = d;
    d = n - a * d;
    n = tn;
  }
  const mpz_int k = (bound - q0) / q1;
  const Rational bound1(mpz_int(p0 + k * p1), mpz_int(q0 + k * q1));
  const Rational bound2(p1, q1);
  return abs(bound2 - exact) <= abs(bound1 - exact) ? bound2 : bound1;
}

Rational round_to_grid(double x, std::int64_t denominator) {
  const double scaled = std::nearbyint(x * static_cast<double>(denominator));
  return Rational(mpz_int(static_cast<std::int64_t>(scaled)), mpz_int(denominator));
}

namespace {

// Decimal only: mpz_int's string constructor would read a leading 0 as octal.
mpz_int parse_integer(std::string digits, const std::string& literal) {
  bool negative = false;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    digits.erase(digits.begin());
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::SchemaError, "malformed rational literal '" + literal + "'");
  }
  const auto first = digits.find_first_not_of('0');
  const mpz_int v(first == std::string::npos ? std::string("0") : digits.substr(first));
  return negative ? mpz_int(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) {
    throw Error(ErrorCode::SchemaError, "empty rational literal");
  }
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const mpz_int num = parse_integer(s.substr(0, slash), s);
      const mpz_int den = parse_integer(s.substr(slash + 1), s);
      if (den == 0) {
        throw Error(ErrorCode::SchemaError, "zero denominator in '" + s + "'");
      }
      return Rational(num, den);
    }
    // Decimal with optional exponent, read exactly.
    std::string mantissa = s;
    long exponent = 0;
    const auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
      mantissa = s.substr(0, e);
      exponent = parse_integer(s.substr(e + 1), s).convert_to<long>();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa.erase(mantissa.begin());
    }
    const auto dot = mantissa.find('.');
    if (dot != std::string::npos) {
      exponent -= static_cast<long>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    if (mantissa.empty() || mantissa[0] == '-' || mantissa[0] == '+') {
      throw Error(ErrorCode::SchemaError, "malformed rational literal '" + s + "'");
    }
    Rational r{parse_integer(mantissa, s)};
    if (std::abs(exponent) > 1000) {
      throw Error(ErrorCode::SchemaError, "exponent out of range in '" + s + "'");
    }
    mpz_int power = 1;
    for (long i = 0; i < std::abs(exponent); ++i) power *= 10;
    if (exponent >= 0) {
      r *= Rational(power);
    } else {
      r /= Rational(power);
    }
    return negative ? Rational(-r) : r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::SchemaError, "malformed rational literal '" + s + "'");
  }
}

std::string to_string(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return value.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

VectorXr to_rational(const Eigen::VectorXd& v, std::int64_t max_denominator) {
  VectorXr out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_rational(v[i], max_denominator);
  return out;
}

Eigen::VectorXd to_double(const VectorXr& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> row_reduce(MatrixXr& A, VectorXr* b) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < A.cols() && row < A.rows(); ++col) {
    Eigen::Index found = -1;
    for (Eigen::Index i = row; i < A.rows(); ++i) {
      if (A(i, col) != 0) {
        found = i;
        break;
      }
    }
    if (found < 0) continue;
    A.row(row).swap(A.row(found));
    if (b) std::swap((*b)[row], (*b)[found]);
    const Rational inv = Rational(1) / A(row, col);
    for (Eigen::Index j = col; j < A.cols(); ++j) {
      if (A(row, j) != 0) A(row, j) *= inv;
    }
    if (b) (*b)[row] *= inv;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (i == row || A(i, col) == 0) continue;
      const Rational factor = A(i, col);
      for (Eigen::Index j = col; j < A.cols(); ++j) {
        if (A(row, j) != 0) A(i, j) -= factor * A(row, j);
      }
      if (b) (*b)[i] -= factor * (*b)[row];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::optional<VectorXr> solve_exact(MatrixXr A, VectorXr b) {
  const auto pivots = row_reduce(A, &b);
  const auto rank = static_cast<Eigen::Index>(pivots.size());
  for (Eigen::Index i = rank; i < b.size(); ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  VectorXr x = VectorXr::Zero(A.cols());
  for (Eigen::Index i = 0; i < rank; ++i) x[pivots[static_cast<std::size_t>(i)]] = b[i];
  return x;
}

Eigen::Index rank_exact(MatrixXr A) { return static_cast<Eigen::Index>(row_reduce(A, nullptr).size()); }

}  // namespace classicality
