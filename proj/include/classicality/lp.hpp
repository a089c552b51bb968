#pragma once

// Dense two-phase simplex over an arbitrary ordered field.
//
// Instantiated with Rational for every verdict the library reports (the
// arithmetic is exact and Bland's rule rules out cycling), and with double for
// the heuristic embedding search where only a verified end result matters.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "classicality/error.hpp"
#include "classicality/rational.hpp"

namespace classicality::lp {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class Scalar>
struct Solution {
  Status status = Status::Infeasible;
  Vector<Scalar> x;
  Scalar objective{};
  /// Set when infeasible: farkas' A <= 0 componentwise and farkas' b > 0.
  Vector<Scalar> farkas;
};

/// Simplex tableau for { A x = b, x >= 0 }, one artificial column per row.
///
/// Columns [0, n) are structural, [n, n + m) artificial. The objective row
/// holds reduced costs; `neg_objective_` holds minus the current objective.
template <class Scalar>
class Tableau {
  using Policy = NumericPolicy<Scalar>;

 public:
  Tableau(const Eigen::Ref<const Matrix<Scalar>>& A, const Vector<Scalar>& b)
      : rows_(A.rows()), structural_(A.cols()), table_(A.rows(), A.cols() + A.rows()),
        rhs_(b), row_sign_(A.rows(), 1), basis_(A.rows()),
        in_basis_(static_cast<std::size_t>(A.cols() + A.rows()), 0),
        reduced_(Vector<Scalar>::Zero(A.cols() + A.rows())) {
    if (b.size() != A.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "right-hand side does not match constraint rows");
    }
    table_.setZero();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const bool flip = Policy::is_negative(b[i]);
      row_sign_[i] = flip ? -1 : 1;
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (!Policy::is_zero(A(i, j))) table_(i, j) = flip ? Scalar(-A(i, j)) : A(i, j);
      }
      if (flip) rhs_[i] = -rhs_[i];
      table_(i, structural_ + i) = Scalar(1);
      basis_[i] = structural_ + i;
      in_basis_[static_cast<std::size_t>(structural_ + i)] = 1;
    }
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index structural() const { return structural_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }

  /// Phase one. Leaves a feasible basis with artificials driven out where possible.
  bool find_feasible_basis(std::size_t iteration_limit = 1'000'000) {
    reduced_.setZero();
    neg_objective_ = Scalar(0);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (!Policy::is_zero(table_(i, j))) reduced_[j] -= table_(i, j);
      }
      neg_objective_ -= rhs_[i];
    }
    if (!run(structural_ + rows_, iteration_limit)) {
      throw Error(ErrorCode::TooLarge, "simplex iteration limit reached in phase one");
    }
    if (Policy::is_positive(Scalar(-neg_objective_))) {
      farkas_ = Vector<Scalar>(rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const Scalar pi = Scalar(1) - reduced_[structural_ + i];
        farkas_[i] = row_sign_[i] > 0 ? pi : Scalar(-pi);
      }
      return false;
    }
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) continue;
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (!Policy::is_zero(table_(i, j)) && !is_basic(j)) {
          pivot(i, j);
          break;
        }
      }
    }
    feasible_ = true;
    return true;
  }

  /// Phase two from the basis found by `find_feasible_basis`.
  Status minimize(const Vector<Scalar>& cost, std::size_t iteration_limit = 1'000'000) {
    if (!feasible_) {
      throw std::logic_error("minimize() requires a feasible basis");
    }
    reduced_.setZero();
    neg_objective_ = Scalar(0);
    for (Eigen::Index j = 0; j < structural_; ++j) reduced_[j] = cost[j];
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] >= structural_) continue;
      const Scalar& cb = cost[basis_[i]];
      if (Policy::is_zero(cb)) continue;
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (!Policy::is_zero(table_(i, j))) reduced_[j] -= cb * table_(i, j);
      }
      neg_objective_ -= cb * rhs_[i];
    }
    unbounded_ = false;
    if (!run(structural_, iteration_limit)) return Status::IterationLimit;
    return unbounded_ ? Status::Unbounded : Status::Optimal;
  }

  Scalar objective() const { return Scalar(-neg_objective_); }
  const Vector<Scalar>& farkas() const { return farkas_; }

  Vector<Scalar> primal() const {
    Vector<Scalar> x = Vector<Scalar>::Zero(structural_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) x[basis_[i]] = rhs_[i];
    }
    return x;
  }

  bool is_basic(Eigen::Index column) const { return in_basis_[static_cast<std::size_t>(column)] != 0; }

  /// Rows eligible to leave when `column` enters (minimum ratio, ties kept).
  std::vector<Eigen::Index> ratio_rows(Eigen::Index column) const {
    std::vector<Eigen::Index> best;
    std::optional<Scalar> best_ratio;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!Policy::is_positive(table_(i, column))) continue;
      const Scalar ratio = rhs_[i] / table_(i, column);
      if (!best_ratio || Policy::is_negative(Scalar(ratio - *best_ratio))) {
        best_ratio = ratio;
        best.assign(1, i);
      } else if (Policy::is_zero(Scalar(ratio - *best_ratio))) {
        best.push_back(i);
      }
    }
    return best;
  }

  void pivot(Eigen::Index row, Eigen::Index column) {
    const Scalar pivot_value = table_(row, column);
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < table_.cols(); ++j) {
      if (Policy::is_zero(table_(row, j))) {
        table_(row, j) = Scalar(0);
        continue;
      }
      table_(row, j) /= pivot_value;
      support.push_back(j);
    }
    rhs_[row] /= pivot_value;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const Scalar factor = table_(i, column);
      if (Policy::is_zero(factor)) continue;
      for (Eigen::Index j : support) table_(i, j) -= factor * table_(row, j);
      rhs_[i] -= factor * rhs_[row];
      if constexpr (std::is_floating_point_v<Scalar>) {
        table_(i, column) = 0;
        if (Policy::is_zero(rhs_[i])) rhs_[i] = 0;
      }
    }
    const Scalar factor = reduced_[column];
    if (!Policy::is_zero(factor)) {
      for (Eigen::Index j : support) reduced_[j] -= factor * table_(row, j);
      neg_objective_ -= factor * rhs_[row];
    }
    in_basis_[static_cast<std::size_t>(basis_[row])] = 0;
    in_basis_[static_cast<std::size_t>(column)] = 1;
    basis_[row] = column;
  }

 private:
  // Bland's rule over columns [0, limit). Returns false on iteration limit.
  bool run(Eigen::Index limit, std::size_t iteration_limit) {
    for (std::size_t iteration = 0; iteration < iteration_limit; ++iteration) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (Policy::is_negative(reduced_[j]) && !is_basic(j)) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      const auto candidates = ratio_rows(entering);
      if (candidates.empty()) {
        unbounded_ = true;
        return true;
      }
      Eigen::Index leaving = candidates.front();
      for (Eigen::Index i : candidates) {
        if (basis_[i] < basis_[leaving]) leaving = i;
      }
      pivot(leaving, entering);
    }
    return false;
  }

  Eigen::Index rows_;
  Eigen::Index structural_;
  Matrix<Scalar> table_;
  Vector<Scalar> rhs_;
  std::vector<int> row_sign_;
  std::vector<Eigen::Index> basis_;
  std::vector<char> in_basis_;
  Vector<Scalar> reduced_;
  Scalar neg_objective_{};
  Vector<Scalar> farkas_;
  bool feasible_ = false;
  bool unbounded_ = false;
};

/// Feasibility of { A x = b, x >= 0 }: a point, or a Farkas certificate.
template <class Scalar>
Solution<Scalar> find_feasible_point(const Eigen::Ref<const Matrix<Scalar>>& A,
                                     const Vector<Scalar>& b) {
  Tableau<Scalar> tableau(A, b);
  Solution<Scalar> out;
  if (!tableau.find_feasible_basis()) {
    out.status = Status::Infeasible;
    out.farkas = tableau.farkas();
    return out;
  }
  out.status = Status::Optimal;
  out.x = tableau.primal();
  out.objective = Scalar(0);
  return out;
}

/// min c'x subject to { A x = b, x >= 0 }.
template <class Scalar>
Solution<Scalar> minimize(const Eigen::Ref<const Matrix<Scalar>>& A, const Vector<Scalar>& b,
                          const Vector<Scalar>& c, std::size_t iteration_limit = 1'000'000) {
  Tableau<Scalar> tableau(A, b);
  Solution<Scalar> out;
  if (!tableau.find_feasible_basis(iteration_limit)) {
    out.status = Status::Infeasible;
    out.farkas = tableau.farkas();
    return out;
  }
  out.status = tableau.minimize(c, iteration_limit);
  out.x = tableau.primal();
  out.objective = tableau.objective();
  return out;
}

/// True when farkas' A <= 0 and farkas' b > 0, checked entry by entry.
template <class Scalar>
bool is_farkas_certificate(const Eigen::Ref<const Matrix<Scalar>>& A, const Vector<Scalar>& b,
                           const Vector<Scalar>& y) {
  using Policy = NumericPolicy<Scalar>;
  if (y.size() != A.rows() || b.size() != A.rows()) return false;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    Scalar s(0);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (!Policy::is_zero(A(i, j)) && !Policy::is_zero(y[i])) s += y[i] * A(i, j);
    }
    if (Policy::is_positive(s)) return false;
  }
  Scalar s(0);
  for (Eigen::Index i = 0; i < A.rows(); ++i) s += y[i] * b[i];
  return Policy::is_positive(s);
}

/// Constraint sense for `LinearProgram`.
enum class Sense { LessEqual, Equal, GreaterEqual };

/// General-form linear program: free or nonnegative variables and mixed-sense
/// rows, reduced to standard form internally.
template <class Scalar>
class LinearProgram {
 public:
  Eigen::Index add_variable(bool nonnegative = true, Scalar cost = Scalar(0)) {
    nonnegative_.push_back(nonnegative);
    cost_.push_back(cost);
    return static_cast<Eigen::Index>(cost_.size()) - 1;
  }

  void add_constraint(std::vector<std::pair<Eigen::Index, Scalar>> terms, Sense sense, Scalar rhs) {
    rows_.push_back({std::move(terms), sense, rhs});
  }

  Eigen::Index variable_count() const { return static_cast<Eigen::Index>(cost_.size()); }

  Solution<Scalar> solve(std::size_t iteration_limit = 1'000'000) const {
    // Column layout: for variable k, column plus_[k]; free variables also get minus_[k].
    std::vector<Eigen::Index> plus(cost_.size()), minus(cost_.size(), -1);
    Eigen::Index columns = 0;
    for (std::size_t k = 0; k < cost_.size(); ++k) {
      plus[k] = columns++;
      if (!nonnegative_[k]) minus[k] = columns++;
    }
    std::vector<Eigen::Index> slack(rows_.size(), -1);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].sense != Sense::Equal) slack[r] = columns++;
    }
    Matrix<Scalar> A = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(rows_.size()), columns);
    Vector<Scalar> b(static_cast<Eigen::Index>(rows_.size()));
    Vector<Scalar> c = Vector<Scalar>::Zero(columns);
    for (std::size_t k = 0; k < cost_.size(); ++k) {
      c[plus[k]] = cost_[k];
      if (minus[k] >= 0) c[minus[k]] = -cost_[k];
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto i = static_cast<Eigen::Index>(r);
      for (const auto& [k, coefficient] : rows_[r].terms) {
        A(i, plus[k]) += coefficient;
        if (minus[k] >= 0) A(i, minus[k]) -= coefficient;
      }
      if (rows_[r].sense == Sense::LessEqual) A(i, slack[r]) = Scalar(1);
      if (rows_[r].sense == Sense::GreaterEqual) A(i, slack[r]) = Scalar(-1);
      b[i] = rows_[r].rhs;
    }
    Solution<Scalar> standard = minimize<Scalar>(A, b, c, iteration_limit);
    Solution<Scalar> out;
    out.status = standard.status;
    out.objective = standard.objective;
    out.farkas = standard.farkas;
    if (standard.status == Status::Optimal) {
      out.x = Vector<Scalar>(variable_count());
      for (std::size_t k = 0; k < cost_.size(); ++k) {
        Scalar v = standard.x[plus[k]];
        if (minus[k] >= 0) v -= standard.x[minus[k]];
        out.x[static_cast<Eigen::Index>(k)] = v;
      }
    }
    return out;
  }

 private:
  struct Row {
    std::vector<std::pair<Eigen::Index, Scalar>> terms;
    Sense sense;
    Scalar rhs;
  };
  std::vector<bool> nonnegative_;
  std::vector<Scalar> cost_;
  std::vector<Row> rows_;
};

/// All vertices of the bounded polyhedron { A x = b, x >= 0 }, found by
/// breadth-first pivoting over basic feasible solutions. Vertices are returned
/// in lexicographic order. Throws TooLarge past `vertex_cap` vertices.
template <class Scalar>
std::vector<Vector<Scalar>> enumerate_vertices(const Eigen::Ref<const Matrix<Scalar>>& A,
                                               const Vector<Scalar>& b,
                                               std::size_t vertex_cap = 10'000,
                                               std::size_t basis_cap = 200'000) {
  auto less = [](const Vector<Scalar>& u, const Vector<Scalar>& v) {
    return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(),
                                        v.data() + v.size());
  };
  std::set<Vector<Scalar>, decltype(less)> vertices(less);
  Tableau<Scalar> start(A, b);
  if (!start.find_feasible_basis()) return {};

  auto key_of = [](const Tableau<Scalar>& t) {
    std::vector<Eigen::Index> key = t.basis();
    std::sort(key.begin(), key.end());
    return key;
  };
  std::set<std::vector<Eigen::Index>> seen{key_of(start)};
  std::deque<Tableau<Scalar>> queue{start};
  vertices.insert(start.primal());
  while (!queue.empty()) {
    Tableau<Scalar> current = std::move(queue.front());
    queue.pop_front();
    for (Eigen::Index j = 0; j < current.structural(); ++j) {
      if (current.is_basic(j)) continue;
      for (Eigen::Index row : current.ratio_rows(j)) {
        if (current.basis()[static_cast<std::size_t>(row)] >= current.structural()) continue;
        Tableau<Scalar> next = current;
        next.pivot(row, j);
        auto key = key_of(next);
        if (!seen.insert(key).second) continue;
        if (seen.size() > basis_cap) {
          throw Error(ErrorCode::TooLarge, "vertex enumeration exceeded the basis cap");
        }
        vertices.insert(next.primal());
        if (vertices.size() > vertex_cap) {
          throw Error(ErrorCode::TooLarge, "vertex enumeration exceeded the vertex cap");
        }
        queue.push_back(std::move(next));
      }
    }
  }
  return {vertices.begin(), vertices.end()};
}

}  // namespace classicality::lp
