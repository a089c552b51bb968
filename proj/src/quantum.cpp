#include "classicality/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "classicality/error.hpp"

namespace classicality::quantum {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

void require_small(Eigen::Index d) {
  if (d > kMaxDimension) {
    throw Error(ErrorCode::DimensionTooLarge,
                "dimension " + std::to_string(d) + " exceeds the supported maximum of 16");
  }
}

}  // namespace

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() &&
         max_abs(a * a.adjoint() - ComplexMatrix::Identity(a.rows(), a.cols())) <= tol;
}

bool is_projector(const ComplexMatrix& a, double tol) {
  return is_hermitian(a, tol) && max_abs(a * a - a) <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a) {
  require_square(a, "operator");
  require_small(a.rows());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix outer(const Ket& v) { return v * v.adjoint(); }

Ket basis_ket(Eigen::Index d, Eigen::Index index) {
  Ket k = Ket::Zero(d);
  k[index] = 1.0;
  return k;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                            bool keep_first) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "partial trace: dimensions do not factor");
  }
  const Eigen::Index keep = keep_first ? dim_a : dim_b;
  ComplexMatrix out = ComplexMatrix::Zero(keep, keep);
  for (Eigen::Index i = 0; i < keep; ++i) {
    for (Eigen::Index j = 0; j < keep; ++j) {
      Complex s = 0;
      if (keep_first) {
        for (Eigen::Index k = 0; k < dim_b; ++k) s += rho(i * dim_b + k, j * dim_b + k);
      } else {
        for (Eigen::Index k = 0; k < dim_a; ++k) s += rho(k * dim_b + i, k * dim_b + j);
      }
      out(i, j) = s;
    }
  }
  return out;
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  require_square(m, "density matrix");
  require_small(m.rows());
  if (!is_hermitian(m, kEqualityTol)) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0)) > kEqualityTol) {
    throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");
  }
  if (hermitian_eigenvalues(m).minCoeff() < -kSpectrumTol) {
    throw Error(ErrorCode::InvalidState, "density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_ket(const Ket& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) {
    throw Error(ErrorCode::InvalidState, "zero ket");
  }
  ComplexMatrix m = outer(psi / norm);
  m = 0.5 * (m + m.adjoint()).eval();
  return from_matrix(std::move(m));
}

double born_prob(const DensityMatrix& state, const ComplexMatrix& effect) {
  if (effect.rows() != state.dim() || effect.cols() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "effect and state dimensions differ");
  }
  if (!is_hermitian(effect, kEqualityTol)) {
    throw Error(ErrorCode::NonHermitianEffect, "effect is not Hermitian");
  }
  const Eigen::VectorXd spectrum = hermitian_eigenvalues(effect);
  if (spectrum.minCoeff() < -kSpectrumTol || spectrum.maxCoeff() > 1.0 + kSpectrumTol) {
    throw Error(ErrorCode::NonHermitianEffect, "effect spectrum leaves [0, 1]");
  }
  const double p = (effect * state.matrix()).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

ProjectiveContext ProjectiveContext::create(std::string label, std::vector<ComplexMatrix> projectors) {
  if (projectors.empty()) {
    throw Error(ErrorCode::InvalidScenario, "projective context '" + label + "' has no projectors");
  }
  const Eigen::Index d = projectors.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const auto& p = projectors[i];
    if (p.rows() != d || p.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "projectors of '" + label + "' differ in dimension");
    }
    if (!is_projector(p, kConstructionTol)) {
      throw Error(ErrorCode::InvalidScenario, "element " + std::to_string(i) + " of '" + label +
                                                  "' is not a projector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(p * projectors[j]) > kConstructionTol) {
        throw Error(ErrorCode::InvalidScenario, "projectors of '" + label + "' are not orthogonal");
      }
    }
    sum += p;
  }
  if (max_abs(sum - identity(d)) > kConstructionTol) {
    throw Error(ErrorCode::InvalidScenario, "projectors of '" + label + "' do not sum to identity");
  }
  return ProjectiveContext(std::move(label), std::move(projectors));
}

ProjectiveContext ProjectiveContext::dichotomic(std::string label, const Ket& v) {
  const ComplexMatrix p = outer(v / v.norm());
  return create(std::move(label), {p, identity(v.size()) - p});
}

ProjectiveContext ProjectiveContext::from_observable(std::string label, const ComplexMatrix& observable) {
  const ComplexMatrix id = identity(observable.rows());
  return create(std::move(label), {0.5 * (id + observable), 0.5 * (id - observable)});
}

Spectrum spectral_decomposition(const ComplexMatrix& observable) {
  require_square(observable, "observable");
  require_small(observable.rows());
  if (!is_hermitian(observable, kConstructionTol)) {
    throw Error(ErrorCode::NonHermitianEffect, "observable is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (observable + observable.adjoint()));
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  Spectrum out;
  for (Eigen::Index k = values.size(); k-- > 0;) {
    const Ket v = vectors.col(k);
    if (out.eigenvalues.empty() || out.eigenvalues.back() - values[k] > 1e-8) {
      out.eigenvalues.push_back(values[k]);
      out.projectors.push_back(outer(v));
    } else {
      out.projectors.back() += outer(v);
    }
  }
  return out;
}

ProjectiveContext ProjectiveContext::spectral(std::string label, const ComplexMatrix& observable) {
  return create(std::move(label), spectral_decomposition(observable).projectors);
}

KcbsConstruction kcbs_construction() {
  constexpr double pi = std::numbers::pi;
  const double c = std::cos(pi / 5.0);
  const double cos_theta = std::sqrt(c / (1.0 + c));
  const double sin_theta = std::sqrt(1.0 / (1.0 + c));
  KcbsConstruction out;
  out.state = basis_ket(3, 0);
  for (int j = 0; j < 5; ++j) {
    const double phase = 4.0 * pi * j / 5.0;
    Ket v(3);
    // Third component uses sin; with cos in both slots the vectors are not pairwise orthogonal.
    v << cos_theta, sin_theta * std::cos(phase), sin_theta * std::sin(phase);
    out.vectors[static_cast<std::size_t>(j)] = v;
    out.observables[static_cast<std::size_t>(j)] = 2.0 * outer(v) - identity(3);
  }
  const ComplexMatrix rho = outer(out.state);
  double sum = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    sum += (rho * out.observables[j] * out.observables[(j + 1) % 5]).trace().real();
  }
  out.kcbs_sum = sum;
  return out;
}

std::array<std::array<ComplexMatrix, 3>, 3> peres_mermin_square() {
  const ComplexMatrix I = identity(2), X = pauli_x(), Y = pauli_y(), Z = pauli_z();
  return {{{tensor(Z, I), tensor(I, Z), tensor(Z, Z)},
           {tensor(I, X), tensor(X, I), tensor(X, X)},
           {tensor(Z, X), tensor(X, Z), tensor(Y, Y)}}};
}

Ket singlet() {
  Ket psi = Ket::Zero(4);
  psi[1] = 1.0 / std::sqrt(2.0);
  psi[2] = -1.0 / std::sqrt(2.0);
  return psi;
}

DensityMatrix werner_state(double alpha) {
  if (!(alpha >= -1.0 / 3.0 - kEqualityTol && alpha <= 1.0 + kEqualityTol)) {
    throw Error(ErrorCode::AlphaOutOfRange, "Werner parameter must lie in [-1/3, 1]");
  }
  ComplexMatrix m = alpha * outer(singlet()) + (1.0 - alpha) / 4.0 * identity(4);
  return DensityMatrix::from_matrix(std::move(m));
}

Ket max_entangled(Eigen::Index d) {
  if (d < 2) {
    throw Error(ErrorCode::DimensionMismatch, "maximally entangled state needs d >= 2");
  }
  require_small(d * d);
  Ket psi = Ket::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k) psi[k * d + k] = 1.0 / std::sqrt(static_cast<double>(d));
  return psi;
}

ComplexMatrix spin_observable(double theta) {
  return std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
}

ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

Ket random_ket(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Ket v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

DensityMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix::from_matrix(std::move(m));
}

}  // namespace classicality::quantum
