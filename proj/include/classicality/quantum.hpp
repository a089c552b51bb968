#pragma once

#include <array>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace classicality::quantum {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

// Tolerance hierarchy: constructions are checked at 1e-10, equalities at 1e-12.
inline constexpr double kConstructionTol = 1e-10;
inline constexpr double kEqualityTol = 1e-12;
inline constexpr double kSpectrumTol = 1e-10;
inline constexpr Eigen::Index kMaxDimension = 16;

/// Entrywise maximum modulus (the ‖·‖∞ used by every tolerance check).
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Kronecker product a ⊗ b.
template <class DerivedA, class DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> tensor(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                               a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& a, double tol = kEqualityTol);
bool is_unitary(const ComplexMatrix& a, double tol = kEqualityTol);
bool is_projector(const ComplexMatrix& a, double tol = kEqualityTol);

/// Spectrum of a Hermitian matrix of dimension at most 16, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a);

ComplexMatrix identity(Eigen::Index d);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// |v⟩⟨v| (v is not normalised here).
ComplexMatrix outer(const Ket& v);

/// Computational basis ket |index⟩ in dimension d.
Ket basis_ket(Eigen::Index d, Eigen::Index index);

/// Trace out one factor of a bipartite operator on C^dA ⊗ C^dB.
/// `keep_first` selects which factor survives.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                            bool keep_first);

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(ComplexMatrix m);
  static DensityMatrix from_ket(const Ket& psi);

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

/// Tr(effect · ρ), clamped to [0, 1]. The effect must be Hermitian with
/// spectrum in [0, 1].
double born_prob(const DensityMatrix& state, const ComplexMatrix& effect);

/// A projection-valued measurement: orthogonal projectors summing to identity.
class ProjectiveContext {
 public:
  static ProjectiveContext create(std::string label, std::vector<ComplexMatrix> projectors);
  /// {|v⟩⟨v|, 𝟙 − |v⟩⟨v|} for a unit vector v.
  static ProjectiveContext dichotomic(std::string label, const Ket& v);
  /// Eigenprojectors (I ± A)/2 of a ±1-valued observable, outcome 0 ↔ eigenvalue +1.
  static ProjectiveContext from_observable(std::string label, const ComplexMatrix& observable);
  /// Spectral projectors of a Hermitian observable, eigenvalues descending
  /// (eigenvalues closer than 1e-8 are merged).
  static ProjectiveContext spectral(std::string label, const ComplexMatrix& observable);

  const std::string& label() const { return label_; }
  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
  Eigen::Index dim() const { return projectors_.front().rows(); }

 private:
  ProjectiveContext(std::string label, std::vector<ComplexMatrix> projectors)
      : label_(std::move(label)), projectors_(std::move(projectors)) {}
  std::string label_;
  std::vector<ComplexMatrix> projectors_;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending, distinct
  std::vector<ComplexMatrix> projectors;
};

Spectrum spectral_decomposition(const ComplexMatrix& observable);

struct KcbsConstruction {
  Ket state;
  std::array<Ket, 5> vectors;
  std::array<ComplexMatrix, 5> observables;
  /// Σ_j ⟨A_j A_{j+1}⟩ on `state`.
  double kcbs_sum = 0.0;
  static constexpr double kNoncontextualBound = -3.0;
};

/// The five-cycle construction in C^3 with |ψ⟩ = |0⟩ and
/// |v_j⟩ = cosθ|0⟩ + sinθ cos(4πj/5)|1⟩ + sinθ sin(4πj/5)|2⟩, cos²θ = cos(π/5)/(1+cos(π/5)).
KcbsConstruction kcbs_construction();

/// Rows: (Z⊗1, 1⊗Z, Z⊗Z), (1⊗X, X⊗1, X⊗X), (Z⊗X, X⊗Z, Y⊗Y).
std::array<std::array<ComplexMatrix, 3>, 3> peres_mermin_square();

/// α|Ψ⁻⟩⟨Ψ⁻| + (1−α)/4 𝟙, for −1/3 ≤ α ≤ 1.
DensityMatrix werner_state(double alpha);

/// (|01⟩ − |10⟩)/√2.
Ket singlet();

/// (1/√d) Σ_k |kk⟩.
Ket max_entangled(Eigen::Index d);

/// cosθ σ_z + sinθ σ_x.
ComplexMatrix spin_observable(double theta);

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng);
Ket random_ket(Eigen::Index d, std::mt19937_64& rng);
DensityMatrix random_density(Eigen::Index d, std::mt19937_64& rng);

}  // namespace classicality::quantum
