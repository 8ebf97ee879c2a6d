#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "qsl/errors.hpp"

namespace qsl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Vector3 = Eigen::Vector3d;

inline constexpr double kHermitianTolerance = 1e-9;
inline constexpr double kClipTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-8;
inline constexpr double kImagResidueTolerance = 1e-9;
/// Eigenvalues below this are roundoff; small powers would otherwise amplify them.
inline constexpr double kSupportTolerance = 1e-13;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
struct Spectrum {
  RVector values;
  Matrix vectors;

  /// V f(diag) V^dagger for a real scalar function of the eigenvalues.
  template <typename F>
  Matrix apply(F&& f) const {
    Matrix scaled = vectors;
    for (Eigen::Index k = 0; k < values.size(); ++k) scaled.col(k) *= f(values(k));
    return scaled * vectors.adjoint();
  }
};

/// Largest elementwise |M - M^dagger|.
double hermiticity_defect(const Matrix& m);

Spectrum hermitian_eig(const Matrix& m);

/// Real part of Tr(M); throws Internal if the imaginary residue exceeds 1e-9 (scaled by |Tr M|).
double real_trace(const Matrix& m);

/// Density matrix with a spectral cache computed once at construction.
class QuantumState {
 public:
  /// Validates hermiticity, trace and positivity. Eigenvalues in [-clip_tol, 0) are
  /// clipped to zero and the spectrum renormalized; anything below -clip_tol throws.
  static QuantumState from_matrix(const Matrix& m, double clip_tol = kClipTolerance,
                                  ErrorKind negative_kind = ErrorKind::NegativeEigenvalue);
  static QuantumState pure(const CVector& psi);
  static QuantumState maximally_mixed(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const Spectrum& spectrum() const { return spectrum_; }

  /// Positive square root; eigenvalues below kSupportTolerance count as zero.
  Matrix sqrt() const;
  /// rho^alpha by spectral calculus; eigenvalues below kSupportTolerance count as zero.
  Matrix power(double alpha) const;
  double purity() const;
  /// Number of eigenvalues above `tol`.
  int rank(double tol = 1e-9) const;

 private:
  QuantumState(Matrix m, Spectrum s) : matrix_(std::move(m)), spectrum_(std::move(s)) {}

  Matrix matrix_;
  Spectrum spectrum_;
};

/// Hermitian generator with unit conventions (hbar, omega).
class Observable {
 public:
  explicit Observable(const Matrix& m, double hbar = 1.0, double omega = 1.0);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  double hbar() const { return hbar_; }
  double omega() const { return omega_; }
  const Spectrum& spectrum() const { return spectrum_; }

  Observable scaled(double factor) const { return Observable(matrix_ * factor, hbar_, omega_); }

 private:
  Matrix matrix_;
  double hbar_;
  double omega_;
  Spectrum spectrum_;
};

struct BlochVector {
  Vector3 r = Vector3::Zero();

  BlochVector() = default;
  explicit BlochVector(const Vector3& v);
  BlochVector(double x, double y, double z) : BlochVector(Vector3(x, y, z)) {}

  double norm() const { return r.norm(); }
};

Matrix identity(int dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// Lowering operator |1><0| in the basis where sigma_z = diag(1, -1).
Matrix sigma_minus();
Matrix sigma_plus();
/// n . sigma for a real 3-vector.
Matrix pauli_dot(const Vector3& n);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
double frobenius_distance(const Matrix& a, const Matrix& b);

Matrix psd_sqrt(const QuantumState& rho);

/// exp(+i H t / hbar).
Matrix unitary_of(const Observable& h, double t);

enum class Subsystem { A, B };

/// Partial trace of an arbitrary operator on H_A x H_B.
Matrix partial_trace_matrix(const Matrix& m, int dim_a, int dim_b, Subsystem keep);
QuantumState partial_trace(const QuantumState& rho_ab, int dim_a, int dim_b, Subsystem keep);
QuantumState tensor(const QuantumState& a, const QuantumState& b);

/// Ginibre construction G G^dagger / Tr(G G^dagger) with G of size dim x rank.
QuantumState random_state(int dim, int rank, std::uint64_t seed);
/// GUE-distributed Hermitian matrix (entries of unit variance scale).
Matrix random_hermitian(int dim, std::uint64_t seed);
/// Haar-distributed unitary via QR of a complex Ginibre matrix.
Matrix random_unitary(int dim, std::uint64_t seed);

QuantumState bloch_to_state(const BlochVector& r);
BlochVector state_to_bloch(const QuantumState& rho);

/// Per-instance seed derivation (splitmix64) so parallel sweeps are order independent.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace qsl
