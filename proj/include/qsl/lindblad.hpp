#pragma once

#include <vector>

#include "qsl/operator_core.hpp"

namespace qsl {

/// Generator  L X = (i/hbar)[H, X] + sum_ij c_ij (A_i X A_j^dagger - 1/2 {A_j^dagger A_i, X}).
///
/// The Hamiltonian term uses the same sign as unitary_of (U = exp(+iHt/hbar)), so a model
/// without jump operators reproduces unitary evolution exactly.
class LindbladModel {
 public:
  LindbladModel(Observable hamiltonian, std::vector<Matrix> jump_ops, Matrix coeffs);
  /// Purely Hamiltonian generator.
  explicit LindbladModel(Observable hamiltonian);

  int dim() const { return hamiltonian_.dim(); }
  double hbar() const { return hamiltonian_.hbar(); }
  const Observable& hamiltonian() const { return hamiltonian_; }
  const std::vector<Matrix>& jump_ops() const { return jump_ops_; }
  const Matrix& coeffs() const { return coeffs_; }

  /// False when the coefficient matrix has a negative eigenvalue (the semigroup need not be CP).
  bool coeffs_psd() const { return coeffs_psd_; }

  /// Direct application of the generator to an arbitrary operator.
  Matrix apply(const Matrix& x) const;
  /// Adjoint (Heisenberg-picture) generator.
  Matrix apply_adjoint(const Matrix& x) const;

 private:
  Observable hamiltonian_;
  std::vector<Matrix> jump_ops_;
  Matrix coeffs_;
  bool coeffs_psd_ = true;
};

/// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
CVector vec(const Matrix& x);
Matrix unvec(const CVector& v, int dim);

/// d^2 x d^2 matrix of the generator acting on vec(X).
Matrix build_superoperator(const LindbladModel& model);

}  // namespace qsl
