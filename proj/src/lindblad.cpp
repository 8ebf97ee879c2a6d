#include "qsl/lindblad.hpp"

#include <string>

namespace qsl {

LindbladModel::LindbladModel(Observable hamiltonian, std::vector<Matrix> jump_ops, Matrix coeffs)
    : hamiltonian_(std::move(hamiltonian)), jump_ops_(std::move(jump_ops)), coeffs_(std::move(coeffs)) {
  const auto d = hamiltonian_.dim();
  const auto n = static_cast<Eigen::Index>(jump_ops_.size());
  for (const auto& a : jump_ops_)
    if (a.rows() != d || a.cols() != d) fail(ErrorKind::DimMismatch, "jump operator dimension differs from H");
  if (coeffs_.rows() != n || coeffs_.cols() != n)
    fail(ErrorKind::DimMismatch, "coefficient matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  if (n > 0) {
    if (hermiticity_defect(coeffs_) > 1e-12) fail(ErrorKind::NonHermitian, "coefficient matrix is not Hermitian");
    coeffs_ = 0.5 * (coeffs_ + coeffs_.adjoint());
    coeffs_psd_ = hermitian_eig(coeffs_).values.minCoeff() >= -1e-12;
  }
}

LindbladModel::LindbladModel(Observable hamiltonian)
    : LindbladModel(std::move(hamiltonian), {}, Matrix::Zero(0, 0)) {}

Matrix LindbladModel::apply(const Matrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) fail(ErrorKind::DimMismatch, "operator dimension differs from model");
  const Complex i_over_hbar(0.0, 1.0 / hbar());
  Matrix out = i_over_hbar * commutator(hamiltonian_.matrix(), x);
  const auto n = jump_ops_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex c = coeffs_(i, j);
      if (c == Complex(0.0)) continue;
      const Matrix& ai = jump_ops_[i];
      const Matrix aj_dag = jump_ops_[j].adjoint();
      out += c * (ai * x * aj_dag - 0.5 * anticommutator(aj_dag * ai, x));
    }
  }
  return out;
}

Matrix LindbladModel::apply_adjoint(const Matrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) fail(ErrorKind::DimMismatch, "operator dimension differs from model");
  const Complex i_over_hbar(0.0, 1.0 / hbar());
  // Tr(Y^dagger L X) = Tr((L^# Y)^dagger X)
  Matrix out = -i_over_hbar * commutator(hamiltonian_.matrix(), x);
  const auto n = jump_ops_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex c = std::conj(coeffs_(i, j));
      if (c == Complex(0.0)) continue;
      const Matrix ai_dag = jump_ops_[i].adjoint();
      const Matrix& aj = jump_ops_[j];
      out += c * (ai_dag * x * aj - 0.5 * anticommutator(ai_dag * aj, x));
    }
  }
  return out;
}

CVector vec(const Matrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

Matrix unvec(const CVector& v, int dim) { return Eigen::Map<const Matrix>(v.data(), dim, dim); }

Matrix build_superoperator(const LindbladModel& model) {
  const int d = model.dim();
  const Matrix id = identity(d);
  const Matrix& h = model.hamiltonian().matrix();
  const Complex i_over_hbar(0.0, 1.0 / model.hbar());
  Matrix s = i_over_hbar * (kron(id, h) - kron(h.transpose(), id));
  const auto& ops = model.jump_ops();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const Complex c = model.coeffs()(i, j);
      if (c == Complex(0.0)) continue;
      const Matrix product = ops[j].adjoint() * ops[i];
      s += c * (kron(ops[j].conjugate(), ops[i]) - 0.5 * kron(id, product) - 0.5 * kron(product.transpose(), id));
    }
  }
  return s;
}

}  // namespace qsl
