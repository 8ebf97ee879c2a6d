#include "qsl/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace qsl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::BlochNormExceeded: return "BlochNormExceeded";
    case ErrorKind::FrozenState: return "FrozenState";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::BadUnitVector: return "BadUnitVector";
    case ErrorKind::InvalidStateProduced: return "InvalidStateProduced";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::NotReached: return "NotReached";
    case ErrorKind::ZeroShots: return "ZeroShots";
    case ErrorKind::BadN: return "BadN";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Spectrum hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::DimMismatch, "matrix must be square and non-empty");
  if (hermiticity_defect(m) > kHermitianTolerance) fail(ErrorKind::NonHermitian, "symmetry violated beyond 1e-9");
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Internal, "eigen-decomposition failed");
  // Eigen returns ascending order.
  const Eigen::Index n = h.rows();
  Spectrum s{RVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    s.values(k) = solver.eigenvalues()(n - 1 - k);
    s.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return s;
}

double real_trace(const Matrix& m) {
  const Complex tr = m.trace();
  if (std::abs(tr.imag()) > kImagResidueTolerance * std::max(1.0, std::abs(tr.real())))
    fail(ErrorKind::Internal, "trace has imaginary residue " + std::to_string(tr.imag()));
  return tr.real();
}

QuantumState QuantumState::from_matrix(const Matrix& m, double clip_tol, ErrorKind negative_kind) {
  Spectrum s = hermitian_eig(m);
  const double tr = s.values.sum();
  if (std::abs(tr - 1.0) > kTraceTolerance)
    fail(ErrorKind::InvalidState, "trace " + std::to_string(tr) + " differs from 1");
  bool clipped = false;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) < -clip_tol)
      fail(negative_kind, "eigenvalue " + std::to_string(s.values(k)) + " below -" + std::to_string(clip_tol));
    if (s.values(k) < 0.0) {
      s.values(k) = 0.0;
      clipped = true;
    }
  }
  s.values /= s.values.sum();
  if (clipped || std::abs(tr - 1.0) > 1e-15) {
    Matrix rebuilt = s.apply([](double x) { return x; });
    rebuilt = 0.5 * (rebuilt + rebuilt.adjoint());
    return QuantumState(std::move(rebuilt), std::move(s));
  }
  return QuantumState(0.5 * (m + m.adjoint()), std::move(s));
}

QuantumState QuantumState::pure(const CVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) fail(ErrorKind::InvalidState, "zero vector");
  const CVector v = psi / n;
  return from_matrix(v * v.adjoint());
}

QuantumState QuantumState::maximally_mixed(int dim) { return from_matrix(identity(dim) / double(dim)); }

Matrix QuantumState::sqrt() const {
  return spectrum_.apply([](double x) { return x > kSupportTolerance ? std::sqrt(x) : 0.0; });
}

Matrix QuantumState::power(double alpha) const {
  return spectrum_.apply([alpha](double x) { return x > kSupportTolerance ? std::pow(x, alpha) : 0.0; });
}

double QuantumState::purity() const { return spectrum_.values.squaredNorm(); }

int QuantumState::rank(double tol) const {
  return static_cast<int>((spectrum_.values.array() > tol).count());
}

Observable::Observable(const Matrix& m, double hbar, double omega)
    : matrix_(0.5 * (m + m.adjoint())), hbar_(hbar), omega_(omega), spectrum_(hermitian_eig(m)) {
  if (!(hbar > 0.0) || !(omega > 0.0)) fail(ErrorKind::ValidationError, "hbar and omega must be positive");
}

BlochVector::BlochVector(const Vector3& v) : r(v) {
  if (v.norm() > 1.0 + 1e-12) fail(ErrorKind::BlochNormExceeded, "|r| = " + std::to_string(v.norm()));
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Matrix sigma_plus() { return sigma_minus().adjoint(); }

Matrix pauli_dot(const Vector3& n) { return n(0) * pauli_x() + n(1) * pauli_y() + n(2) * pauli_z(); }

namespace {
void require_conformable(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    fail(ErrorKind::DimMismatch, "operands are " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                     " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}
}  // namespace

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_conformable(a, b);
  return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
  require_conformable(a, b);
  return a * b + b * a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  require_conformable(a, b);
  return (a - b).norm();
}

Matrix psd_sqrt(const QuantumState& rho) { return rho.sqrt(); }

Matrix unitary_of(const Observable& h, double t) {
  const double phase = t / h.hbar();
  const Spectrum& s = h.spectrum();
  Matrix scaled = s.vectors;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) scaled.col(k) *= std::exp(Complex(0.0, s.values(k) * phase));
  return scaled * s.vectors.adjoint();
}

Matrix partial_trace_matrix(const Matrix& m, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0 || dim_a * dim_b != m.rows() || m.rows() != m.cols())
    fail(ErrorKind::DimMismatch, "subsystem dims do not multiply to " + std::to_string(m.rows()));
  const int kept = keep == Subsystem::A ? dim_a : dim_b;
  Matrix out = Matrix::Zero(kept, kept);
  for (int i = 0; i < kept; ++i) {
    for (int j = 0; j < kept; ++j) {
      Complex acc = 0.0;
      if (keep == Subsystem::A) {
        for (int k = 0; k < dim_b; ++k) acc += m(i * dim_b + k, j * dim_b + k);
      } else {
        for (int k = 0; k < dim_a; ++k) acc += m(k * dim_b + i, k * dim_b + j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

QuantumState partial_trace(const QuantumState& rho_ab, int dim_a, int dim_b, Subsystem keep) {
  return QuantumState::from_matrix(partial_trace_matrix(rho_ab.matrix(), dim_a, dim_b, keep));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  return QuantumState::from_matrix(kron(a.matrix(), b.matrix()));
}

namespace {
Matrix ginibre(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(i, j) = Complex(re, im);
    }
  return g;
}
}  // namespace

QuantumState random_state(int dim, int rank, std::uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim)
    fail(ErrorKind::BadRank, "rank " + std::to_string(rank) + " not in [1, " + std::to_string(dim) + "]");
  std::mt19937_64 gen(seed);
  const Matrix g = ginibre(dim, rank, gen);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return QuantumState::from_matrix(w);
}

Matrix random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const Matrix g = ginibre(dim, dim, gen);
  return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const Matrix g = ginibre(dim, dim, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

QuantumState bloch_to_state(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-12) fail(ErrorKind::BlochNormExceeded, "|r| = " + std::to_string(r.norm()));
  return QuantumState::from_matrix(0.5 * (identity(2) + pauli_dot(r.r)), 1e-11);
}

BlochVector state_to_bloch(const QuantumState& rho) {
  if (rho.dim() != 2) fail(ErrorKind::DimMismatch, "Bloch representation needs a qubit");
  const Matrix& m = rho.matrix();
  BlochVector b;
  b.r = Vector3(2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real());
  return b;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace qsl
