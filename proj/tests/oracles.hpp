#pragma once

// Test-side closed forms, kept independent of the library's spectral code.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using V3 = Eigen::Vector3d;

inline M2 bloch(const V3& r) {
  M2 m;
  m << C(1 + r(2), 0), C(r(0), -r(1)), C(r(0), r(1)), C(1 - r(2), 0);
  return 0.5 * m;
}

inline V3 bloch_of(const Eigen::MatrixXcd& rho) {
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

/// n.sigma
inline M2 pauli_dot(const V3& n) { return 2.0 * bloch(n) - M2::Identity(); }

/// sqrt of a 2x2 PSD matrix: (A + sqrt(det A) I) / sqrt(Tr A + 2 sqrt(det A)).
inline M2 sqrt2(const M2& a) {
  const double det = a.determinant().real();
  const double s = det > 1e-14 ? std::sqrt(det) : 0.0;
  const double t = std::sqrt(a.trace().real() + 2.0 * s);
  return (a + s * M2::Identity()) / t;
}

/// Rodrigues rotation of r about n by angle 2a (U = exp(i a n.sigma)).
inline V3 rotate(const V3& r, const V3& n, double a) {
  const double th = -2.0 * a;
  return r * std::cos(th) + n.cross(r) * std::sin(th) + n * n.dot(r) * (1.0 - std::cos(th));
}

inline double affinity(const M2& a, const M2& b) { return (sqrt2(a) * sqrt2(b)).trace().real(); }

/// Qubit fidelity sqrt(Tr(ab) + 2 sqrt(det a det b)).
inline double fidelity(const M2& a, const M2& b) {
  const double d = std::max(0.0, a.determinant().real() * b.determinant().real());
  return std::sqrt(std::max(0.0, (a * b).trace().real() + 2.0 * std::sqrt(d)));
}

/// -1/2 Tr[sqrt rho, H]^2 through the 2x2 square root.
inline double wy(const M2& rho, const M2& h) {
  const M2 c = sqrt2(rho) * h - h * sqrt2(rho);
  return -0.5 * (c * c).trace().real();
}

/// omega^2 (1 - sqrt m) |r_hat x n|^2 for H = omega n.sigma.
inline double wy_bloch(const V3& r, const V3& n, double omega = 1.0) {
  const double len = r.norm();
  if (len == 0.0) return 0.0;
  const double m = 1.0 - len * len;
  return omega * omega * (1.0 - std::sqrt(std::max(0.0, m))) * (r / len).cross(n).squaredNorm();
}

/// Qubit SLD QFI 4 omega^2 |r|^2 |n x r_hat|^2.
inline double qfi_bloch(const V3& r, const V3& n, double omega = 1.0) {
  const double len = r.norm();
  if (len == 0.0) return 0.0;
  return 4.0 * omega * omega * len * len * n.cross(r / len).squaredNorm();
}

/// Bloch-form affinity 1/2[(r_hat.r_hat')(1 - sqrt m) + (1 + sqrt m)] for equal-length r, r'.
inline double affinity_bloch(const V3& r, const V3& rp) {
  const double sm = std::sqrt(std::max(0.0, 1.0 - r.squaredNorm()));
  return 0.5 * (r.normalized().dot(rp.normalized()) * (1.0 - sm) + (1.0 + sm));
}

/// Explicit 4-index contraction of a (da*db) square matrix.
inline Eigen::MatrixXcd trace_out(const Eigen::MatrixXcd& m, int da, int db, bool keep_a) {
  const int d = keep_a ? da : db;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < (keep_a ? db : da); ++k)
        out(i, j) += keep_a ? m(i * db + k, j * db + k) : m(k * db + i, k * db + j);
  return out;
}

/// Eigenvalues of a 2x2 Hermitian matrix, descending.
inline std::pair<double, double> eig2(const M2& m) {
  const double a = m(0, 0).real(), d = m(1, 1).real();
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
  return {0.5 * (a + d) + disc, 0.5 * (a + d) - disc};
}

}  // namespace oracle
