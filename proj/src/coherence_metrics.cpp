#include "qsl/coherence_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace qsl {

namespace {

void require_same_dim(int a, int b) {
  if (a != b) fail(ErrorKind::DimMismatch, "dimensions " + std::to_string(a) + " and " + std::to_string(b));
}

// -1/2 Tr([X, H]^2) for Hermitian X; the commutator is anti-Hermitian so this is >= 0.
double half_negative_commutator_square(const Matrix& x, const Matrix& h) {
  const Matrix c = commutator(x, h);
  return std::max(0.0, -0.5 * real_trace(c * c));
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double wy_coherence(const QuantumState& rho, const Observable& h) {
  require_same_dim(rho.dim(), h.dim());
  return half_negative_commutator_square(rho.sqrt(), h.matrix());
}

double wy_lower_bound(const QuantumState& rho, const Observable& h) {
  require_same_dim(rho.dim(), h.dim());
  return half_negative_commutator_square(rho.matrix(), h.matrix());
}

double affinity(const QuantumState& rho1, const QuantumState& rho2) {
  require_same_dim(rho1.dim(), rho2.dim());
  return clamp_unit(real_trace(rho1.sqrt() * rho2.sqrt()));
}

double uhlmann_fidelity(const QuantumState& rho1, const QuantumState& rho2) {
  require_same_dim(rho1.dim(), rho2.dim());
  const Matrix s = rho1.sqrt();
  const Spectrum inner = hermitian_eig(s * rho2.matrix() * s);
  double f = 0.0;
  for (Eigen::Index k = 0; k < inner.values.size(); ++k)
    if (inner.values(k) > kSupportTolerance) f += std::sqrt(inner.values(k));
  return clamp_unit(f);
}

double relative_purity(const QuantumState& rho1, const QuantumState& rho_t) {
  require_same_dim(rho1.dim(), rho_t.dim());
  return real_trace(rho1.matrix() * rho_t.matrix()) / rho1.purity();
}

double variance(const QuantumState& rho, const Observable& h) {
  require_same_dim(rho.dim(), h.dim());
  const Matrix rh = rho.matrix() * h.matrix();
  const double mean = real_trace(rh);
  return std::max(0.0, real_trace(rh * h.matrix()) - mean * mean);
}

double sld_qfi(const QuantumState& rho, const Observable& h) {
  require_same_dim(rho.dim(), h.dim());
  const Spectrum& s = rho.spectrum();
  const Matrix hk = s.vectors.adjoint() * h.matrix() * s.vectors;
  double f = 0.0;
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
      const double sum = s.values(j) + s.values(k);
      if (sum <= 1e-12) continue;
      const double diff = s.values(j) - s.values(k);
      f += 2.0 * diff * diff / sum * std::norm(hk(j, k));
    }
  }
  return f;
}

double lindblad_coherence(const QuantumState& rho, const LindbladModel& model) {
  require_same_dim(rho.dim(), model.dim());
  const Matrix root = rho.sqrt();
  const Matrix image = model.apply(root);
  const double norm_sq = image.squaredNorm();
  const double overlap = std::norm((root * image).trace());
  return std::max(0.0, 0.5 * (norm_sq - overlap));
}

UncertaintyChain uncertainty_chain(const QuantumState& rho, const Observable& h, double slack) {
  UncertaintyChain c;
  c.variance = variance(rho, h);
  c.qfi_quarter = sld_qfi(rho, h) / 4.0;
  c.q = wy_coherence(rho, h);
  c.two_q = 2.0 * c.q;
  c.q_chain_holds = c.variance + slack >= c.qfi_quarter && c.qfi_quarter + slack >= c.q;
  c.two_q_chain_holds = c.variance + slack >= c.qfi_quarter && c.qfi_quarter + slack >= c.two_q;
  return c;
}

}  // namespace qsl
