#include "qsl/qsl_bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qsl/coherence_metrics.hpp"

namespace qsl {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_dim(int a, int b, const char* what) {
  if (a != b) fail(ErrorKind::DimMismatch, std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

// angle / sqrt(speed_sq) with the identical-state and frozen-generator conventions.
double guarded_quotient(double angle, double speed_sq, const char* what) {
  if (angle <= kZeroAngle) return 0.0;
  if (speed_sq <= kFrozenSpeedSq) {
    if (angle > kAngleNoiseFloor)
      fail(ErrorKind::FrozenState, std::string(what) + ": generator cannot move the state (angle " +
                                       std::to_string(angle) + ")");
    return 0.0;
  }
  return angle / std::sqrt(speed_sq);
}

double commutator_norm_sq(const Matrix& a, const Matrix& b) { return commutator(a, b).squaredNorm(); }

}  // namespace

double bargmann_angle(const QuantumState& rho1, const QuantumState& rho2) {
  return clamped_acos(affinity(rho1, rho2));
}

double tl_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2) {
  require_same_dim(rho1.dim(), h.dim(), "tl_bound");
  const double q = wy_coherence(rho1, h);
  return h.hbar() / std::sqrt(2.0) * guarded_quotient(bargmann_angle(rho1, rho2), q, "tl_bound");
}

double tl_bound_time_avg(const QuantumState& rho1, const std::function<Observable(double)>& h_path,
                         const QuantumState& rho2, const TimeGrid& grid) {
  const std::vector<double> ts = grid.points();
  std::vector<double> root_q(ts.size());
  double hbar = 1.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Observable h = h_path(ts[k]);
    require_same_dim(rho1.dim(), h.dim(), "tl_bound_time_avg");
    if (k == 0) hbar = h.hbar();
    root_q[k] = std::sqrt(wy_coherence(rho1, h));
  }
  const double mean = simpson(root_q, grid.step()) / (grid.stop - grid.start);
  return hbar / std::sqrt(2.0) * guarded_quotient(bargmann_angle(rho1, rho2), mean * mean, "tl_bound_time_avg");
}

double alpha_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorKind::BadAlpha, "alpha must be positive, got " + std::to_string(alpha));
  require_same_dim(rho1.dim(), h.dim(), "alpha_bound");
  require_same_dim(rho1.dim(), rho2.dim(), "alpha_bound");
  const double tr_pow = real_trace(rho1.power(alpha));
  const Matrix half1 = rho1.power(0.5 * alpha);
  const Matrix half2 = rho2.power(0.5 * alpha);
  const double overlap = std::abs((half1 * half2).trace()) / tr_pow;
  const double angle = clamped_acos(overlap);
  // -Tr[X, H]^2 = ||[X, H]||_F^2 for Hermitian X, H.
  const double denom = commutator_norm_sq(half1, h.matrix());
  return h.hbar() * std::sqrt(tr_pow) * guarded_quotient(angle, denom, "alpha_bound");
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 25; k <= 400; k += 5) grid.push_back(k / 100.0);
  return grid;
}

AlphaMax alpha_bound_max(const QuantumState& rho1, const Observable& h, const QuantumState& rho2,
                         const std::vector<double>& alpha_grid) {
  if (alpha_grid.empty()) fail(ErrorKind::BadAlpha, "alpha grid is empty");
  AlphaMax best{alpha_grid.front(), alpha_bound(rho1, h, rho2, alpha_grid.front())};
  for (std::size_t k = 1; k < alpha_grid.size(); ++k) {
    const double v = alpha_bound(rho1, h, rho2, alpha_grid[k]);
    // Roundoff-level differences count as ties.
    if (v > best.value + 1e-12 * std::max(1.0, std::abs(best.value))) best = {alpha_grid[k], v};
  }
  return best;
}

double mt_fidelity_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2) {
  require_same_dim(rho1.dim(), h.dim(), "mt_fidelity_bound");
  const double angle = clamped_acos(uhlmann_fidelity(rho1, rho2));
  return h.hbar() * guarded_quotient(angle, variance(rho1, h), "mt_fidelity_bound");
}

double qfi_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2) {
  require_same_dim(rho1.dim(), h.dim(), "qfi_bound");
  const double angle = clamped_acos(uhlmann_fidelity(rho1, rho2));
  return 2.0 * h.hbar() * guarded_quotient(angle, sld_qfi(rho1, h), "qfi_bound");
}

namespace {

CampoBound campo_from(const QuantumState& rho1, const QuantumState& rho2, double d, double hbar) {
  require_same_dim(rho1.dim(), rho2.dim(), "campo_bound");
  const double purity = rho1.purity();
  const double angle = clamped_acos(real_trace(rho1.matrix() * rho2.matrix()) / purity);
  CampoBound out;
  out.n = angle * angle * purity;
  out.d = d;
  const double root_n_over_d = guarded_quotient(angle, d * d, "campo_bound") * std::sqrt(purity);
  out.intermediate = hbar * root_n_over_d;
  out.middle = 2.0 / kPi * out.intermediate;
  out.bound = 4.0 / (kPi * kPi) * std::sqrt(out.n) * out.intermediate;
  return out;
}

}  // namespace

CampoBound campo_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2) {
  require_same_dim(rho1.dim(), h.dim(), "campo_bound");
  return campo_from(rho1, rho2, std::sqrt(commutator_norm_sq(rho1.matrix(), h.matrix())), h.hbar());
}

CampoBound campo_bound_lindblad(const QuantumState& rho0, const LindbladModel& model, const QuantumState& rho_tau) {
  require_same_dim(rho0.dim(), model.dim(), "campo_bound_lindblad");
  const double d = model.hbar() * model.apply_adjoint(rho0.matrix()).norm();
  return campo_from(rho0, rho_tau, d, model.hbar());
}

double u_quantity(const QuantumState& rho1, const Observable& h, const QuantumState& rho2) {
  return tl_bound(rho1, h, rho2) * std::sqrt(wy_coherence(rho1, h));
}

InequalityCheck mixing_inequality_check(const QuantumState& rho1, const QuantumState& sigma1, double p,
                                        const Observable& h, double t, double slack) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::ValidationError, "mixing weight must lie in [0, 1]");
  require_same_dim(rho1.dim(), sigma1.dim(), "mixing_inequality_check");
  const QuantumState gamma1 = QuantumState::from_matrix(p * rho1.matrix() + (1.0 - p) * sigma1.matrix());
  const auto u_of = [&](const QuantumState& s) { return u_quantity(s, h, evolve_unitary(s, h, t)); };
  InequalityCheck out;
  out.lhs = u_of(gamma1);
  out.rhs = std::sqrt(p) * u_of(rho1) + std::sqrt(1.0 - p) * u_of(sigma1);
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

InequalityCheck elimination_inequality_check(const QuantumState& rho_ab, const Observable& h_a,
                                             const Observable& h_b, double t, double slack) {
  const int da = h_a.dim();
  const int db = h_b.dim();
  require_same_dim(rho_ab.dim(), da * db, "elimination_inequality_check");
  const Observable h_ab(kron(h_a.matrix(), identity(db)) + kron(identity(da), h_b.matrix()), h_a.hbar());
  const QuantumState sigma_ab = evolve_unitary(rho_ab, h_ab, t);
  const QuantumState rho_a = partial_trace(rho_ab, da, db, Subsystem::A);
  const QuantumState sigma_a = partial_trace(sigma_ab, da, db, Subsystem::A);
  InequalityCheck out;
  out.lhs = u_quantity(rho_a, h_a, sigma_a);
  out.rhs = u_quantity(rho_ab, h_ab, sigma_ab);
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

InequalityCheck acos_mixing_lemma(double x, double y, double p, double slack) {
  InequalityCheck out;
  out.lhs = clamped_acos(p * x + (1.0 - p) * y);
  out.rhs = std::sqrt(p) * clamped_acos(x) + std::sqrt(1.0 - p) * clamped_acos(y);
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

SystemEnvironmentBound system_environment_bound(const QuantumState& rho0_s, const QuantumState& gamma_e,
                                                const Observable& h_se, const QuantumState& rho_tau_s) {
  const int ds = rho0_s.dim();
  const int de = gamma_e.dim();
  require_same_dim(h_se.dim(), ds * de, "system_environment_bound");
  require_same_dim(rho0_s.dim(), rho_tau_s.dim(), "system_environment_bound");

  SystemEnvironmentBound out;
  out.two_q_joint = commutator_norm_sq(kron(rho0_s.sqrt(), gamma_e.sqrt()), h_se.matrix());
  out.angle = bargmann_angle(rho0_s, rho_tau_s);
  out.bound = h_se.hbar() * guarded_quotient(out.angle, out.two_q_joint, "system_environment_bound");

  const Matrix h_eff = partial_trace_matrix(h_se.matrix() * kron(identity(ds), gamma_e.matrix()), ds, de, Subsystem::A);
  out.two_q_effective = 2.0 * wy_coherence(rho0_s, Observable(h_eff, h_se.hbar()));
  out.effective_matches = std::abs(out.two_q_joint - out.two_q_effective) <= 1e-8 * std::max(1.0, out.two_q_joint);
  return out;
}

MarkovianBound markovian_bound(const QuantumState& rho0, const LindbladModel& model, double tau, int initial_nodes,
                               double rel_tol) {
  if (!(tau > 0.0)) fail(ErrorKind::BadGrid, "tau must be positive");
  require_same_dim(rho0.dim(), model.dim(), "markovian_bound");
  const Propagator prop(rho0, model);

  MarkovianBound out;
  out.angle = bargmann_angle(rho0, prop.at(tau));
  const auto sampler = [&](int nodes) {
    const std::vector<QuantumState> path = prop.on_grid(TimeGrid{0.0, tau, nodes});
    std::vector<double> speed(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) speed[k] = std::sqrt(2.0 * lindblad_coherence(path[k], model));
    return speed;
  };
  out.quadrature = simpson_adaptive(sampler, 0.0, tau, initial_nodes, rel_tol);
  out.mean_speed = out.quadrature.value / tau;
  out.bound = guarded_quotient(out.angle, out.mean_speed * out.mean_speed, "markovian_bound");
  return out;
}

bool BoundReport::all_valid(double slack) const {
  if (!actual_time) return false;
  const double limit = *actual_time + slack;
  return tl <= limit && tl_alpha2 <= limit && tl_alpha_max.value <= limit && mt_fidelity <= limit && qfi <= limit &&
         campo <= limit;
}

std::string digest_of(const std::vector<const Matrix*>& matrices) {
  Digest d;
  for (const Matrix* m : matrices) {
    d.add(static_cast<std::int64_t>(m->rows())).add(static_cast<std::int64_t>(m->cols()));
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j) d.add((*m)(i, j).real()).add((*m)(i, j).imag());
  }
  return d.hex();
}

BoundReport compute_bound_report(const QuantumState& rho1, const Observable& h, const QuantumState& rho2,
                                 std::optional<double> actual_time, const std::vector<double>& alpha_grid) {
  BoundReport r;
  r.tl = tl_bound(rho1, h, rho2);
  r.tl_alpha2 = alpha_bound(rho1, h, rho2, 2.0);
  r.tl_alpha_max = alpha_bound_max(rho1, h, rho2, alpha_grid);
  r.mt_fidelity = mt_fidelity_bound(rho1, h, rho2);
  r.qfi = qfi_bound(rho1, h, rho2);
  r.campo = campo_bound(rho1, h, rho2).bound;
  r.actual_time = actual_time;
  r.inputs_digest = digest_of({&rho1.matrix(), &h.matrix(), &rho2.matrix()});
  return r;
}

}  // namespace qsl
