#include "qsl/dynamics.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace qsl {

QuantumState evolve_unitary(const QuantumState& rho0, const Observable& h, double t) {
  if (rho0.dim() != h.dim()) fail(ErrorKind::DimMismatch, "state and Hamiltonian dimensions differ");
  const Matrix u = unitary_of(h, t);
  return QuantumState::from_matrix(u * rho0.matrix() * u.adjoint());
}

BlochVector qubit_evolution_closed_form(const BlochVector& r, const Vector3& n_hat, double a, double hbar) {
  if (std::abs(n_hat.norm() - 1.0) > 1e-12) fail(ErrorKind::BadUnitVector, "|n| must be 1");
  const double phi = a / hbar;
  const Vector3& v = r.r;
  const Vector3 rotated = v * std::cos(2.0 * phi) - n_hat.cross(v) * std::sin(2.0 * phi) +
                          2.0 * n_hat * n_hat.dot(v) * std::pow(std::sin(phi), 2);
  BlochVector out;
  out.r = rotated;
  return out;
}

Vector3 paper_bloch_formula(const Vector3& r, const Vector3& n_hat, double a, double hbar) {
  if (std::abs(n_hat.norm() - 1.0) > 1e-12) fail(ErrorKind::BadUnitVector, "|n| must be 1");
  const double phi = a / hbar;
  return 2.0 * n_hat * n_hat.dot(r) * std::pow(std::sin(phi), 2) + r * std::cos(2.0 * phi);
}

Observable bloch_hamiltonian(const Vector3& n_hat, double omega, double alpha, double hbar) {
  if (std::abs(n_hat.norm() - 1.0) > 1e-12) fail(ErrorKind::BadUnitVector, "|n| must be 1");
  return Observable(omega * (pauli_dot(n_hat) + alpha * identity(2)), hbar, omega);
}

QuantumState validate_propagated(const Matrix& m) {
  if (hermiticity_defect(m) > 1e-8) fail(ErrorKind::InvalidStateProduced, "propagated matrix is not Hermitian");
  return QuantumState::from_matrix(0.5 * (m + m.adjoint()), 1e-8, ErrorKind::InvalidStateProduced);
}

Propagator::Propagator(QuantumState rho0, Generator generator)
    : rho0_(std::move(rho0)), generator_(std::move(generator)) {
  std::visit([&](const auto& g) {
    if (g.dim() != rho0_.dim()) fail(ErrorKind::DimMismatch, "state and generator dimensions differ");
  }, generator_);
  if (const auto* model = std::get_if<LindbladModel>(&generator_)) superop_ = build_superoperator(*model);
}

Matrix Propagator::apply_flow(const Matrix& x, double t) const {
  if (const auto* h = std::get_if<Observable>(&generator_)) {
    const Matrix u = unitary_of(*h, t);
    return u * x * u.adjoint();
  }
  const Matrix flow = (superop_ * Complex(t)).exp();
  return unvec(flow * vec(x), dim());
}

QuantumState Propagator::at(double t) const {
  if (t == 0.0) return rho0_;
  if (const auto* h = std::get_if<Observable>(&generator_)) return evolve_unitary(rho0_, *h, t);
  return validate_propagated(apply_flow(rho0_.matrix(), t));
}

std::vector<QuantumState> Propagator::on_grid(const TimeGrid& grid) const {
  const std::vector<double> times = grid.points();
  std::vector<QuantumState> out;
  out.reserve(times.size());
  if (std::holds_alternative<Observable>(generator_)) {
    for (double t : times) out.push_back(at(t));
    return out;
  }
  const Matrix step = (superop_ * Complex(grid.step())).exp();
  CVector v = vec(at(grid.start).matrix());
  out.push_back(validate_propagated(unvec(v, dim())));
  for (std::size_t i = 1; i < times.size(); ++i) {
    v = step * v;
    out.push_back(validate_propagated(unvec(v, dim())));
  }
  return out;
}

QuantumState evolve_lindblad(const QuantumState& rho0, const LindbladModel& model, double t) {
  return Propagator(rho0, model).at(t);
}

EvolutionPath evolve_path(const QuantumState& rho0, const Generator& generator, const TimeGrid& grid) {
  EvolutionPath path;
  path.times = grid.points();
  path.states = Propagator(rho0, generator).on_grid(grid);
  path.generator_tag = std::holds_alternative<Observable>(generator) ? GeneratorTag::Unitary : GeneratorTag::Lindblad;
  return path;
}

SqueezedVacuumParams SqueezedVacuumParams::simple_case(double lambda1) {
  SqueezedVacuumParams p;
  p.rate1 = 0.0;
  p.rate2 = -lambda1;
  p.rate3 = 0.0;
  return p;
}

LindbladModel squeezed_vacuum_model(const SqueezedVacuumParams& p) {
  const Matrix sm = sigma_minus();
  const Matrix sp = sigma_plus();
  std::vector<Matrix> ops{sm, sp, pauli_z() / std::sqrt(2.0)};
  Matrix c = Matrix::Zero(3, 3);
  c(0, 0) = 0.5 * p.rate1 * (1.0 - p.w_eq);
  c(1, 1) = 0.5 * p.rate1 * (1.0 + p.w_eq);
  c(0, 1) = -p.rate3;
  c(1, 0) = -p.rate3;
  c(2, 2) = p.rate2 - 0.5 * p.rate1;
  Observable h(0.5 * p.hbar * p.rabi * (sm + sp), p.hbar);
  return LindbladModel(std::move(h), std::move(ops), std::move(c));
}

double DampingBasis::biorthogonality_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs((left[i] * right[j]).trace() - Complex(i == j ? 1.0 : 0.0)));
  return worst;
}

double DampingBasis::eigen_defect(const LindbladModel& model) const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, (model.apply(right[i]) - eigenvalues[i] * right[i]).norm());
  return worst;
}

DampingBasis damping_basis(const SqueezedVacuumParams& p) {
  const double s = 1.0 / std::sqrt(2.0);
  const Matrix id = identity(2);
  const Matrix sm = sigma_minus();
  const Matrix sp = sigma_plus();
  const Matrix sz = pauli_z();
  DampingBasis b;
  b.left = {s * id, s * (sp + sm), s * (sp - sm), s * (-p.w_eq * id + sz)};
  b.right = {s * (id + p.w_eq * sz), s * (sp + sm), s * (sm - sp), s * sz};
  b.eigenvalues = {0.0, p.lambda1(), p.lambda2(), p.lambda3()};
  const LindbladModel model = squeezed_vacuum_model(p);
  if (b.biorthogonality_defect() > 1e-10) fail(ErrorKind::BasisMismatch, "left/right operators not biorthogonal");
  if (b.eigen_defect(model) > 1e-10)
    fail(ErrorKind::BasisMismatch, "damping basis does not diagonalize the generator (driven model?)");
  return b;
}

QuantumState damping_basis_evolution(const QuantumState& rho0, const DampingBasis& basis, double t) {
  if (rho0.dim() != 2) fail(ErrorKind::DimMismatch, "damping basis is defined for a qubit");
  if (basis.biorthogonality_defect() > 1e-10) fail(ErrorKind::BasisMismatch, "left/right operators not biorthogonal");
  Matrix out = Matrix::Zero(2, 2);
  for (int i = 0; i < 4; ++i)
    out += (basis.left[i] * rho0.matrix()).trace() * std::exp(basis.eigenvalues[i] * t) * basis.right[i];
  return validate_propagated(out);
}

namespace {
struct BlochMixedness {
  double norm_sq;
  double l_plus;
  double l_minus;
};

BlochMixedness mixedness(const BlochVector& r) {
  const double norm_sq = r.r.squaredNorm();
  const double root_m = std::sqrt(std::max(0.0, 1.0 - norm_sq));
  return {norm_sq, 1.0 + root_m, 1.0 - root_m};
}
}  // namespace

double affinity_closed_form_markovian(const BlochVector& r, const SqueezedVacuumParams& p, double t) {
  const auto [norm_sq, lp, lm] = mixedness(r);
  const double big1 = std::exp(p.lambda1() * t);
  const double big2 = std::exp(p.lambda2() * t);
  const double big3 = std::exp(p.lambda3() * t);
  const double r1 = r.r(0), r2 = r.r(1), r3 = r.r(2);
  const double weighted = norm_sq > 0.0
                              ? lm / norm_sq * (r1 * r1 * big1 + r2 * r2 * big2 + big3 * r3 * r3)
                              : 0.0;
  return 0.5 * (lp - r3 * p.w_eq * (big3 - 1.0) + weighted);
}

double sqrt_propagation_affinity(const QuantumState& rho0, const LindbladModel& model, double t) {
  const Matrix root = rho0.sqrt();
  const Matrix flowed = Propagator(rho0, model).apply_flow(root, t);
  return real_trace(root * flowed);
}

double markovian_two_q_closed_form(const BlochVector& r, const SqueezedVacuumParams& p, double t) {
  const auto [norm_sq, lp, lm] = mixedness(r);
  if (norm_sq == 0.0) return 0.0;
  const double norm = std::sqrt(norm_sq);
  const double l1 = p.lambda1(), l2 = p.lambda2(), l3 = p.lambda3();
  const double big1 = std::exp(l1 * t), big2 = std::exp(l2 * t), big3 = std::exp(l3 * t);
  const double r1 = r.r(0), r2 = r.r(1), r3 = r.r(2);
  const double w = p.w_eq;
  const double first =
      (lm * (r1 * r1 * l1 * l1 * big1 * big1 + r2 * r2 * l2 * l2 * big2 * big2) +
       std::pow(std::sqrt(lm) * r3 - w * norm * std::sqrt(lp), 2) * l3 * l3 * big3 * big3) /
      (2.0 * norm_sq);
  const double inner = lm / norm_sq * (l1 * r1 * r1 * big1 * big1 + l2 * r2 * r2 * big2 * big2) +
                       l3 * (std::pow(r3 * big3 / norm * std::sqrt(lm) + std::sqrt(lp) * w * (1.0 - big3), 2) -
                             (r3 * big3 * w + lp * w * w * (1.0 - big3)));
  return first - 0.25 * inner * inner;
}

double markovian_denominator_closed_form(double lambda1, double tau) {
  const double big = std::exp(lambda1 * tau);
  const double radicand = 0.25 - 0.5 * big * std::sinh(lambda1 * tau);
  if (radicand < 0.0 || tau <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double pi = std::acos(-1.0);
  return std::abs((big * std::sqrt(radicand) + std::asin(big / std::sqrt(2.0)) - (0.5 + 0.75 * pi)) / (2.0 * tau));
}

double first_passage_time(const QuantumState& rho0, const Generator& generator, const QuantumState& target,
                          double tol, double t_max) {
  if (!(tol > 0.0)) fail(ErrorKind::ValidationError, "tolerance must be positive");
  if (!(t_max >= 0.0)) fail(ErrorKind::ValidationError, "t_max must be non-negative");
  if (target.dim() != rho0.dim()) fail(ErrorKind::DimMismatch, "target dimension differs");
  const Propagator prop(rho0, generator);
  auto distance = [&](double t) { return frobenius_distance(prop.apply_flow(rho0.matrix(), t), target.matrix()); };

  if (distance(0.0) <= tol) return 0.0;
  if (t_max == 0.0) fail(ErrorKind::NotReached, "target not reached");

  // First t in (lo, hi] with distance <= tol, given distance(lo) > tol >= distance(hi).
  auto first_crossing = [&](double lo, double hi) {
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (distance(mid) <= tol ? hi : lo) = mid;
    }
    return hi;
  };
  auto minimize = [&](double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = distance(x1), f2 = distance(x2);
    while (hi - lo > 1e-13) {
      if (f1 <= f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - g * (hi - lo); f1 = distance(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + g * (hi - lo); f2 = distance(x2);
      }
    }
    return f1 <= f2 ? x1 : x2;
  };

  constexpr int kNodes = 1000;
  std::vector<double> ts(kNodes), ds(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    ts[i] = t_max * i / (kNodes - 1);
    ds[i] = distance(ts[i]);
  }
  for (int i = 1; i < kNodes; ++i) {
    if (ds[i] <= tol) return first_crossing(ts[i - 1], ts[i]);
    const bool local_min = ds[i] <= ds[i - 1] && (i == kNodes - 1 || ds[i] <= ds[i + 1]);
    if (!local_min) continue;
    const double hi = i == kNodes - 1 ? ts[i] : ts[i + 1];
    const double t_min = minimize(ts[i - 1], hi);
    if (distance(t_min) <= tol) return first_crossing(ts[i - 1], t_min);
  }
  fail(ErrorKind::NotReached, "target not within tolerance on [0, " + std::to_string(t_max) + "]");
}

SqrtEvolutionReport sqrt_evolution_diagnostic(const QuantumState& rho0, const LindbladModel& model,
                                              const std::vector<double>& times, double fd_step) {
  const Propagator prop(rho0, model);
  auto root_at = [&](double t) { return prop.at(t).sqrt(); };
  SqrtEvolutionReport report;
  report.deviations.reserve(times.size());
  for (double t : times) {
    Matrix derivative;
    if (t - fd_step >= 0.0) {
      derivative = (root_at(t + fd_step) - root_at(t - fd_step)) / (2.0 * fd_step);
    } else {
      derivative = (-3.0 * root_at(t) + 4.0 * root_at(t + fd_step) - root_at(t + 2.0 * fd_step)) / (2.0 * fd_step);
    }
    const double dev = (derivative - model.apply(root_at(t))).norm();
    report.deviations.push_back(dev);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.at_time = t;
    }
  }
  return report;
}

}  // namespace qsl
