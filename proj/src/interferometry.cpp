#include "qsl/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "qsl/dynamics.hpp"
#include "qsl/numerics.hpp"
#include "qsl/qsl_bounds.hpp"

namespace qsl {

double swap_test_probability(const QuantumState& sigma1, const QuantumState& sigma2) {
  if (sigma1.dim() != sigma2.dim()) fail(ErrorKind::DimMismatch, "SWAP test needs equal dimensions");
  return 0.5 * (1.0 + real_trace(sigma1.matrix() * sigma2.matrix()));
}

ShotEstimate sample_probability(double p, std::int64_t shots, std::uint64_t seed) {
  if (shots <= 0) fail(ErrorKind::ZeroShots, "shot count must be positive");
  p = std::clamp(p, 0.0, 1.0);
  std::mt19937_64 gen(seed);
  std::binomial_distribution<std::int64_t> clicks(shots, p);
  const double p_hat = static_cast<double>(clicks(gen)) / static_cast<double>(shots);
  ShotEstimate est;
  est.value = 2.0 * p_hat - 1.0;
  est.shots = shots;
  est.std_error = 2.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(shots));
  return est;
}

ShotEstimate sample_swap_test(const QuantumState& sigma1, const QuantumState& sigma2, std::int64_t shots,
                              std::uint64_t seed) {
  return sample_probability(swap_test_probability(sigma1, sigma2), shots, seed);
}

std::vector<double> power_sums(const QuantumState& rho, int max_n) {
  if (max_n < 1 || max_n > rho.dim())
    fail(ErrorKind::BadN, "moment order " + std::to_string(max_n) + " not in [1, " + std::to_string(rho.dim()) + "]");
  std::vector<double> out(max_n);
  out[0] = 1.0;
  Matrix p = rho.matrix();
  for (int n = 2; n <= max_n; ++n) {
    p = p * rho.matrix();
    out[n - 1] = real_trace(p);
  }
  return out;
}

constexpr double kRootSnap = 1e-7;

std::vector<double> eigs_from_power_sums(const std::vector<double>& moments) {
  const int d = static_cast<int>(moments.size());
  if (d < 1) fail(ErrorKind::BadN, "no moments given");
  if (std::abs(moments[0] - 1.0) > 1e-9) fail(ErrorKind::ValidationError, "first moment must be 1");

  // Newton's identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
  std::vector<double> e(d + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += ((i % 2 == 1) ? 1.0 : -1.0) * e[k - i] * moments[i - 1];
    e[k] = acc / k;
  }
  // x^d - e1 x^{d-1} + e2 x^{d-2} - ... ; companion matrix with last column -a_j.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int j = 0; j < d; ++j) {
    const int k = d - j;
    companion(j, d - 1) = -(((k % 2 == 0) ? 1.0 : -1.0) * e[k]);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::IllConditioned, "characteristic polynomial roots failed");

  std::vector<double> roots(d);
  Complex worst(0.0, 0.0);
  for (int i = 0; i < d; ++i) {
    // A k-fold root moves by eps^(1/k) under roundoff, so a repeated zero root lands near
    // +-1e-8 even from exact moments. Roots that small are read as zero.
    const Complex z = solver.eigenvalues()(i);
    if (std::abs(z) <= kRootSnap) {
      roots[i] = 0.0;
      continue;
    }
    if (std::abs(z.imag()) > std::abs(worst.imag())) worst = z;
    if (z.real() < 0.0) fail(ErrorKind::IllConditioned, "negative eigenvalue " + std::to_string(z.real()));
    roots[i] = z.real();
  }
  // Degenerate spectra split into small complex clusters for the same reason. Keep the real
  // parts only when they still reproduce the moments.
  if (std::abs(worst.imag()) > 1e-6) {
    bool consistent = std::abs(worst.imag()) <= 1e-3;
    for (int n = 1; n <= d && consistent; ++n) {
      double p = 0.0;
      for (double r : roots) p += std::pow(r, n);
      consistent = std::abs(p - moments[n - 1]) <= 1e-9;
    }
    if (!consistent)
      fail(ErrorKind::IllConditioned,
           "non-real root " + std::to_string(worst.real()) + " + " + std::to_string(worst.imag()) + "i");
    // The cluster is one repeated eigenvalue; its mean preserves the trace.
    const double reach = 10.0 * std::abs(worst.imag());
    double sum = 0.0;
    int count = 0;
    for (double r : roots)
      if (std::abs(r - worst.real()) <= reach) sum += r, ++count;
    for (double& r : roots)
      if (std::abs(r - worst.real()) <= reach) r = sum / count;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

QuantumState prepare_sigma(const std::vector<double>& eigenvalues, const Matrix& u_tilde) {
  const int d = static_cast<int>(eigenvalues.size());
  if (u_tilde.rows() != d || u_tilde.cols() != d) fail(ErrorKind::DimMismatch, "unitary does not match spectrum");
  RVector s(d);
  for (int i = 0; i < d; ++i) s(i) = std::sqrt(std::max(eigenvalues[i], 0.0));
  const double norm = s.sum();
  if (!(norm > 0.0)) fail(ErrorKind::InvalidState, "spectrum sums to zero");
  s /= norm;
  Matrix scaled = u_tilde;
  for (int i = 0; i < d; ++i) scaled.col(i) *= s(i);
  return QuantumState::from_matrix(scaled * u_tilde.adjoint());
}

namespace {

using Objective = std::function<double(const RVector&)>;

struct SimplexResult {
  RVector x;
  double f = 0.0;
  int iterations = 0;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
SimplexResult nelder_mead(const Objective& f, const RVector& x0, double step, int max_iters, double ftol) {
  const int n = static_cast<int>(x0.size());
  std::vector<RVector> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += step;
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<int> order(n + 1);
  int it = 0;
  for (; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];
    if (vals[best] <= ftol) break;
    double diameter = 0.0;
    for (int i = 0; i <= n; ++i) diameter = std::max(diameter, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    if (diameter < 1e-11 && vals[worst] - vals[best] <= 1e-16) break;

    RVector centroid = RVector::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    const RVector xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    if (fr < vals[best]) {
      const RVector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const RVector xc = outside ? RVector(centroid + 0.5 * (xr - centroid)) : RVector(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], it};
}

// exp(iK) with K Hermitian: diagonal entries then (re, im) of the upper triangle.
Matrix unitary_from_params(const RVector& p, int d) {
  Matrix k = Matrix::Zero(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i) k(i, i) = p(idx++);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      k(i, j) = Complex(p(idx), p(idx + 1));
      k(j, i) = std::conj(k(i, j));
      idx += 2;
    }
  return unitary_of(Observable(k), 1.0);
}

std::vector<double> normalized_roots(const std::vector<double>& eigenvalues) {
  std::vector<double> s(eigenvalues.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) norm += s[i] = std::sqrt(std::max(eigenvalues[i], 0.0));
  for (double& x : s) x /= norm;
  return s;
}

}  // namespace

PreparedState basis_alignment_search(const QuantumState& rho1, const AlignmentOptions& options) {
  const int d = rho1.dim();
  const std::vector<double> lambda =
      options.eigenvalues.empty() ? eigs_from_power_sums(power_sums(rho1, d)) : options.eigenvalues;
  if (static_cast<int>(lambda.size()) != d) fail(ErrorKind::DimMismatch, "spectrum size differs from state");

  if (lambda.front() - lambda.back() < 1e-8)
    return {QuantumState::maximally_mixed(d), 0.0, 0};

  const std::vector<double> s = normalized_roots(lambda);
  const int orders = std::max(1, d - 1);
  std::vector<Matrix> rho_powers(orders);
  std::vector<double> targets(orders);
  rho_powers[0] = rho1.matrix();
  for (int k = 0; k < orders; ++k) {
    if (k > 0) rho_powers[k] = rho_powers[k - 1] * rho1.matrix();
    double t = 0.0;
    for (int i = 0; i < d; ++i) t += std::pow(lambda[i], k + 1) * s[i];
    targets[k] = t;
  }

  // Common random numbers: each overlap keeps its seed across evaluations so the
  // sampled objective is a deterministic function of the parameters.
  const auto measure = [&](const QuantumState& sigma, int k) {
    const double exact = real_trace(rho_powers[k] * sigma.matrix());
    if (!options.shots) return exact;
    return sample_probability(0.5 * (1.0 + exact), *options.shots, derive_seed(options.seed, k)).value;
  };
  const auto residuals = [&](const RVector& p) {
    const QuantumState sigma = prepare_sigma(lambda, unitary_from_params(p, d));
    std::vector<double> r(orders);
    for (int k = 0; k < orders; ++k) r[k] = std::abs(measure(sigma, k) - targets[k]);
    return r;
  };
  const Objective objective = [&](const RVector& p) {
    const std::vector<double> r = residuals(p);
    return std::accumulate(r.begin(), r.end(), 0.0);
  };

  double tolerance = 1e-6;
  if (options.shots) {
    const double p = 0.5 * (1.0 + targets[0]);
    tolerance = 4.0 * std::max(2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(*options.shots)),
                               1.0 / static_cast<double>(*options.shots));
  }
  const double ftol = options.shots ? 0.0 : 1e-15;

  RVector x = RVector::Zero(d * d);
  double fx = objective(x);
  int iterations = 0;
  double step = 0.5;
  while (fx > ftol && iterations < options.max_iters) {
    const SimplexResult r = nelder_mead(objective, x, step, options.max_iters - iterations, ftol);
    iterations += r.iterations;
    const bool improved = r.f < fx;
    if (improved) {
      x = r.x;
      fx = r.f;
    }
    if (!improved && step < 1e-6) break;
    step = improved ? std::max(step * 0.1, 1e-7) : step * 0.1;
    if (r.iterations == 0) break;
  }

  const QuantumState sigma = prepare_sigma(lambda, unitary_from_params(x, d));
  const std::vector<double> r = residuals(x);
  const double residual = *std::max_element(r.begin(), r.end());
  if (residual > tolerance)
    fail(ErrorKind::NoConvergence, "alignment residual " + std::to_string(residual) + " after " +
                                       std::to_string(iterations) + " simplex steps");
  return {sigma, residual, iterations};
}

namespace {

struct ProtocolInputs {
  std::vector<double> moments;
  double commutator = 0.0;  // -Tr[sigma1, H]^2
  double overlap = 0.0;     // Tr(sigma1 sigma2)
};

struct ProtocolValues {
  double scale = 0.0;  // (Tr sqrt rho1)^2
  double q = 0.0;
  double affinity = 0.0;
  double tl = 0.0;
};

ProtocolValues evaluate(const ProtocolInputs& in, double hbar) {
  const std::vector<double> lambda = eigs_from_power_sums(in.moments);
  double root_sum = 0.0;
  for (double l : lambda) root_sum += std::sqrt(l);
  ProtocolValues v;
  v.scale = root_sum * root_sum;
  v.q = 0.5 * v.scale * std::max(in.commutator, 0.0);
  v.affinity = std::clamp(v.scale * in.overlap, 0.0, 1.0);
  const double angle = clamped_acos(v.affinity);
  if (angle <= kZeroAngle || (v.q <= kFrozenSpeedSq && angle <= kAngleNoiseFloor)) {
    v.tl = 0.0;
  } else if (v.q <= kFrozenSpeedSq) {
    fail(ErrorKind::FrozenState, "measured coherence vanishes while the overlap angle is " + std::to_string(angle));
  } else {
    v.tl = hbar / std::sqrt(2.0) * angle / std::sqrt(v.q);
  }
  return v;
}

}  // namespace

ProtocolEstimate estimate_tl_from_protocol(const QuantumState& rho1, const Observable& h, double t,
                                           std::optional<std::int64_t> shots, std::uint64_t seed) {
  const int d = rho1.dim();
  if (h.dim() != d) fail(ErrorKind::DimMismatch, "generator and state dimensions differ");
  if (shots && *shots <= 0) fail(ErrorKind::ZeroShots, "shot count must be positive");

  ProtocolInputs in;
  std::vector<double> moment_errors(d, 0.0);
  in.moments = power_sums(rho1, d);
  if (shots) {
    for (int n = 2; n <= d; ++n) {
      const ShotEstimate m = sample_probability(0.5 * (1.0 + in.moments[n - 1]), *shots, derive_seed(seed, 100 + n));
      in.moments[n - 1] = m.value;
      moment_errors[n - 1] = m.std_error;
    }
  }

  AlignmentOptions align;
  align.shots = shots;
  align.seed = derive_seed(seed, 1);
  align.eigenvalues = eigs_from_power_sums(in.moments);
  const PreparedState prepared = basis_alignment_search(rho1, align);
  const QuantumState sigma2 = evolve_unitary(prepared.sigma1, h, t);

  const double exact_comm = commutator(prepared.sigma1.matrix(), h.matrix()).squaredNorm();
  const double exact_overlap = real_trace(prepared.sigma1.matrix() * sigma2.matrix());
  double comm_error = 0.0;
  double overlap_error = 0.0;
  in.commutator = exact_comm;
  in.overlap = exact_overlap;
  if (shots) {
    // -Tr[s, H]^2 <= (spread of H)^2 maps onto a click probability in [1/2, 1].
    const RVector& ev = h.spectrum().values;
    const double range = std::pow(ev(0) - ev(ev.size() - 1), 2);
    if (range > 0.0) {
      const ShotEstimate c = sample_probability(0.5 * (1.0 + exact_comm / range), *shots, derive_seed(seed, 2));
      in.commutator = range * c.value;
      comm_error = range * c.std_error;
    }
    const ShotEstimate o = sample_probability(0.5 * (1.0 + exact_overlap), *shots, derive_seed(seed, 3));
    in.overlap = o.value;
    overlap_error = o.std_error;
  }

  const ProtocolValues v = evaluate(in, h.hbar());
  ProtocolEstimate est;
  est.tl = v.tl;
  est.q = v.q;
  est.affinity = v.affinity;
  est.eigenvalues = align.eigenvalues;
  est.alignment_residual = prepared.alignment_residual;
  est.alignment_iterations = prepared.iterations;
  est.shots = shots.value_or(0);
  if (!shots) return est;

  // First-order propagation; moment derivatives by central differences.
  est.q_error = 0.5 * v.scale * comm_error;
  est.affinity_error = v.scale * overlap_error;
  double var = 0.0;
  if (v.tl > 0.0) {
    const double dt_dq = -0.5 * v.tl / v.q;
    const double sin_angle = std::sqrt(std::max(1.0 - v.affinity * v.affinity, 1e-300));
    const double dt_da = -h.hbar() / std::sqrt(2.0) / (sin_angle * std::sqrt(v.q));
    var += std::pow(dt_dq * est.q_error, 2) + std::pow(dt_da * est.affinity_error, 2);
    for (int n = 2; n <= d; ++n) {
      const double step = 1e-6;
      ProtocolInputs up = in;
      ProtocolInputs down = in;
      up.moments[n - 1] += step;
      down.moments[n - 1] -= step;
      const double slope = (evaluate(up, h.hbar()).tl - evaluate(down, h.hbar()).tl) / (2.0 * step);
      var += std::pow(slope * moment_errors[n - 1], 2);
    }
  }
  est.error_bar = std::sqrt(var);
  return est;
}

}  // namespace qsl
