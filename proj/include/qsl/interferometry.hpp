#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsl/operator_core.hpp"

namespace qsl {

/// Sampled estimate of value = 2P - 1 with binomial standard error.
struct ShotEstimate {
  double value = 0.0;
  std::int64_t shots = 0;
  double std_error = 0.0;
};

struct PreparedState {
  QuantumState sigma1;
  double alignment_residual = 0.0;
  int iterations = 0;
};

/// Acceptance probability of the SWAP test, (1 + Tr(s1 s2)) / 2.
double swap_test_probability(const QuantumState& sigma1, const QuantumState& sigma2);

/// Binomial draw of `shots` detector clicks at probability p, reported as 2 p_hat - 1.
ShotEstimate sample_probability(double p, std::int64_t shots, std::uint64_t seed);

ShotEstimate sample_swap_test(const QuantumState& sigma1, const QuantumState& sigma2, std::int64_t shots,
                              std::uint64_t seed);

/// Tr(rho^n) for n = 1..max_n (expectation of the n-copy cyclic shift).
std::vector<double> power_sums(const QuantumState& rho, int max_n);

/// Eigenvalues (descending) from Tr(rho^n), n = 1..d, via Newton's identities and the
/// roots of the characteristic polynomial. Roots within 1e-7 of zero are returned as 0.
/// Negative roots throw IllConditioned, as do non-real ones (imaginary part > 1e-6) unless
/// their real parts reproduce the moments to 1e-9.
std::vector<double> eigs_from_power_sums(const std::vector<double>& moments);

/// U diag(sqrt(l_i) / sum_j sqrt(l_j)) U^dagger, eigenvalues taken in the given order.
QuantumState prepare_sigma(const std::vector<double>& eigenvalues, const Matrix& u_tilde);

struct AlignmentOptions {
  /// Unset means exact expectation values.
  std::optional<std::int64_t> shots;
  std::uint64_t seed = 0;
  int max_iters = 2000;
  /// Known spectrum of rho1; recovered from exact power sums when empty.
  std::vector<double> eigenvalues;
};

/// Rotates sigma1 = U diag(...) U^dagger until Tr(rho1^k sigma1), k = 1..max(1, d-1), match the
/// values implied by the spectrum. Nelder-Mead over U = exp(iK), K Hermitian (d^2 parameters).
PreparedState basis_alignment_search(const QuantumState& rho1, const AlignmentOptions& options = {});

struct ProtocolEstimate {
  double tl = 0.0;
  double error_bar = 0.0;
  double q = 0.0;
  double q_error = 0.0;
  double affinity = 0.0;
  double affinity_error = 0.0;
  std::vector<double> eigenvalues;
  double alignment_residual = 0.0;
  int alignment_iterations = 0;
  std::int64_t shots = 0;  ///< 0 in exact mode
};

/// Moments -> eigenvalues -> alignment -> overlaps Tr(s1 s2) and -Tr[s1, H]^2 -> T_l, with
/// sigma2 obtained by evolving sigma1 for time t. Without `shots` every expectation is exact.
ProtocolEstimate estimate_tl_from_protocol(const QuantumState& rho1, const Observable& h, double t,
                                           std::optional<std::int64_t> shots, std::uint64_t seed);

}  // namespace qsl
