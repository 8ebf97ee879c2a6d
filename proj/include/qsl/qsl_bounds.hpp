#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/lindblad.hpp"
#include "qsl/numerics.hpp"
#include "qsl/operator_core.hpp"

namespace qsl {

/// Angle at or below which two states count as identical.
inline constexpr double kZeroAngle = 1e-12;
/// acos of an affinity carrying ~1e-16 roundoff is ~1e-8; angles up to this floor are
/// treated as identical when the generator cannot move the state.
inline constexpr double kAngleNoiseFloor = 1e-6;
/// Squared speed at or below which a generator is considered frozen.
inline constexpr double kFrozenSpeedSq = 1e-14;

/// acos(A(rho1, rho2)), half the Bargmann angle.
double bargmann_angle(const QuantumState& rho1, const QuantumState& rho2);

/// (hbar / sqrt 2) acos A(rho1, rho2) / sqrt Q(rho1, H).
double tl_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2);

/// tl_bound with sqrt Q replaced by its time average over `grid` (Simpson, odd node count).
double tl_bound_time_avg(const QuantumState& rho1, const std::function<Observable(double)>& h_path,
                         const QuantumState& rho2, const TimeGrid& grid);

/// hbar sqrt(Tr rho1^a) acos|Tr(rho1^{a/2} rho2^{a/2}) / Tr rho1^a| / sqrt(-Tr[rho1^{a/2}, H]^2).
double alpha_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2, double alpha);

struct AlphaMax {
  double alpha = 0.0;
  double value = 0.0;
};

/// 0.25, 0.30, ..., 4.00
std::vector<double> default_alpha_grid();

/// Max over the grid; ties resolve to the smaller alpha.
AlphaMax alpha_bound_max(const QuantumState& rho1, const Observable& h, const QuantumState& rho2,
                         const std::vector<double>& alpha_grid = default_alpha_grid());

/// hbar acos F / DeltaH.
double mt_fidelity_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2);

/// 2 hbar acos F / sqrt(F_Q); equals mt_fidelity_bound for pure states.
double qfi_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2);

struct CampoBound {
  double bound = 0.0;          ///< 4 hbar N / (pi^2 D)
  double intermediate = 0.0;   ///< hbar sqrt(N) / D
  double middle = 0.0;         ///< 2 hbar sqrt(N) / (pi D)
  double n = 0.0;
  double d = 0.0;
};

/// Relative-purity bound for unitary evolution with N = acos(Tr(rho1 rho2)/Tr rho1^2)^2 Tr rho1^2
/// and D = sqrt(-Tr[rho1, H]^2).
CampoBound campo_bound(const QuantumState& rho1, const Observable& h, const QuantumState& rho2);

/// Same bound for a Lindblad generator, with D = hbar ||L^dagger rho0||_F (reduces to the unitary D).
CampoBound campo_bound_lindblad(const QuantumState& rho0, const LindbladModel& model, const QuantumState& rho_tau);

/// tl_bound * sqrt(wy_coherence); collapses to (hbar / sqrt 2) acos A.
double u_quantity(const QuantumState& rho1, const Observable& h, const QuantumState& rho2);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// U(gamma1, gamma2) <= sqrt(p) U(rho1, rho2) + sqrt(1 - p) U(sigma1, sigma2) after evolving
/// all three initial states for time t.
InequalityCheck mixing_inequality_check(const QuantumState& rho1, const QuantumState& sigma1, double p,
                                        const Observable& h, double t, double slack = 1e-9);

/// U^{H_a}(rho_a, sigma_a) <= U^{H_ab}(rho_ab, sigma_ab) with H_ab = H_a x I + I x H_b.
InequalityCheck elimination_inequality_check(const QuantumState& rho_ab, const Observable& h_a,
                                             const Observable& h_b, double t, double slack = 1e-9);

/// acos(p x + (1 - p) y) <= sqrt(p) acos x + sqrt(1 - p) acos y.
InequalityCheck acos_mixing_lemma(double x, double y, double p, double slack = 1e-12);

struct SystemEnvironmentBound {
  double bound = 0.0;
  double angle = 0.0;
  double two_q_joint = 0.0;      ///< -Tr[sqrt(rho0) x sqrt(gamma), H_SE]^2
  double two_q_effective = 0.0;  ///< 2 Q(rho0, Tr_E(H_SE (I x gamma)))
  bool effective_matches = false;
};

SystemEnvironmentBound system_environment_bound(const QuantumState& rho0_s, const QuantumState& gamma_e,
                                                const Observable& h_se, const QuantumState& rho_tau_s);

struct MarkovianBound {
  double bound = 0.0;
  double angle = 0.0;
  double mean_speed = 0.0;  ///< time average of sqrt(2 Q(rho_t, L))
  QuadratureResult quadrature;
};

/// acos A(rho0, rho_tau) / mean sqrt(2 Q(rho_t, L)) with rho_t propagated and the positive
/// square root taken of each propagated state.
MarkovianBound markovian_bound(const QuantumState& rho0, const LindbladModel& model, double tau,
                               int initial_nodes = 201, double rel_tol = 1e-6);

struct BoundReport {
  double tl = 0.0;
  double tl_alpha2 = 0.0;
  AlphaMax tl_alpha_max;
  double mt_fidelity = 0.0;
  double qfi = 0.0;
  double campo = 0.0;
  std::optional<double> actual_time;
  std::string inputs_digest;

  /// Every bound <= actual_time + slack (false when actual_time is unset).
  bool all_valid(double slack = 1e-8) const;
};

BoundReport compute_bound_report(const QuantumState& rho1, const Observable& h, const QuantumState& rho2,
                                 std::optional<double> actual_time = std::nullopt,
                                 const std::vector<double>& alpha_grid = default_alpha_grid());

std::string digest_of(const std::vector<const Matrix*>& matrices);

}  // namespace qsl
