#pragma once

#include "qsl/lindblad.hpp"
#include "qsl/operator_core.hpp"

namespace qsl {

/// Wigner-Yanase skew information Q(rho, H) = -1/2 Tr([sqrt(rho), H]^2).
double wy_coherence(const QuantumState& rho, const Observable& h);

/// -1/2 Tr([rho, H]^2), the measurable lower bound of wy_coherence.
double wy_lower_bound(const QuantumState& rho, const Observable& h);

/// Tr(sqrt(rho1) sqrt(rho2)), clamped to [0, 1].
double affinity(const QuantumState& rho1, const QuantumState& rho2);

/// Root fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), clamped to [0, 1].
double uhlmann_fidelity(const QuantumState& rho1, const QuantumState& rho2);

/// Tr(rho1 rho_t) / Tr(rho1^2).
double relative_purity(const QuantumState& rho1, const QuantumState& rho_t);

double variance(const QuantumState& rho, const Observable& h);

/// SLD quantum Fisher information 2 sum_jk (l_j - l_k)^2 / (l_j + l_k) |<j|H|k>|^2,
/// skipping pairs with l_j + l_k <= 1e-12.
double sld_qfi(const QuantumState& rho, const Observable& h);

/// Q(rho, L) with 2Q = Tr((L sqrt rho)(L sqrt rho)^dagger) - |Tr(sqrt rho L sqrt rho)|^2.
/// Units: time^-2. For a purely Hamiltonian generator this is wy_coherence / hbar^2.
double lindblad_coherence(const QuantumState& rho, const LindbladModel& model);

/// Both readings of the uncertainty chain: Var >= F_Q/4 >= Q and Var >= F_Q/4 >= 2Q.
struct UncertaintyChain {
  double variance = 0.0;
  double qfi_quarter = 0.0;
  double q = 0.0;
  double two_q = 0.0;
  bool q_chain_holds = false;
  bool two_q_chain_holds = false;
};

UncertaintyChain uncertainty_chain(const QuantumState& rho, const Observable& h, double slack = 1e-10);

}  // namespace qsl
