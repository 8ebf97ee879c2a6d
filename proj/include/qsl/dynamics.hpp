#pragma once

#include <array>
#include <variant>
#include <vector>

#include "qsl/lindblad.hpp"
#include "qsl/numerics.hpp"
#include "qsl/operator_core.hpp"

namespace qsl {

using Generator = std::variant<Observable, LindbladModel>;

QuantumState evolve_unitary(const QuantumState& rho0, const Observable& h, double t);

/// Bloch vector after U = exp(i a (n.sigma + alpha I) / hbar), i.e. rotation of r about n by
/// -2a/hbar. The alpha I phase drops out of the conjugation.
BlochVector qubit_evolution_closed_form(const BlochVector& r, const Vector3& n_hat, double a, double hbar = 1.0);

/// The two-term expression r'_i = 2 n_i (n.r) sin^2(a/hbar) + r_i cos(2a/hbar) without the
/// n x r component. It agrees with the full rotation on r.r' only.
Vector3 paper_bloch_formula(const Vector3& r, const Vector3& n_hat, double a, double hbar = 1.0);

/// H = omega (n.sigma + alpha I).
Observable bloch_hamiltonian(const Vector3& n_hat, double omega = 1.0, double alpha = 0.0, double hbar = 1.0);

/// Propagates a fixed initial state under a fixed generator. For Lindblad generators the
/// superoperator is built once; exp(tS) is evaluated per call.
class Propagator {
 public:
  Propagator(QuantumState rho0, Generator generator);

  QuantumState at(double t) const;
  /// States on a uniform grid; Lindblad paths step with a single exp(hS).
  std::vector<QuantumState> on_grid(const TimeGrid& grid) const;
  /// exp(t * generator) applied to an arbitrary operator, without validation.
  Matrix apply_flow(const Matrix& x, double t) const;

  const QuantumState& initial() const { return rho0_; }
  const Generator& generator() const { return generator_; }
  int dim() const { return rho0_.dim(); }

 private:
  QuantumState rho0_;
  Generator generator_;
  Matrix superop_;
};

/// exp(tS) vec(rho0), re-Hermitized; throws InvalidStateProduced for eigenvalues below -1e-8
/// or a Hermiticity defect above 1e-8.
QuantumState evolve_lindblad(const QuantumState& rho0, const LindbladModel& model, double t);

/// Validates a propagated matrix and turns it into a state.
QuantumState validate_propagated(const Matrix& m);

enum class GeneratorTag { Unitary, Lindblad };

struct EvolutionPath {
  std::vector<double> times;
  std::vector<QuantumState> states;
  GeneratorTag generator_tag = GeneratorTag::Unitary;
};

EvolutionPath evolve_path(const QuantumState& rho0, const Generator& generator, const TimeGrid& grid);

/// Squeezed-vacuum two-level model with rates r1 = 1/T1, r2 = 1/T2, r3 = 1/T3.
struct SqueezedVacuumParams {
  double rate1 = 0.0;
  double rate2 = 0.0;
  double rate3 = 0.0;
  double w_eq = 0.0;
  double rabi = 0.0;
  double hbar = 1.0;

  double lambda1() const { return -(rate2 + rate3); }
  double lambda2() const { return -(rate2 - rate3); }
  double lambda3() const { return -rate1; }
  /// Rates with lambda1 given, lambda3 = 0 and no u/v asymmetry (pure dephasing).
  static SqueezedVacuumParams simple_case(double lambda1);
};

/// Jump operators A1 = sigma (lowering), A2 = sigma^dagger, A3 = sigma_z / sqrt 2 with the
/// c_ij matrix of the squeezed-vacuum channel and H = hbar Omega / 2 (sigma + sigma^dagger).
LindbladModel squeezed_vacuum_model(const SqueezedVacuumParams& p);

struct DampingBasis {
  std::array<Matrix, 4> left;
  std::array<Matrix, 4> right;
  std::array<double, 4> eigenvalues{};

  /// max |Tr(L_i R_j) - delta_ij|
  double biorthogonality_defect() const;
  /// max_i || L R_i - lambda_i R_i ||_F
  double eigen_defect(const LindbladModel& model) const;
};

/// Damping basis of the undriven squeezed-vacuum model. Throws BasisMismatch if the model
/// built from `p` does not satisfy the eigen-relations (e.g. with a Rabi drive).
DampingBasis damping_basis(const SqueezedVacuumParams& p);

/// rho_t = sum_i Tr(L_i rho0) exp(lambda_i t) R_i.
QuantumState damping_basis_evolution(const QuantumState& rho0, const DampingBasis& basis, double t);

/// The l+/l- closed-form affinity for the squeezed-vacuum model, as printed. It equals
/// Tr(sqrt(rho0) exp(tL)[sqrt(rho0)]), not Tr(sqrt(rho0) sqrt(rho_t)).
double affinity_closed_form_markovian(const BlochVector& r, const SqueezedVacuumParams& p, double t);

/// Tr(sqrt(rho0) exp(tL)[sqrt(rho0)]): the overlap obtained by propagating sqrt(rho0) linearly.
double sqrt_propagation_affinity(const QuantumState& rho0, const LindbladModel& model, double t);

/// Closed-form 2Q(rho_t, L) for the squeezed-vacuum model, transcribed as printed.
double markovian_two_q_closed_form(const BlochVector& r, const SqueezedVacuumParams& p, double t);

/// Closed-form time-averaged sqrt(2Q) printed for the simple case (r = (1,0,0), lambda3 = 0).
/// Returns NaN where the printed square root has a negative argument.
double markovian_denominator_closed_form(double lambda1, double tau);

/// Smallest t in [0, t_max] with ||rho(t) - target||_F <= tol: 1000-node scan, then
/// golden-section on distance minima and bisection of the first tol crossing.
double first_passage_time(const QuantumState& rho0, const Generator& generator, const QuantumState& target,
                          double tol, double t_max);

struct SqrtEvolutionReport {
  double max_deviation = 0.0;
  double at_time = 0.0;
  std::vector<double> deviations;
};

/// Compares d/dt sqrt(rho_t) (central differences) with L sqrt(rho_t) on each grid node.
SqrtEvolutionReport sqrt_evolution_diagnostic(const QuantumState& rho0, const LindbladModel& model,
                                              const std::vector<double>& times, double fd_step = 1e-5);

}  // namespace qsl
