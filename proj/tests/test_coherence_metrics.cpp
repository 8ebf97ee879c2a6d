#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qsl/coherence_metrics.hpp"
#include "qsl/dynamics.hpp"

using namespace qsl;
using doctest::Approx;

namespace {

QuantumState plus_state() { return bloch_to_state(BlochVector(1, 0, 0)); }

Vector3 case3_n() { return Vector3(1 / std::sqrt(2.0), 1 / std::sqrt(3.0), -1 / std::sqrt(6.0)); }

}  // namespace

TEST_CASE("wy_coherence examples") {
  CHECK(wy_coherence(plus_state(), Observable(pauli_x())) == Approx(0.0).epsilon(1e-14));
  CHECK(wy_coherence(plus_state(), Observable(pauli_z())) == Approx(1.0).epsilon(1e-12));

  const Vector3 r(0, 0, 0.5);
  const double q = wy_coherence(bloch_to_state(BlochVector(r)), Observable(pauli_dot(case3_n())));
  CHECK(q == Approx(oracle::wy_bloch(r, case3_n())).epsilon(1e-12));
  CHECK(q == Approx(0.11165).epsilon(1e-4));
}

TEST_CASE("wy_coherence against the 2x2 square-root oracle") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const QuantumState rho = random_state(2, 2, seed);
    const Matrix h = random_hermitian(2, seed + 500);
    CHECK(wy_coherence(rho, Observable(h)) == Approx(oracle::wy(rho.matrix(), h)).epsilon(1e-10));
  }
}

TEST_CASE("coherence chain 0 <= lower bound <= 2Q and Q <= variance") {
  int n = 0;
  for (int d = 2; d <= 4; ++d) {
    for (std::uint64_t k = 0; k < 334; ++k, ++n) {
      const std::uint64_t seed = derive_seed(100 + d, k);
      const QuantumState rho = random_state(d, 1 + static_cast<int>(k % d), seed);
      const Observable h(random_hermitian(d, seed ^ 0x5555));
      const double lb = wy_lower_bound(rho, h), q = wy_coherence(rho, h), v = variance(rho, h);
      CHECK(lb >= -1e-10);
      CHECK(lb <= 2.0 * q + 1e-10);
      CHECK(q <= v + 1e-10);
      if (k % d == 0) CHECK(q == Approx(v).epsilon(1e-9));  // rank 1
    }
  }
  CHECK(n >= 1000);
}

TEST_CASE("wy_lower_bound") {
  // Mixed qubits: the commutator of rho itself exceeds that of sqrt(rho) by (1 + 2 sqrt(det)).
  const QuantumState mixed = bloch_to_state(BlochVector(0.6, 0, 0));
  const Observable z(pauli_z());
  CHECK(wy_lower_bound(mixed, z) == Approx(wy_coherence(mixed, z) * (1.0 + std::sqrt(1.0 - 0.36))).epsilon(1e-12));

  CHECK(wy_lower_bound(plus_state(), Observable(pauli_x())) == Approx(0.0).epsilon(1e-14));
  const QuantumState pure = random_state(3, 1, 4);
  const Observable h(random_hermitian(3, 5));
  CHECK(wy_lower_bound(pure, h) == Approx(wy_coherence(pure, h)).epsilon(1e-10));
}

TEST_CASE("affinity") {
  const QuantumState rho = random_state(3, 2, 9);
  CHECK(affinity(rho, rho) == Approx(1.0).epsilon(1e-12));
  CHECK(affinity(bloch_to_state(BlochVector(0, 0, 1)), bloch_to_state(BlochVector(0, 0, -1))) ==
        Approx(0.0).epsilon(1e-14));

  const Vector3 r(0, 0, 0.5), rp(-4 * std::sqrt(3.0) / 15, std::sqrt(2.0) / 15, -1.0 / 6);
  const double a = affinity(bloch_to_state(BlochVector(r)), bloch_to_state(BlochVector(rp)));
  CHECK(a == Approx(oracle::affinity_bloch(r, rp)).epsilon(1e-12));
  CHECK(a == Approx(0.9107).epsilon(1e-4));

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const QuantumState x = random_state(2, 2, seed), y = random_state(2, 1 + seed % 2, seed + 77);
    CHECK(affinity(x, y) == Approx(oracle::affinity(x.matrix(), y.matrix())).epsilon(1e-10));
  }
}

TEST_CASE("uhlmann_fidelity") {
  const QuantumState rho = random_state(3, 3, 2);
  CHECK(uhlmann_fidelity(rho, rho) == Approx(1.0).epsilon(1e-10));

  CVector a(2), b(2);
  a << 1.0, 0.0;
  b << std::cos(0.3), Complex(0.0, std::sin(0.3));
  CHECK(uhlmann_fidelity(QuantumState::pure(a), QuantumState::pure(b)) == Approx(std::cos(0.3)).epsilon(1e-10));

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const QuantumState x = random_state(2, 2, seed), y = random_state(2, 2, seed + 31);
    CHECK(uhlmann_fidelity(x, y) == Approx(oracle::fidelity(x.matrix(), y.matrix())).epsilon(1e-10));
  }
}

TEST_CASE("affinity <= fidelity and unitary invariance") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const QuantumState x = random_state(d, 1 + static_cast<int>(seed % d), seed);
    const QuantumState y = random_state(d, d, seed + 1000);
    CHECK(affinity(x, y) <= uhlmann_fidelity(x, y) + 1e-10);

    const Matrix u = random_unitary(d, seed + 2000);
    const Observable h(random_hermitian(d, seed + 3000));
    const QuantumState ux = QuantumState::from_matrix(u * x.matrix() * u.adjoint());
    const QuantumState uy = QuantumState::from_matrix(u * y.matrix() * u.adjoint());
    CHECK(wy_coherence(ux, Observable(u * h.matrix() * u.adjoint())) == Approx(wy_coherence(x, h)).epsilon(1e-10));
    CHECK(affinity(ux, uy) == Approx(affinity(x, y)).epsilon(1e-10));
  }
}

TEST_CASE("affinity is monotone under partial trace") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const QuantumState ab = random_state(4, 1 + seed % 4, seed);
    const QuantumState cd = random_state(4, 1 + (seed / 4) % 4, seed + 400);
    const double joint = affinity(ab, cd);
    CHECK(affinity(partial_trace(ab, 2, 2, Subsystem::A), partial_trace(cd, 2, 2, Subsystem::A)) >= joint - 1e-10);
    CHECK(affinity(partial_trace(ab, 2, 2, Subsystem::B), partial_trace(cd, 2, 2, Subsystem::B)) >= joint - 1e-10);
  }
}

TEST_CASE("relative_purity") {
  const QuantumState x = random_state(3, 2, 3);
  CHECK(relative_purity(x, x) == Approx(1.0).epsilon(1e-12));
  CHECK(relative_purity(bloch_to_state(BlochVector(1, 0, 0)), bloch_to_state(BlochVector(-1, 0, 0))) ==
        Approx(0.0).epsilon(1e-14));
  const QuantumState y = random_state(3, 3, 4);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      num += (x.matrix()(i, j) * y.matrix()(j, i)).real();
      den += std::norm(x.matrix()(i, j));
    }
  CHECK(relative_purity(x, y) == Approx(num / den).epsilon(1e-12));
}

TEST_CASE("variance") {
  CHECK(variance(bloch_to_state(BlochVector(0, 0, 1)), Observable(pauli_z())) == Approx(0.0).epsilon(1e-14));
  CHECK(variance(plus_state(), Observable(pauli_z())) == Approx(1.0));
  CHECK(variance(QuantumState::maximally_mixed(2), Observable(pauli_z())) == Approx(1.0));
}

TEST_CASE("sld_qfi") {
  const QuantumState pure = random_state(3, 1, 12);
  const Observable h(random_hermitian(3, 13));
  CHECK(sld_qfi(pure, h) == Approx(4.0 * variance(pure, h)).epsilon(1e-10));
  CHECK(sld_qfi(bloch_to_state(BlochVector(0, 0, 0.4)), Observable(pauli_z())) == Approx(0.0).epsilon(1e-14));

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const QuantumState rho = random_state(2, 2, seed);
    const Vector3 r = state_to_bloch(rho).r;
    const Vector3 n = Vector3(std::sin(seed * 0.3), std::cos(seed * 0.7), 0.4).normalized();
    CHECK(sld_qfi(rho, Observable(pauli_dot(n))) == Approx(oracle::qfi_bloch(r, n)).epsilon(1e-10));
  }
}

TEST_CASE("uncertainty chain: Var >= F_Q/4 >= Q") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const QuantumState rho = random_state(d, 1 + static_cast<int>(seed % d), seed);
    const UncertaintyChain c = uncertainty_chain(rho, Observable(random_hermitian(d, seed + 9)));
    CHECK(c.q_chain_holds);
  }
  // 2Q exceeds F_Q/4 for pure states, so the doubled chain fails there.
  const UncertaintyChain pure = uncertainty_chain(plus_state(), Observable(pauli_z()));
  CHECK_FALSE(pure.two_q_chain_holds);
}

TEST_CASE("lindblad_coherence") {
  const QuantumState rho = random_state(3, 2, 21);
  const Observable h(random_hermitian(3, 22));
  CHECK(lindblad_coherence(rho, LindbladModel(h)) == Approx(wy_coherence(rho, h)).epsilon(1e-10));

  const Observable h2(random_hermitian(2, 23), 2.0);
  const QuantumState q = random_state(2, 2, 24);
  CHECK(lindblad_coherence(q, LindbladModel(h2)) == Approx(wy_coherence(q, h2) / 4.0).epsilon(1e-10));

  // Pure dephasing: L X = -0.9 offdiag(X); diagonal states are fixed points.
  const LindbladModel deph = squeezed_vacuum_model(SqueezedVacuumParams::simple_case(-0.9));
  CHECK(lindblad_coherence(bloch_to_state(BlochVector(0, 0, 0.3)), deph) == Approx(0.0).epsilon(1e-14));
  const QuantumState r0 = bloch_to_state(BlochVector(1, 0, 0));
  for (double t : {0.1, 0.7, 2.0}) {
    const QuantumState rt = evolve_lindblad(r0, deph, t);
    const oracle::M2 s = oracle::sqrt2(rt.matrix());
    oracle::M2 x = oracle::M2::Zero();
    x(0, 1) = -0.9 * s(0, 1);
    x(1, 0) = -0.9 * s(1, 0);
    const double two_q = (x * x.adjoint()).trace().real() - std::norm((s * x).trace());
    CHECK(lindblad_coherence(rt, deph) == Approx(0.5 * two_q).epsilon(1e-10));
  }
}
