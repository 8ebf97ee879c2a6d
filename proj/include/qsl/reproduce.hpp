#pragma once

#include <string>

#include "qsl/operator_core.hpp"
#include "qsl/result_table.hpp"

namespace qsl {

/// Inputs of the worked qubit examples, hbar = omega = 1.
struct WorkedCase {
  QuantumState rho1;
  QuantumState rho2;
  Observable h;
  Vector3 r;
  Vector3 n;
  double a = 0.0;  ///< omega t at which rho2 is reached
};

/// Case 1: pure r perpendicular to n, a = pi/2. Case 2: pure, n.r = |n x r| = 1/sqrt2, a = 3pi/4.
/// Case 3: r = (0, 0, 1/2), n = (1/sqrt2, 1/sqrt3, -1/sqrt6), r' = (-4 sqrt3/15, sqrt2/15, -1/6).
WorkedCase worked_case(int which);

/// Mixing example: pure r1, r2 with r1.n = 1/sqrt2 and r2.n = sqrt3/2 about n = z.
struct MixingExample {
  QuantumState rho1;
  QuantumState sigma1;
  Observable h;
  double p = 1.0 / 3.0;
};

MixingExample mixing_example();

/// Evaluates every fixture entry. Columns: id, description, computed, expected, tolerance,
/// comparison, gating, passed. Non-gating rows are diagnostics.
ResultTable run_reproduction(const std::string& fixtures_path);

/// True when every gating row passed.
bool reproduction_passed(const ResultTable& table);

std::string default_fixtures_path();

}  // namespace qsl
