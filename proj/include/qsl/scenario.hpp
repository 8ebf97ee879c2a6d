#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/lindblad.hpp"
#include "qsl/numerics.hpp"
#include "qsl/operator_core.hpp"
#include "qsl/result_table.hpp"

namespace qsl {

enum class Task { Bound, Compare, Sweep, Evolve, Interfere, Reproduce };

std::string task_name(Task task);
Task parse_task(const std::string& name);

enum class SweepKind { Validity, Mixing, Elimination };

struct ScenarioOptions {
  std::vector<double> alpha_grid;
  std::optional<std::int64_t> shots;
  std::uint64_t seed = 42;
  int seeds = 1;
  /// Frobenius tolerance of the first-passage solver.
  double tolerance = 1e-9;
  std::optional<double> t_max;
  SweepKind sweep_kind = SweepKind::Validity;
  /// Instance count per Hilbert-space dimension (validity and mixing sweeps).
  std::map<int, int> instances{{2, 500}, {3, 200}};
  std::string curve;
  double lambda1 = -0.9;
  std::string fixtures;
};

struct Scenario {
  std::string name;
  Task task = Task::Bound;
  double hbar = 1.0;
  double omega = 1.0;
  std::map<std::string, QuantumState> states;
  std::string initial;
  std::string target;
  std::optional<Observable> hamiltonian;
  std::optional<LindbladModel> lindblad;
  std::optional<SqueezedVacuumParams> squeezed;
  std::optional<double> time;
  std::optional<TimeGrid> grid;
  ScenarioOptions options;
  std::string digest;
  std::string base_dir;

  const QuantumState& state(const std::string& name) const;
};

/// Reads and validates a JSON scenario. ParseError carries line:column; ValidationError names
/// the offending key path (e.g. states.rho1.bloch).
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<scenario>",
                             const std::string& base_dir = ".");

/// Dispatches on scenario.task. Every row carries the scenario digest.
ResultTable run(const Scenario& scenario);

/// One row per instance; instance k uses derive_seed(seed, k) regardless of thread count.
ResultTable validity_sweep(int dim, int count, std::uint64_t seed);
ResultTable mixing_sweep(const std::map<int, int>& instances, std::uint64_t seed);
ResultTable elimination_sweep(int count, std::uint64_t seed);

/// Simple-case squeezed-vacuum curve: markovian_bound, the Campo-style bound, the printed
/// closed form and a path-length bound per tau. Metadata records the crossover tau.
ResultTable markovian_curve(double lambda1, const std::vector<double>& taus);

}  // namespace qsl
