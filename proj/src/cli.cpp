#include "qsl/cli.hpp"

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qsl/reproduce.hpp"
#include "qsl/scenario.hpp"

namespace qsl::cli {

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum speed limit bounds, sweeps and reproduction suite", "qsl_lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scenario_path, out_path, format_name = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> shots;
  app.add_option("--scenario", scenario_path, "Scenario JSON file");
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Override the scenario seed");
  app.add_option("--shots", shots, "Override the shot count")->check(CLI::PositiveNumber);

  for (const char* name : {"bound", "compare", "sweep", "evolve", "interfere", "reproduce"})
    app.add_subcommand(name, std::string("Run the ") + name + " task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  const Task task = parse_task(app.get_subcommands().front()->get_name());
  try {
    Scenario s;
    if (!scenario_path.empty()) {
      s = parse_scenario(scenario_path);
    } else if (task == Task::Reproduce) {
      s.name = "reproduce";
      s.digest = Digest().add(std::string_view("reproduce")).hex();
    } else {
      err << "error: --scenario is required for " << task_name(task) << "\n";
      return 1;
    }
    s.task = task;
    if (seed) s.options.seed = *seed;
    if (shots) s.options.shots = *shots;

    const ResultTable table = run(s);
    const OutputFormat format = parse_format(format_name);
    if (out_path.empty()) {
      emit(table, format, out);
    } else {
      emit(table, format, out_path);
    }
    if (task == Task::Reproduce && !reproduction_passed(table)) {
      err << "reproduction suite: gating checks failed\n";
      return 2;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Internal ? 3 : 1;
  }
}

}  // namespace qsl::cli
