#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "qsl/cli.hpp"
#include "qsl/errors.hpp"
#include "qsl/scenario.hpp"

using namespace qsl;
using doctest::Approx;

namespace {

const std::string kScenarios = std::string(QSL_DATA_DIR) + "/scenarios/";

std::string message_of(const std::function<void()>& f, ErrorKind want) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.kind() == want);
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qsl_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("qsl_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("parse a minimal bound scenario") {
  const Scenario s = parse_scenario_text(R"({
    "name": "mini", "task": "bound",
    "generator": {"bloch": {"n": [0, 0, 1]}},
    "states": {"rho1": {"bloch": [1, 0, 0]}},
    "initial": "rho1", "time": 1.0
  })");
  CHECK(s.name == "mini");
  CHECK(s.task == Task::Bound);
  CHECK(s.hbar == 1.0);
  REQUIRE(s.hamiltonian);
  CHECK(s.time == Approx(1.0));
  CHECK(s.state("rho1").dim() == 2);
  CHECK(s.digest.size() == 16);
}

TEST_CASE("validation errors name the key path") {
  const std::string msg =
      message_of([] { parse_scenario(kScenarios + "invalid_bloch.json"); }, ErrorKind::ValidationError);
  CHECK(msg.find("states.rho1.bloch") != std::string::npos);

  const std::string unknown = message_of(
      [] { parse_scenario_text(R"({"name": "x", "task": "bound", "colour": 1})"); }, ErrorKind::ValidationError);
  CHECK(unknown.find("colour") != std::string::npos);

  const std::string dangling = message_of(
      [] {
        parse_scenario_text(R"({"name": "x", "task": "bound", "generator": {"bloch": {"n": [0, 0, 1]}},
                                 "states": {"a": {"bloch": [0, 0, 0.2]}}, "initial": "b", "time": 1})");
      },
      ErrorKind::ValidationError);
  CHECK(dangling.find("initial") != std::string::npos);
}

TEST_CASE("parse errors report line and column") {
  const std::string msg =
      message_of([] { parse_scenario_text("{\n  \"name\": \"x\",\n  \"task\" \"bound\"\n}", "bad.json"); },
                 ErrorKind::ParseError);
  CHECK(msg.find("bad.json:3:") != std::string::npos);
}

TEST_CASE("case3 inputs are read exactly") {
  const Scenario s = parse_scenario(kScenarios + "case3.json");
  CHECK(s.task == Task::Compare);
  const BlochVector r = state_to_bloch(s.state(s.initial));
  CHECK(r.r.z() == Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(r.r.x()) < 1e-15);
}

TEST_CASE("run bound on case1") {
  const ResultTable t = run(parse_scenario(kScenarios + "case1.json"));
  REQUIRE(t.rows().size() == 1);
  CHECK(std::abs(t.real(0, "tl") - 1.1107) <= 1e-4);
  CHECK(t.boolean(0, "all_valid"));
  CHECK(t.column_index("scenario_digest") >= 0);
  CHECK(t.metadata().at("task") == "bound");
}

TEST_CASE("run compare on case3") {
  const ResultTable t = run(parse_scenario(kScenarios + "case3.json"));
  bool seen = false;
  for (std::size_t i = 0; i < t.rows().size(); ++i)
    if (std::get<std::string>(t.at(i, "bound")) == "tl") {
      CHECK(t.real(i, "value") == Approx(0.9012).epsilon(1e-4));
      seen = true;
    }
  CHECK(seen);
}

TEST_CASE("sweeps do not depend on the thread count") {
  ::setenv("QSL_LAB_THREADS", "1", 1);
  const ResultTable one = validity_sweep(3, 24, 7);
  const ResultTable mix1 = mixing_sweep({{2, 30}}, 9);
  ::setenv("QSL_LAB_THREADS", "4", 1);
  const ResultTable four = validity_sweep(3, 24, 7);
  const ResultTable mix4 = mixing_sweep({{2, 30}}, 9);
  ::unsetenv("QSL_LAB_THREADS");
  CHECK(one == four);
  CHECK(to_csv(one) == to_csv(four));
  CHECK(mix1 == mix4);
  CHECK(validity_sweep(3, 24, 8).rows() != one.rows());
}

TEST_CASE("emit formats") {
  const ResultTable empty({{"a", ColumnType::Real}, {"b", ColumnType::Text}});
  CHECK(to_csv(empty) == "a,b\n");

  ResultTable t({{"x", ColumnType::Real}, {"n", ColumnType::Integer}, {"s", ColumnType::Text}, {"ok", ColumnType::Boolean}});
  t.add_row({0.1, std::int64_t{3}, std::string("tl"), true});
  t.add_row({1.0 / 3.0, std::int64_t{-1}, std::string("a,b"), false});
  t.metadata()["seed"] = "42";
  CHECK(table_from_json(to_json(t)) == t);

  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 1.1107207345395915}) {
    const std::string s = format_real(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(0.72) == "0.72");
}

TEST_CASE("markovian curve limits") {
  // The angle opens like sqrt(tau) from a pure state, so the approach to zero is slow.
  const ResultTable small = markovian_curve(-0.9, {1e-8, 1e-4});
  CHECK(small.real(0, "markovian_bound") < 1e-3);
  CHECK(small.real(0, "markovian_bound") < small.real(1, "markovian_bound"));
  CHECK(small.real(0, "campo_bound") < 1e-3);
  const ResultTable late = markovian_curve(-0.9, {3.0});
  CHECK(late.real(0, "markovian_bound") > late.real(0, "campo_bound"));
  CHECK(late.boolean(0, "exceeds_campo"));
  CHECK(late.real(0, "affinity") == Approx(std::sqrt(0.5 * (1 + std::exp(-2.7)))).epsilon(1e-10));
}

TEST_CASE("cli exit codes and formats") {
  const CliResult ok = run_cli({"bound", "--scenario", kScenarios + "case1.json"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("initial,", 0) == 0);

  const CliResult js = run_cli({"bound", "--scenario", kScenarios + "case1.json", "--format", "json"});
  CHECK(js.code == 0);
  const ResultTable parsed = table_from_json(js.out);
  CHECK(parsed.real(0, "tl") == Approx(1.1107207345395915).epsilon(1e-12));

  const CliResult bad = run_cli({"bound", "--scenario", kScenarios + "invalid_bloch.json"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("states.rho1.bloch") != std::string::npos);
  CHECK(run_cli({"bound"}).code == 1);
  CHECK(run_cli({"bound", "--scenario", "/nonexistent/x.json"}).code == 1);
  CHECK(run_cli({}).code == 1);

  CHECK(run_cli({"reproduce"}).code == 0);
  const auto fixtures = scratch("fixtures.json", R"({"version": 1, "entries": [
    {"id": "case1_tl", "description": "wrong on purpose", "expected": 5.0, "tolerance": 1e-6,
     "comparison": "abs", "gating": true}]})");
  const auto scenario = scratch("reproduce.json", R"({"name": "r", "task": "reproduce",
    "options": {"fixtures": ")" + fixtures.filename().string() + R"("}})");
  const CliResult failed = run_cli({"reproduce", "--scenario", scenario.string()});
  CHECK(failed.code == 2);
  CHECK(failed.out.find("case1_tl") != std::string::npos);
  std::filesystem::remove(fixtures);
  std::filesystem::remove(scenario);
}
