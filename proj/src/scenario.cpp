#include "qsl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qsl/coherence_metrics.hpp"
#include "qsl/interferometry.hpp"
#include "qsl/qsl_bounds.hpp"
#include "qsl/reproduce.hpp"

#ifndef QSL_VERSION
#define QSL_VERSION "0.0.0"
#endif

namespace qsl {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorKind::ValidationError, path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "expected a number");
  return v.get<double>();
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) invalid(path, "must be positive");
  return x;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) invalid(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) invalid(path, "expected a string");
  return v.get<std::string>();
}

Complex complex_entry(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  invalid(path, "expected a number or an [re, im] pair");
}

Matrix matrix_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) invalid(path, "expected a non-empty array of rows");
  const std::size_t n = v.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != n) invalid(row_path, "row must have " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = complex_entry(v[i][j], row_path + "[" + std::to_string(j) + "]");
  }
  return m;
}

Vector3 vec3_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) invalid(path, "expected 3 numbers");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]"), number(v[2], path + "[2]")};
}

// Re-raises library errors raised while building a value as validation errors at `path`.
template <typename F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError) throw;
    invalid(path, std::string(to_string(e.kind())) + ": " + e.what());
  }
}

Observable hamiltonian_of(const json& g, const std::string& path, double hbar, double omega) {
  if (g.contains("bloch")) {
    const std::string p = join(path, "bloch");
    const json& b = g["bloch"];
    const Vector3 n = vec3_of(require(b, "n", p), join(p, "n"));
    const double w = b.contains("omega") ? positive(b["omega"], join(p, "omega")) : omega;
    const double alpha = b.contains("alpha") ? number(b["alpha"], join(p, "alpha")) : 0.0;
    return at_path(join(p, "n"), [&] { return bloch_hamiltonian(n, w, alpha, hbar); });
  }
  if (g.contains("matrix")) {
    const std::string p = join(path, "matrix");
    const Matrix m = matrix_of(g["matrix"], p);
    return at_path(p, [&] { return Observable(m, hbar, omega); });
  }
  invalid(path, "expected 'bloch' or 'matrix'");
}

void parse_generator(const json& g, Scenario& s) {
  const std::string path = "generator";
  if (!g.is_object()) invalid(path, "expected an object");
  if (!g.contains("lindblad")) {
    s.hamiltonian = hamiltonian_of(g, path, s.hbar, s.omega);
    return;
  }
  const std::string p = "generator.lindblad";
  const json& l = g["lindblad"];
  if (!l.is_object()) invalid(p, "expected an object");
  if (l.contains("lambda1") || l.contains("rates")) {
    SqueezedVacuumParams params;
    if (l.contains("lambda1")) {
      params = SqueezedVacuumParams::simple_case(number(l["lambda1"], join(p, "lambda1")));
    } else {
      const json& r = l["rates"];
      if (!r.is_array() || r.size() != 3) invalid(join(p, "rates"), "expected [1/T1, 1/T2, 1/T3]");
      params.rate1 = number(r[0], join(p, "rates[0]"));
      params.rate2 = number(r[1], join(p, "rates[1]"));
      params.rate3 = number(r[2], join(p, "rates[2]"));
    }
    if (l.contains("w_eq")) params.w_eq = number(l["w_eq"], join(p, "w_eq"));
    if (l.contains("rabi")) params.rabi = number(l["rabi"], join(p, "rabi"));
    params.hbar = s.hbar;
    s.squeezed = params;
    s.lindblad = at_path(p, [&] { return squeezed_vacuum_model(params); });
    return;
  }
  const Observable h = l.contains("hamiltonian") ? hamiltonian_of(l["hamiltonian"], join(p, "hamiltonian"), s.hbar, s.omega)
                                                 : Observable(Matrix::Zero(2, 2), s.hbar, s.omega);
  std::vector<Matrix> jumps;
  if (l.contains("jumps")) {
    const json& js = l["jumps"];
    if (!js.is_array()) invalid(join(p, "jumps"), "expected an array of matrices");
    for (std::size_t k = 0; k < js.size(); ++k) jumps.push_back(matrix_of(js[k], join(p, "jumps") + "[" + std::to_string(k) + "]"));
  }
  Matrix c = jumps.empty() ? Matrix(0, 0) : matrix_of(require(l, "c", p), join(p, "c"));
  if (jumps.empty() && l.contains("c")) invalid(join(p, "c"), "coefficients given without jump operators");
  s.lindblad = at_path(p, [&] { return LindbladModel(h, std::move(jumps), std::move(c)); });
}

QuantumState state_of(const json& spec, const std::string& path, const Scenario& s) {
  if (!spec.is_object() || spec.size() != 1)
    invalid(path, "expected exactly one of bloch, matrix, pure, random, evolve");
  const std::string kind = spec.begin().key();
  const json& v = spec.begin().value();
  const std::string p = join(path, kind);
  if (kind == "bloch") {
    const Vector3 r = vec3_of(v, p);
    return at_path(p, [&] { return bloch_to_state(BlochVector(r)); });
  }
  if (kind == "matrix") {
    const Matrix m = matrix_of(v, p);
    return at_path(p, [&] { return QuantumState::from_matrix(m); });
  }
  if (kind == "pure") {
    if (!v.is_array() || v.empty()) invalid(p, "expected an amplitude array");
    CVector psi(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) psi(i) = complex_entry(v[i], p + "[" + std::to_string(i) + "]");
    return at_path(p, [&] { return QuantumState::pure(psi); });
  }
  if (kind == "random") {
    const int dim = static_cast<int>(integer(require(v, "dim", p), join(p, "dim")));
    const int rank = v.contains("rank") ? static_cast<int>(integer(v["rank"], join(p, "rank"))) : dim;
    const auto seed = static_cast<std::uint64_t>(integer(require(v, "seed", p), join(p, "seed")));
    return at_path(p, [&] { return random_state(dim, rank, seed); });
  }
  if (kind == "evolve") {
    const std::string from = text(require(v, "from", p), join(p, "from"));
    const double t = number(require(v, "time", p), join(p, "time"));
    const auto it = s.states.find(from);
    if (it == s.states.end()) invalid(join(p, "from"), "unknown state '" + from + "' (define it earlier)");
    return at_path(p, [&] {
      if (s.hamiltonian) return evolve_unitary(it->second, *s.hamiltonian, t);
      if (s.lindblad) return evolve_lindblad(it->second, *s.lindblad, t);
      invalid(p, "needs a generator");
    });
  }
  invalid(path, "unknown state kind '" + kind + "'");
}

std::vector<double> alpha_grid_of(const json& v, const std::string& path) {
  std::vector<double> grid;
  if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) grid.push_back(positive(v[k], path + "[" + std::to_string(k) + "]"));
  } else if (v.is_object()) {
    const double start = positive(require(v, "start", path), join(path, "start"));
    const double stop = positive(require(v, "stop", path), join(path, "stop"));
    const double step = positive(require(v, "step", path), join(path, "step"));
    if (stop < start) invalid(path, "stop < start");
    const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int k = 0; k <= count; ++k) grid.push_back(start + k * step);
  } else {
    invalid(path, "expected an array or {start, stop, step}");
  }
  if (grid.empty()) invalid(path, "empty alpha grid");
  return grid;
}

void parse_options(const json& o, Scenario& s) {
  const std::string path = "options";
  if (!o.is_object()) invalid(path, "expected an object");
  ScenarioOptions& opt = s.options;
  for (const auto& [key, v] : o.items()) {
    const std::string p = join(path, key);
    if (key == "alpha_grid") opt.alpha_grid = alpha_grid_of(v, p);
    else if (key == "shots") {
      const auto n = integer(v, p);
      if (n <= 0) invalid(p, "must be positive");
      opt.shots = n;
    } else if (key == "seed") opt.seed = static_cast<std::uint64_t>(integer(v, p));
    else if (key == "seeds") {
      opt.seeds = static_cast<int>(integer(v, p));
      if (opt.seeds <= 0) invalid(p, "must be positive");
    } else if (key == "tolerance") opt.tolerance = positive(v, p);
    else if (key == "t_max") opt.t_max = positive(v, p);
    else if (key == "sweep") {
      const std::string kind = text(v, p);
      if (kind == "validity") opt.sweep_kind = SweepKind::Validity;
      else if (kind == "mixing") opt.sweep_kind = SweepKind::Mixing;
      else if (kind == "elimination") opt.sweep_kind = SweepKind::Elimination;
      else invalid(p, "expected validity, mixing or elimination");
    } else if (key == "instances") {
      if (!v.is_object()) invalid(p, "expected {\"dim\": count}");
      opt.instances.clear();
      for (const auto& [dim, count] : v.items()) {
        int d = 0;
        try {
          d = std::stoi(dim);
        } catch (const std::exception&) {
          invalid(join(p, dim), "dimension key must be an integer");
        }
        if (d < 2 || d > 8) invalid(join(p, dim), "dimension must lie in [2, 8]");
        const auto n = integer(count, join(p, dim));
        if (n < 0) invalid(join(p, dim), "count must be non-negative");
        opt.instances[d] = static_cast<int>(n);
      }
    } else if (key == "curve") {
      opt.curve = text(v, p);
      if (opt.curve != "markovian") invalid(p, "only 'markovian' is supported");
    } else if (key == "lambda1") {
      opt.lambda1 = number(v, p);
      if (!(opt.lambda1 < 0.0)) invalid(p, "must be negative");
    } else if (key == "fixtures") opt.fixtures = text(v, p);
    else invalid(p, "unknown option");
  }
}

std::string describe_parse_error(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

std::string task_name(Task task) {
  switch (task) {
    case Task::Bound: return "bound";
    case Task::Compare: return "compare";
    case Task::Sweep: return "sweep";
    case Task::Evolve: return "evolve";
    case Task::Interfere: return "interfere";
    case Task::Reproduce: return "reproduce";
  }
  return "?";
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::Bound, Task::Compare, Task::Sweep, Task::Evolve, Task::Interfere, Task::Reproduce})
    if (task_name(t) == name) return t;
  fail(ErrorKind::ValidationError, "task: unknown task '" + name + "'");
}

const QuantumState& Scenario::state(const std::string& key) const {
  const auto it = states.find(key);
  if (it == states.end()) fail(ErrorKind::ValidationError, "states." + key + ": not defined");
  return it->second;
}

Scenario parse_scenario_text(const std::string& content, const std::string& origin, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, origin + ":" + describe_parse_error(content, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ParseError, origin + ": top level must be an object");

  static const std::set<std::string> known{"name",    "task", "hbar",   "omega", "states",  "generator",
                                           "initial", "target", "time", "options", "description", "$schema"};
  for (const auto& [key, v] : doc.items())
    if (!known.count(key)) invalid(key, "unknown key");

  Scenario s;
  s.base_dir = base_dir;
  s.digest = Digest().add(doc.dump()).hex();
  s.name = text(require(doc, "name", ""), "name");
  s.task = parse_task(text(require(doc, "task", ""), "task"));
  if (doc.contains("hbar")) s.hbar = positive(doc["hbar"], "hbar");
  if (doc.contains("omega")) s.omega = positive(doc["omega"], "omega");
  if (doc.contains("generator")) parse_generator(doc["generator"], s);
  if (doc.contains("states")) {
    const json& states = doc["states"];
    if (!states.is_object()) invalid("states", "expected an object");
    for (const auto& [key, spec] : states.items()) s.states.emplace(key, state_of(spec, "states." + key, s));
  }
  for (const char* key : {"initial", "target"}) {
    if (!doc.contains(key)) continue;
    const std::string name = text(doc[key], key);
    if (!s.states.count(name)) invalid(key, "unknown state '" + name + "'");
    (std::string(key) == "initial" ? s.initial : s.target) = name;
  }
  if (doc.contains("time")) {
    const json& t = doc["time"];
    if (t.is_number()) {
      s.time = t.get<double>();
      if (*s.time < 0.0) invalid("time", "must be non-negative");
    } else if (t.is_object()) {
      TimeGrid g;
      g.start = number(require(t, "start", "time"), "time.start");
      g.stop = number(require(t, "stop", "time"), "time.stop");
      g.nodes = static_cast<int>(integer(require(t, "nodes", "time"), "time.nodes"));
      at_path("time", [&] { return g.points(); });
      s.grid = g;
    } else {
      invalid("time", "expected a number or {start, stop, nodes}");
    }
  }
  if (doc.contains("options")) parse_options(doc["options"], s);

  // Cross-field requirements per task.
  for (const auto& [name, st] : s.states) {
    const int dim = s.hamiltonian ? s.hamiltonian->dim() : s.lindblad ? s.lindblad->dim() : st.dim();
    if (st.dim() != dim) invalid("states." + name, "dimension " + std::to_string(st.dim()) + " differs from generator");
  }
  const bool needs_initial = s.task == Task::Bound || s.task == Task::Compare || s.task == Task::Interfere ||
                             (s.task == Task::Evolve && s.options.curve.empty());
  if (needs_initial && s.initial.empty()) invalid("initial", "required for task " + task_name(s.task));
  if ((s.task == Task::Bound || s.task == Task::Compare || s.task == Task::Interfere) && !s.hamiltonian)
    invalid("generator", "task " + task_name(s.task) + " needs a Hamiltonian generator");
  if ((s.task == Task::Bound || s.task == Task::Compare) && s.target.empty() && !s.time)
    invalid("target", "give a target state or an evolution time");
  if (s.task == Task::Interfere && !s.time) invalid("time", "interfere needs an evolution time");
  if (s.task == Task::Evolve && !s.grid) invalid("time", "evolve needs a grid {start, stop, nodes}");
  if (s.task == Task::Evolve && s.options.curve.empty() && !s.hamiltonian && !s.lindblad)
    invalid("generator", "evolve needs a generator");
  return s;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path p(path);
  return parse_scenario_text(buf.str(), path, p.has_parent_path() ? p.parent_path().string() : ".");
}

namespace {

const std::vector<double>& alpha_grid(const Scenario& s) {
  static const std::vector<double> fallback = default_alpha_grid();
  return s.options.alpha_grid.empty() ? fallback : s.options.alpha_grid;
}

struct Endpoints {
  const QuantumState& rho1;
  QuantumState rho2;
  std::optional<double> actual_time;
};

Endpoints endpoints(const Scenario& s) {
  const QuantumState& rho1 = s.state(s.initial);
  const Observable& h = *s.hamiltonian;
  if (s.target.empty()) {
    QuantumState rho2 = evolve_unitary(rho1, h, *s.time);
    const double t = first_passage_time(rho1, h, rho2, s.options.tolerance, *s.time);
    return {rho1, std::move(rho2), t};
  }
  const QuantumState& rho2 = s.state(s.target);
  const double t_max = s.options.t_max.value_or(s.time.value_or(2.0 * kPi * s.hbar / s.omega));
  std::optional<double> actual;
  try {
    actual = first_passage_time(rho1, h, rho2, s.options.tolerance, t_max);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotReached) throw;
  }
  return {rho1, rho2, actual};
}

double or_nan(std::optional<double> x) { return x.value_or(std::numeric_limits<double>::quiet_NaN()); }

ResultTable bound_table(const Scenario& s) {
  const Endpoints e = endpoints(s);
  const BoundReport r = compute_bound_report(e.rho1, *s.hamiltonian, e.rho2, e.actual_time, alpha_grid(s));
  ResultTable table({{"initial", ColumnType::Text},
                     {"target", ColumnType::Text},
                     {"tl", ColumnType::Real},
                     {"tl_alpha2", ColumnType::Real},
                     {"alpha_max", ColumnType::Real},
                     {"tl_alpha_max", ColumnType::Real},
                     {"mt_fidelity", ColumnType::Real},
                     {"qfi", ColumnType::Real},
                     {"campo", ColumnType::Real},
                     {"actual_time", ColumnType::Real},
                     {"all_valid", ColumnType::Boolean},
                     {"inputs_digest", ColumnType::Text}});
  table.add_row({s.initial, s.target.empty() ? std::string("evolved") : s.target, r.tl, r.tl_alpha2, r.tl_alpha_max.alpha,
                 r.tl_alpha_max.value, r.mt_fidelity, r.qfi, r.campo, or_nan(r.actual_time), r.all_valid(),
                 r.inputs_digest});
  return table;
}

ResultTable compare_table(const Scenario& s) {
  const Endpoints e = endpoints(s);
  const Observable& h = *s.hamiltonian;
  const BoundReport r = compute_bound_report(e.rho1, h, e.rho2, e.actual_time, alpha_grid(s));
  const CampoBound campo = campo_bound(e.rho1, h, e.rho2);
  const UncertaintyChain chain = uncertainty_chain(e.rho1, h);

  ResultTable table({{"bound", ColumnType::Text},
                     {"value", ColumnType::Real},
                     {"le_tl", ColumnType::Boolean},
                     {"le_actual", ColumnType::Boolean}});
  const auto add = [&](const std::string& name, double v) {
    table.add_row({name, v, v <= r.tl + 1e-10, e.actual_time ? v <= *e.actual_time + 1e-8 : false});
  };
  add("tl", r.tl);
  add("tl_alpha2", r.tl_alpha2);
  add("tl_alpha_max", r.tl_alpha_max.value);
  add("mt_fidelity", r.mt_fidelity);
  add("qfi", r.qfi);
  add("campo", campo.bound);
  add("campo_middle", campo.middle);
  add("campo_intermediate", campo.intermediate);
  add("u_quantity", u_quantity(e.rho1, h, e.rho2));
  table.metadata()["actual_time"] = format_real(or_nan(e.actual_time));
  table.metadata()["alpha_argmax"] = format_real(r.tl_alpha_max.alpha);
  table.metadata()["q_chain_holds"] = chain.q_chain_holds ? "true" : "false";
  table.metadata()["two_q_chain_holds"] = chain.two_q_chain_holds ? "true" : "false";
  return table;
}

ResultTable evolve_table(const Scenario& s) {
  if (!s.options.curve.empty()) return markovian_curve(s.options.lambda1, s.grid->points());
  const QuantumState& rho0 = s.state(s.initial);
  const Generator g = s.hamiltonian ? Generator(*s.hamiltonian) : Generator(*s.lindblad);
  const EvolutionPath path = evolve_path(rho0, g, *s.grid);
  ResultTable table({{"t", ColumnType::Real},
                     {"trace", ColumnType::Real},
                     {"purity", ColumnType::Real},
                     {"affinity", ColumnType::Real},
                     {"coherence", ColumnType::Real},
                     {"bloch_x", ColumnType::Real},
                     {"bloch_y", ColumnType::Real},
                     {"bloch_z", ColumnType::Real}});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const QuantumState& st = path.states[k];
    const double coh = s.hamiltonian ? wy_coherence(st, *s.hamiltonian) : lindblad_coherence(st, *s.lindblad);
    Vector3 b(nan, nan, nan);
    if (st.dim() == 2) b = state_to_bloch(st).r;
    table.add_row({path.times[k], real_trace(st.matrix()), st.purity(), affinity(rho0, st), coh, b(0), b(1), b(2)});
  }
  return table;
}

ResultTable interfere_table(const Scenario& s) {
  const QuantumState& rho1 = s.state(s.initial);
  const Observable& h = *s.hamiltonian;
  const double exact = tl_bound(rho1, h, evolve_unitary(rho1, h, *s.time));
  ResultTable table({{"seed", ColumnType::Integer},
                     {"shots", ColumnType::Integer},
                     {"value", ColumnType::Real},
                     {"std_error", ColumnType::Real},
                     {"q", ColumnType::Real},
                     {"q_error", ColumnType::Real},
                     {"affinity", ColumnType::Real},
                     {"affinity_error", ColumnType::Real},
                     {"tl_exact", ColumnType::Real},
                     {"within_4_sigma", ColumnType::Boolean},
                     {"alignment_residual", ColumnType::Real},
                     {"alignment_iterations", ColumnType::Integer}});
  const int n = s.options.shots ? s.options.seeds : 1;
  std::vector<std::vector<Cell>> rows(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
    const std::uint64_t seed = s.options.seed + k;
    const ProtocolEstimate est = estimate_tl_from_protocol(rho1, h, *s.time, s.options.shots, seed);
    const bool within = s.options.shots ? std::abs(est.tl - exact) <= 4.0 * est.error_bar
                                        : std::abs(est.tl - exact) <= 1e-6;
    rows[k] = {static_cast<std::int64_t>(seed), est.shots, est.tl, est.error_bar, est.q, est.q_error, est.affinity,
               est.affinity_error, exact, within, est.alignment_residual,
               static_cast<std::int64_t>(est.alignment_iterations)};
  });
  for (auto& row : rows) table.add_row(std::move(row));
  return table;
}

ResultTable sweep_table(const Scenario& s) {
  switch (s.options.sweep_kind) {
    case SweepKind::Validity: {
      ResultTable out;
      bool first = true;
      for (const auto& [dim, count] : s.options.instances) {
        ResultTable part = validity_sweep(dim, count, derive_seed(s.options.seed, dim));
        if (first) {
          out = std::move(part);
          first = false;
        } else {
          for (const auto& row : part.rows()) out.add_row(row);
        }
      }
      return out;
    }
    case SweepKind::Mixing: return mixing_sweep(s.options.instances, s.options.seed);
    case SweepKind::Elimination: {
      int total = 0;
      for (const auto& [dim, count] : s.options.instances) total += count;
      return elimination_sweep(total, s.options.seed);
    }
  }
  fail(ErrorKind::Internal, "unhandled sweep kind");
}

std::string resolve(const std::string& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

}  // namespace

ResultTable run(const Scenario& s) {
  ResultTable table;
  try {
    switch (s.task) {
      case Task::Bound: table = bound_table(s); break;
      case Task::Compare: table = compare_table(s); break;
      case Task::Sweep: table = sweep_table(s); break;
      case Task::Evolve: table = evolve_table(s); break;
      case Task::Interfere: table = interfere_table(s); break;
      case Task::Reproduce:
        table = run_reproduction(s.options.fixtures.empty() ? default_fixtures_path()
                                                            : resolve(s.base_dir, s.options.fixtures));
        break;
    }
  } catch (const Error& e) {
    // Keep the kind, attach the scenario context.
    throw Error(e.kind(), "scenario '" + s.name + "' (" + task_name(s.task) + "): " + e.what());
  }
  table.add_constant_column("scenario_digest", s.digest);
  table.metadata()["scenario"] = s.name;
  table.metadata()["task"] = task_name(s.task);
  table.metadata()["scenario_digest"] = s.digest;
  table.metadata()["library_version"] = QSL_VERSION;
  table.metadata()["seed"] = std::to_string(s.options.seed);
  return table;
}

namespace {

double uniform_time(std::mt19937_64& gen) {
  // (0, pi]
  return kPi * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(gen));
}

}  // namespace

ResultTable validity_sweep(int dim, int count, std::uint64_t seed) {
  ResultTable table({{"index", ColumnType::Integer},
                     {"dim", ColumnType::Integer},
                     {"rank", ColumnType::Integer},
                     {"t", ColumnType::Real},
                     {"actual_time", ColumnType::Real},
                     {"tl", ColumnType::Real},
                     {"tl_alpha2", ColumnType::Real},
                     {"alpha_max", ColumnType::Real},
                     {"tl_alpha_max", ColumnType::Real},
                     {"mt_fidelity", ColumnType::Real},
                     {"qfi", ColumnType::Real},
                     {"campo", ColumnType::Real},
                     {"campo_intermediate", ColumnType::Real},
                     {"all_valid", ColumnType::Boolean},
                     {"tl_ge_mt", ColumnType::Boolean},
                     {"mt_ge_qfi", ColumnType::Boolean},
                     {"campo_chain", ColumnType::Boolean},
                     {"inputs_digest", ColumnType::Text}});
  std::vector<std::vector<Cell>> rows(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t k) {
    const std::uint64_t s = derive_seed(seed, k);
    std::mt19937_64 gen(s);
    const int rank = 1 + static_cast<int>(k % dim);
    const QuantumState rho1 = random_state(dim, rank, derive_seed(s, 1));
    const Observable h(random_hermitian(dim, derive_seed(s, 2)));
    const double t = uniform_time(gen);
    const QuantumState rho2 = evolve_unitary(rho1, h, t);
    const double actual = first_passage_time(rho1, h, rho2, 1e-9, t);
    const BoundReport r = compute_bound_report(rho1, h, rho2, actual);
    const CampoBound c = campo_bound(rho1, h, rho2);
    const bool chain = c.intermediate >= c.middle - 1e-12 && c.middle >= c.bound - 1e-12;
    rows[k] = {static_cast<std::int64_t>(k), static_cast<std::int64_t>(dim), static_cast<std::int64_t>(rank), t, actual,
               r.tl, r.tl_alpha2, r.tl_alpha_max.alpha, r.tl_alpha_max.value, r.mt_fidelity, r.qfi, r.campo,
               c.intermediate, r.all_valid(), r.tl >= r.mt_fidelity - 1e-10, r.mt_fidelity >= r.qfi - 1e-10, chain,
               r.inputs_digest};
  });
  for (auto& row : rows) table.add_row(std::move(row));
  return table;
}

ResultTable mixing_sweep(const std::map<int, int>& instances, std::uint64_t seed) {
  ResultTable table({{"index", ColumnType::Integer},
                     {"dim", ColumnType::Integer},
                     {"p", ColumnType::Real},
                     {"t", ColumnType::Real},
                     {"lhs", ColumnType::Real},
                     {"rhs", ColumnType::Real},
                     {"holds", ColumnType::Boolean}});
  std::vector<int> dims;
  for (const auto& [dim, count] : instances) dims.insert(dims.end(), count, dim);
  std::vector<std::vector<Cell>> rows(dims.size());
  parallel_for(dims.size(), [&](std::size_t k) {
    const int d = dims[k];
    const std::uint64_t s = derive_seed(seed, k);
    std::mt19937_64 gen(s);
    const QuantumState rho1 = random_state(d, 1 + static_cast<int>(k % d), derive_seed(s, 1));
    const QuantumState sigma1 = random_state(d, 1 + static_cast<int>((k / d) % d), derive_seed(s, 2));
    const Observable h(random_hermitian(d, derive_seed(s, 3)));
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    const double t = uniform_time(gen);
    const InequalityCheck c = mixing_inequality_check(rho1, sigma1, p, h, t);
    rows[k] = {static_cast<std::int64_t>(k), static_cast<std::int64_t>(d), p, t, c.lhs, c.rhs, c.holds};
  });
  for (auto& row : rows) table.add_row(std::move(row));
  return table;
}

ResultTable elimination_sweep(int count, std::uint64_t seed) {
  ResultTable table({{"index", ColumnType::Integer},
                     {"rank", ColumnType::Integer},
                     {"t", ColumnType::Real},
                     {"lhs", ColumnType::Real},
                     {"rhs", ColumnType::Real},
                     {"holds", ColumnType::Boolean}});
  std::vector<std::vector<Cell>> rows(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t k) {
    const std::uint64_t s = derive_seed(seed, k);
    std::mt19937_64 gen(s);
    const int rank = 1 + static_cast<int>(k % 4);
    const QuantumState rho_ab = random_state(4, rank, derive_seed(s, 1));
    const Observable h_a(random_hermitian(2, derive_seed(s, 2)));
    const Observable h_b(random_hermitian(2, derive_seed(s, 3)));
    const double t = uniform_time(gen);
    const InequalityCheck c = elimination_inequality_check(rho_ab, h_a, h_b, t);
    rows[k] = {static_cast<std::int64_t>(k), static_cast<std::int64_t>(rank), t, c.lhs, c.rhs, c.holds};
  });
  for (auto& row : rows) table.add_row(std::move(row));
  return table;
}

ResultTable markovian_curve(double lambda1, const std::vector<double>& taus) {
  const SqueezedVacuumParams params = SqueezedVacuumParams::simple_case(lambda1);
  const LindbladModel model = squeezed_vacuum_model(params);
  const BlochVector r(1.0, 0.0, 0.0);
  const QuantumState rho0 = bloch_to_state(r);

  ResultTable table({{"tau", ColumnType::Real},
                     {"markovian_bound", ColumnType::Real},
                     {"campo_bound", ColumnType::Real},
                     {"closed_form_bound", ColumnType::Real},
                     {"path_length_bound", ColumnType::Real},
                     {"affinity", ColumnType::Real},
                     {"closed_form_affinity", ColumnType::Real},
                     {"mean_speed", ColumnType::Real},
                     {"closed_form_mean_speed", ColumnType::Real},
                     {"bound_le_tau", ColumnType::Boolean},
                     {"exceeds_campo", ColumnType::Boolean}});
  std::vector<std::vector<Cell>> rows(taus.size());
  parallel_for(taus.size(), [&](std::size_t k) {
    const double tau = taus[k];
    const MarkovianBound mb = markovian_bound(rho0, model, tau);
    const Propagator prop(rho0, model);
    const QuantumState rho_tau = prop.at(tau);
    const double campo = campo_bound_lindblad(rho0, model, rho_tau).bound;
    const double closed_aff = affinity_closed_form_markovian(r, params, tau);
    const double closed_speed = markovian_denominator_closed_form(lambda1, tau);
    const double closed_bound = clamped_acos(closed_aff) / closed_speed;

    // Angles between successive sqrt(rho) are a metric: their sum bounds the endpoint angle.
    const std::vector<QuantumState> path = prop.on_grid(TimeGrid{0.0, tau, 401});
    double length = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) length += bargmann_angle(path[i - 1], path[i]);
    const double path_bound = length > 0.0 ? mb.angle * tau / length : 0.0;

    rows[k] = {tau, mb.bound, campo, closed_bound, path_bound, affinity(rho0, rho_tau), closed_aff, mb.mean_speed,
               closed_speed, mb.bound <= tau + 1e-8, mb.bound > campo};
  });
  for (auto& row : rows) table.add_row(std::move(row));

  // Crossover: first tau after which the bound stays above the Campo-style bound.
  std::string crossover = "none";
  for (std::size_t k = table.rows().size(); k-- > 0;) {
    if (!table.boolean(k, "exceeds_campo")) break;
    crossover = format_real(table.real(k, "tau"));
  }
  table.metadata()["lambda1"] = format_real(lambda1);
  table.metadata()["crossover_tau"] = crossover;
  return table;
}

}  // namespace qsl
