#include "qsl/reproduce.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "qsl/coherence_metrics.hpp"
#include "qsl/dynamics.hpp"
#include "qsl/interferometry.hpp"
#include "qsl/qsl_bounds.hpp"
#include "qsl/scenario.hpp"

#ifndef QSL_DATA_DIR
#define QSL_DATA_DIR "data"
#endif

namespace qsl {

namespace {

constexpr double kPi = std::numbers::pi;

WorkedCase make_case(const Vector3& r, const Vector3& n, double a) {
  const Observable h = bloch_hamiltonian(n, 1.0, 0.0, 1.0);
  const QuantumState rho1 = bloch_to_state(BlochVector(r));
  QuantumState rho2 = evolve_unitary(rho1, h, a);
  return {rho1, std::move(rho2), h, r, n, a};
}

}  // namespace

WorkedCase worked_case(int which) {
  const double s2 = std::sqrt(2.0);
  switch (which) {
    case 1: return make_case({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, kPi / 2.0);
    case 2: return make_case({1.0 / s2, 0.0, 1.0 / s2}, {0.0, 0.0, 1.0}, 3.0 * kPi / 4.0);
    case 3:
      return make_case({0.0, 0.0, 0.5}, {1.0 / s2, 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0)},
                       0.5 * std::atan2(0.8, -0.6));
    default: fail(ErrorKind::ValidationError, "worked case must be 1, 2 or 3");
  }
}

MixingExample mixing_example() {
  const Observable h = bloch_hamiltonian({0.0, 0.0, 1.0}, 1.0, 0.0, 1.0);
  return {bloch_to_state(BlochVector(1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0))),
          bloch_to_state(BlochVector(-0.5, 0.0, std::sqrt(3.0) / 2.0)), h, 1.0 / 3.0};
}

std::string default_fixtures_path() { return std::string(QSL_DATA_DIR) + "/paper_values.json"; }

namespace {

using Computations = std::map<std::string, std::function<double()>>;

double as_flag(bool b) { return b ? 1.0 : 0.0; }

Computations computations() {
  Computations c;
  c["case1_tl"] = [] {
    const WorkedCase w = worked_case(1);
    return tl_bound(w.rho1, w.h, w.rho2);
  };
  c["case1_overlap"] = [] {
    const WorkedCase w = worked_case(1);
    return w.r.dot(state_to_bloch(w.rho2).r);
  };
  c["case2_tl"] = [] {
    const WorkedCase w = worked_case(2);
    return tl_bound(w.rho1, w.h, w.rho2);
  };
  c["case2_tl_closed_form"] = c["case2_tl"];
  c["case3_tl"] = [] {
    const WorkedCase w = worked_case(3);
    return tl_bound(w.rho1, w.h, w.rho2);
  };
  c["case3_affinity"] = [] {
    const WorkedCase w = worked_case(3);
    return affinity(w.rho1, w.rho2);
  };
  c["case3_coherence"] = [] {
    const WorkedCase w = worked_case(3);
    return wy_coherence(w.rho1, w.h);
  };
  c["case3_target_reached"] = [] {
    const WorkedCase w = worked_case(3);
    const Vector3 stated(-4.0 * std::sqrt(3.0) / 15.0, std::sqrt(2.0) / 15.0, -1.0 / 6.0);
    return (state_to_bloch(w.rho2).r - stated).norm();
  };
  c["case3_tl_ge_mt"] = [] {
    const WorkedCase w = worked_case(3);
    return as_flag(tl_bound(w.rho1, w.h, w.rho2) >= mt_fidelity_bound(w.rho1, w.h, w.rho2));
  };
  c["case3_tl_ge_qfi"] = [] {
    const WorkedCase w = worked_case(3);
    return as_flag(tl_bound(w.rho1, w.h, w.rho2) >= qfi_bound(w.rho1, w.h, w.rho2));
  };
  c["mixing_witness"] = [] { return std::sqrt(1.0 / 3.0) * 0.43 + std::sqrt(2.0 / 3.0) * 0.42; };
  c["mixing_grid_failures"] = [] {
    const MixingExample m = mixing_example();
    int failures = 0;
    for (int k = 1; k <= 628; ++k)
      if (!mixing_inequality_check(m.rho1, m.sigma1, m.p, m.h, 0.01 * k).holds) ++failures;
    return static_cast<double>(failures);
  };
  c["mixing_triple_fit"] = [] {
    const MixingExample m = mixing_example();
    const QuantumState gamma1 = QuantumState::from_matrix(m.p * m.rho1.matrix() + (1.0 - m.p) * m.sigma1.matrix());
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 6283; ++k) {
      const double a = 0.001 * k;
      const auto u = [&](const QuantumState& s) { return u_quantity(s, m.h, evolve_unitary(s, m.h, a)); };
      const double dev = std::max({std::abs(u(m.rho1) - 0.43), std::abs(u(m.sigma1) - 0.42), std::abs(u(gamma1) - 0.34)});
      best = std::min(best, dev);
    }
    return best;
  };
  c["markovian_affinity_closed_form"] = [] {
    const SqueezedVacuumParams p = SqueezedVacuumParams::simple_case(-0.9);
    const LindbladModel model = squeezed_vacuum_model(p);
    const BlochVector r(1.0, 0.0, 0.0);
    const QuantumState rho0 = bloch_to_state(r);
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double tau = 0.1 * k;
      worst = std::max(worst, std::abs(affinity(rho0, evolve_lindblad(rho0, model, tau)) -
                                       affinity_closed_form_markovian(r, p, tau)));
    }
    return worst;
  };
  c["markovian_bound_le_tau"] = [] {
    std::vector<double> taus;
    for (int k = 1; k <= 50; ++k) taus.push_back(0.1 * k);
    const ResultTable t = markovian_curve(-0.9, taus);
    int bad = 0;
    for (std::size_t i = 0; i < t.rows().size(); ++i)
      if (!t.boolean(i, "bound_le_tau")) ++bad;
    return static_cast<double>(bad);
  };
  c["markovian_exceeds_campo"] = [] {
    const ResultTable t = markovian_curve(-0.9, {5.0});
    return as_flag(t.boolean(0, "exceeds_campo"));
  };
  c["interferometry_case3_exact"] = [] {
    const WorkedCase w = worked_case(3);
    const ProtocolEstimate e = estimate_tl_from_protocol(w.rho1, w.h, w.a, std::nullopt, 0);
    return std::abs(e.tl - tl_bound(w.rho1, w.h, w.rho2));
  };
  return c;
}

bool compare(const std::string& how, double computed, double expected, double tol) {
  if (how == "abs") return std::abs(computed - expected) <= tol;
  if (how == "ge") return computed >= expected - tol;
  if (how == "le") return computed <= expected + tol;
  if (how == "true") return computed == 1.0;
  return false;
}

}  // namespace

ResultTable run_reproduction(const std::string& fixtures_path) {
  std::ifstream in(fixtures_path);
  if (!in) fail(ErrorKind::IoError, "cannot read fixtures '" + fixtures_path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, fixtures_path + ": " + e.what());
  }
  if (!doc.contains("entries") || !doc["entries"].is_array())
    fail(ErrorKind::ValidationError, "entries: missing in " + fixtures_path);

  const Computations comp = computations();
  ResultTable table({{"id", ColumnType::Text},
                     {"description", ColumnType::Text},
                     {"computed", ColumnType::Real},
                     {"expected", ColumnType::Real},
                     {"tolerance", ColumnType::Real},
                     {"comparison", ColumnType::Text},
                     {"gating", ColumnType::Boolean},
                     {"passed", ColumnType::Boolean}});
  std::size_t k = 0;
  for (const auto& e : doc["entries"]) {
    const std::string path = "entries[" + std::to_string(k++) + "]";
    std::string id, how, desc;
    double expected = 0.0, tol = 0.0;
    bool gating = false;
    try {
      id = e.at("id").get<std::string>();
      desc = e.value("description", "");
      expected = e.at("expected").get<double>();
      tol = e.at("tolerance").get<double>();
      how = e.at("comparison").get<std::string>();
      gating = e.value("gating", true);
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorKind::ValidationError, path + ": " + ex.what());
    }
    if (how == "excluded") {
      table.add_row({id, desc, std::numeric_limits<double>::quiet_NaN(), expected, tol, how, false, false});
      continue;
    }
    const auto it = comp.find(id);
    if (it == comp.end()) fail(ErrorKind::ValidationError, path + ".id: no computation named '" + id + "'");
    const double computed = it->second();
    table.add_row({id, desc, computed, expected, tol, how, gating, compare(how, computed, expected, tol)});
  }
  table.metadata()["fixtures"] = fixtures_path;
  table.metadata()["fixtures_version"] = std::to_string(doc.value("version", 0));
  return table;
}

bool reproduction_passed(const ResultTable& table) {
  for (std::size_t i = 0; i < table.rows().size(); ++i)
    if (table.boolean(i, "gating") && !table.boolean(i, "passed")) return false;
  return true;
}

}  // namespace qsl
