#include "co2net.h"

#include "co2net/design.hpp"
#include "co2net/network_io.hpp"
#include "co2net/solution_io.hpp"
#include "co2net/solver.hpp"
#include "co2net/topology.hpp"
#include "co2net/units.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <memory>
#include <string>

struct co2net_network {
  co2net::Network net;
};

struct co2net_solution {
  co2net::SolutionState sol;
  co2net::Network net;
  std::shared_ptr<const co2net::Eos> eos;
};

namespace {

thread_local std::string g_last_error;

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn> co2net_status guarded(Fn &&fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const co2net::ParseError &e) {
    g_last_error = e.what();
    return CO2NET_ERR_PARSE;
  } catch (const co2net::IoError &e) {
    g_last_error = e.what();
    return CO2NET_ERR_IO;
  } catch (const co2net::EosError &e) {
    g_last_error = e.what();
    return CO2NET_ERR_EOS;
  } catch (const co2net::SingularError &e) {
    g_last_error = e.what();
    return CO2NET_ERR_SINGULAR;
  } catch (const co2net::ConvergenceError &e) {
    g_last_error = std::string(e.what()) + " (worst residual at " +
                   e.worst_residual_location + ")";
    return CO2NET_ERR_NO_CONVERGENCE;
  } catch (const co2net::DesignError &e) {
    g_last_error = e.what();
    for (const auto &edge : e.offending_edges) g_last_error += " " + edge;
    return CO2NET_ERR_INFEASIBLE;
  } catch (const std::invalid_argument &e) {
    g_last_error = e.what();
    return CO2NET_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error &e) {
    g_last_error = e.what();
    return CO2NET_ERR_INVALID_ARGUMENT;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return CO2NET_ERR_INTERNAL;
  }
}

co2net::Composition composition_from_json(const nlohmann::json &j) {
  std::array<double, co2net::kSpeciesCount> x = {
      j.value("co2", 0.0), j.value("h2", 0.0), j.value("o2", 0.0),
      j.value("n2", 0.0)};
  return co2net::Composition(x);
}

std::shared_ptr<const co2net::Eos> eos_from_options(const nlohmann::json &opts) {
  if (opts.contains("eos_file")) {
    const std::string text =
        co2net::read_file(opts["eos_file"].get<std::string>());
    return std::make_shared<co2net::CubicEos>(
        co2net::eos_parameters_from_json(text));
  }
  if (opts.contains("eos")) {
    return std::make_shared<co2net::CubicEos>(
        co2net::eos_parameters_from_json(opts["eos"].dump()));
  }
  return co2net::make_default_eos();
}

co2net::SolverConfig solver_config_from_json(const nlohmann::json &opts) {
  co2net::SolverConfig cfg;
  cfg.rel_tol = opts.value("rel_tol", cfg.rel_tol);
  cfg.abs_tol_flow = opts.value("abs_tol_flow", cfg.abs_tol_flow);
  cfg.max_outer_iterations =
      opts.value("max_outer_iterations", cfg.max_outer_iterations);
  cfg.max_newton_iterations =
      opts.value("max_newton_iterations", cfg.max_newton_iterations);
  cfg.damping = opts.value("damping", cfg.damping);
  cfg.step_m = opts.value("step_m", cfg.step_m);
  if (opts.contains("friction")) {
    const std::string f = opts["friction"].get<std::string>();
    if (f == "hofer") {
      cfg.friction = co2net::FrictionModel::Hofer;
    } else if (f == "nikuradse") {
      cfg.friction = co2net::FrictionModel::Nikuradse;
    } else {
      throw std::invalid_argument("unknown friction model: " + f);
    }
  }
  cfg.viscosity_pa_s = opts.value("viscosity_pa_s", cfg.viscosity_pa_s);
  if (opts.contains("dense_warning_margin_bar")) {
    cfg.dense_warning_margin_pa =
        opts["dense_warning_margin_bar"].get<double>() * 1e5;
  }
  cfg.flat_elevation = opts.value("flat_elevation", cfg.flat_elevation);
  if (opts.contains("initial_pressure_barg")) {
    cfg.initial_pressure_pa =
        co2net::units::barg_to_pa(opts["initial_pressure_barg"].get<double>());
  }
  return cfg;
}

nlohmann::json parse_options(const char *options_json) {
  if (!options_json || !*options_json) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(options_json);
  } catch (const nlohmann::json::exception &e) {
    throw co2net::ParseError(std::string("options JSON: ") + e.what());
  }
}

co2net::BoundarySet boundary_with_overrides(const char *boundary_json,
                                            const nlohmann::json &opts) {
  if (!boundary_json) {
    throw std::invalid_argument("boundary JSON is required");
  }
  co2net::BoundarySet bounds = co2net::boundary_from_json(boundary_json);
  if (opts.contains("composition_override")) {
    const co2net::Composition c =
        composition_from_json(opts["composition_override"]);
    for (auto &r : bounds.references) r.composition = c;
    for (auto &f : bounds.flows) f.composition = c;
  }
  return bounds;
}

co2net::DiameterCatalog catalog_from_options(const nlohmann::json &opts) {
  const std::string name = opts.value("catalog", "default");
  if (name == "default") return co2net::DiameterCatalog::defaults();
  if (name == "ait") return co2net::DiameterCatalog::ait();
  throw std::invalid_argument("unknown catalog preset: " + name);
}

co2net::EnvelopeConfig envelope_from_options(const nlohmann::json &opts) {
  co2net::EnvelopeConfig env;
  if (opts.contains("p_min_barg")) {
    env.p_min_pa = co2net::units::barg_to_pa(opts["p_min_barg"].get<double>());
  }
  if (opts.contains("p_max_barg")) {
    env.p_max_pa = co2net::units::barg_to_pa(opts["p_max_barg"].get<double>());
  }
  if (opts.contains("pump_outlet_barg")) {
    env.pump_outlet_pa =
        co2net::units::barg_to_pa(opts["pump_outlet_barg"].get<double>());
  }
  if (opts.contains("cooler_initial_c")) {
    env.cooler_initial_k =
        co2net::units::celsius_to_kelvin(opts["cooler_initial_c"].get<double>());
  }
  if (opts.contains("cooler_max_c")) {
    env.cooler_max_k =
        co2net::units::celsius_to_kelvin(opts["cooler_max_c"].get<double>());
  }
  env.cooler_step_k = opts.value("cooler_step_k", env.cooler_step_k);
  env.target_velocity_m_s =
      opts.value("target_velocity_m_s", env.target_velocity_m_s);
  return env;
}

} // namespace

extern "C" {

const char *co2net_version(void) { return "0.1.0"; }

const char *co2net_status_name(co2net_status status) {
  switch (status) {
  case CO2NET_OK: return "ok";
  case CO2NET_ERR_INVALID_ARGUMENT: return "invalid_argument";
  case CO2NET_ERR_IO: return "io_error";
  case CO2NET_ERR_PARSE: return "parse_error";
  case CO2NET_ERR_VALIDATION: return "validation_error";
  case CO2NET_ERR_EOS: return "eos_error";
  case CO2NET_ERR_SINGULAR: return "singular_system";
  case CO2NET_ERR_NO_CONVERGENCE: return "no_convergence";
  case CO2NET_ERR_UNREACHABLE: return "unreachable_pairs";
  case CO2NET_ERR_DENSE_PHASE: return "dense_phase_violation";
  case CO2NET_ERR_INFEASIBLE: return "infeasible_design";
  case CO2NET_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char *co2net_last_error(void) { return g_last_error.c_str(); }

void co2net_string_free(char *s) { std::free(s); }

void co2net_network_free(co2net_network *net) { delete net; }

void co2net_solution_free(co2net_solution *sol) { delete sol; }

co2net_status co2net_saturation_pressure(double temperature_k,
                                         double *pressure_pa) {
  return guarded([&]() -> co2net_status {
    if (!pressure_pa) throw std::invalid_argument("pressure_pa is null");
    const auto eos = co2net::make_default_eos();
    *pressure_pa = eos->saturation_pressure(temperature_k);
    return CO2NET_OK;
  });
}

co2net_status co2net_fluid_state(double pressure_pa, double temperature_k,
                                 const double mole_fractions[4],
                                 double *density_kg_m3, double *enthalpy_j_kg,
                                 double *z_factor,
                                 double *joule_thomson_k_pa) {
  return guarded([&]() -> co2net_status {
    if (!mole_fractions) throw std::invalid_argument("mole_fractions is null");
    const co2net::Composition c({mole_fractions[0], mole_fractions[1],
                                 mole_fractions[2], mole_fractions[3]});
    const auto eos = co2net::make_default_eos();
    const co2net::FluidState s = eos->state(pressure_pa, temperature_k, c);
    if (density_kg_m3) *density_kg_m3 = s.density_kg_m3;
    if (enthalpy_j_kg) *enthalpy_j_kg = s.enthalpy_j_kg;
    if (z_factor) *z_factor = s.z_factor;
    if (joule_thomson_k_pa) *joule_thomson_k_pa = s.joule_thomson_k_pa;
    return CO2NET_OK;
  });
}

co2net_status co2net_is_dense(double pressure_pa, double temperature_k,
                              int *dense) {
  return guarded([&]() -> co2net_status {
    if (!dense) throw std::invalid_argument("dense is null");
    const auto eos = co2net::make_default_eos();
    *dense = eos->is_dense(pressure_pa, temperature_k) ? 1 : 0;
    return CO2NET_OK;
  });
}

co2net_status co2net_network_load(const char *geojson_path,
                                  co2net_network **out) {
  return guarded([&]() -> co2net_status {
    if (!geojson_path || !out) {
      throw std::invalid_argument("null argument to co2net_network_load");
    }
    auto handle = std::make_unique<co2net_network>();
    handle->net = co2net::load_network_geojson(geojson_path);
    *out = handle.release();
    return CO2NET_OK;
  });
}

co2net_status co2net_network_save(const co2net_network *net,
                                  const char *geojson_path) {
  return guarded([&]() -> co2net_status {
    if (!net || !geojson_path) {
      throw std::invalid_argument("null argument to co2net_network_save");
    }
    co2net::save_network_geojson(net->net, geojson_path);
    return CO2NET_OK;
  });
}

co2net_status co2net_network_validate(const co2net_network *net,
                                      const char *boundary_json,
                                      char **report_json) {
  return guarded([&]() -> co2net_status {
    if (!net || !report_json) {
      throw std::invalid_argument("null argument to co2net_network_validate");
    }
    co2net::BoundarySet bounds;
    if (boundary_json && *boundary_json) {
      bounds = co2net::boundary_from_json(boundary_json);
    }
    const auto report = co2net::validate(net->net, bounds);
    nlohmann::ordered_json doc;
    doc["ok"] = report.ok();
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto &v : report.violations) {
      list.push_back({{"code", v.code}, {"what", v.what}});
    }
    doc["violations"] = std::move(list);
    *report_json = dup_string(doc.dump(2) + "\n");
    return CO2NET_OK;
  });
}

co2net_status co2net_build_topology(const char *sites_csv_path,
                                    const char *corridors_geojson_path,
                                    const char *options_json,
                                    co2net_network **out_network,
                                    char **out_boundary_json,
                                    char **out_report_json) {
  return guarded([&]() -> co2net_status {
    if (!sites_csv_path || !corridors_geojson_path || !out_network) {
      throw std::invalid_argument("null argument to co2net_build_topology");
    }
    const nlohmann::json opts = parse_options(options_json);

    const auto sites = co2net::load_sites_csv(sites_csv_path);
    std::vector<std::string> warnings;
    co2net::CorridorGraph corridors =
        co2net::load_corridors_geojson(corridors_geojson_path, &warnings);

    co2net::RoutingPlan plan;
    plan.initial_dn = opts.value("initial_dn", plan.initial_dn);
    {
      const auto catalog = co2net::DiameterCatalog::defaults();
      if (const auto *e = catalog.find(plan.initial_dn)) {
        plan.initial_diameter_m = e->inner_d_m;
      }
    }
    if (opts.contains("assignments")) {
      for (const auto &pair : opts["assignments"]) {
        plan.explicit_pairs.push_back(
            {pair.at(0).get<std::string>(), pair.at(1).get<std::string>()});
      }
    }

    co2net::BuildReport report;
    report.warnings = warnings;
    co2net::Network net =
        co2net::build_network(sites, std::move(corridors), plan, &report);

    co2net::ScenarioTable scenario;
    scenario.hours_per_year = opts.value("hours_per_year", 8760.0);
    scenario.hub_pressure_barg = opts.value("hub_pressure_barg", 125.0);
    scenario.injection_temperature_c =
        opts.value("injection_temperature_c", 10.0);
    if (opts.contains("composition")) {
      scenario.composition = composition_from_json(opts["composition"]);
    }
    if (opts.contains("type_scale")) {
      for (const auto &[key, value] : opts["type_scale"].items()) {
        scenario.type_scale[key] = value.get<double>();
      }
    }
    const co2net::BoundarySet bounds =
        co2net::assign_boundary_flows(net, sites, scenario);

    auto handle = std::make_unique<co2net_network>();
    handle->net = std::move(net);
    *out_network = handle.release();
    if (out_boundary_json) {
      *out_boundary_json = dup_string(co2net::boundary_to_json(bounds));
    }
    if (out_report_json) {
      *out_report_json = dup_string(co2net::build_report_json(report));
    }
    return report.unreachable_pairs.empty() ? CO2NET_OK
                                            : CO2NET_ERR_UNREACHABLE;
  });
}

co2net_status co2net_solve(const co2net_network *net, const char *boundary_json,
                           const char *options_json, co2net_solution **out) {
  return guarded([&]() -> co2net_status {
    if (!net || !out) throw std::invalid_argument("null argument to co2net_solve");
    const nlohmann::json opts = parse_options(options_json);
    const co2net::BoundarySet bounds = boundary_with_overrides(boundary_json, opts);

    const auto report = co2net::validate(net->net, bounds);
    if (!report.ok()) {
      std::string msg = "network fails validation:";
      for (const auto &v : report.violations) msg += " [" + v.code + "] " + v.what;
      g_last_error = msg;
      return CO2NET_ERR_VALIDATION;
    }

    const auto eos = eos_from_options(opts);
    const co2net::SolverConfig cfg = solver_config_from_json(opts);
    auto handle = std::make_unique<co2net_solution>();
    handle->sol = co2net::solve_steady_state(*eos, net->net, bounds, cfg);
    handle->net = net->net;
    handle->eos = eos;
    const bool violations = handle->sol.has_violations();
    *out = handle.release();
    if (violations) {
      g_last_error = "solution leaves the dense phase at flagged stations";
      return CO2NET_ERR_DENSE_PHASE;
    }
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_summary(const co2net_solution *sol,
                                      char **summary_json) {
  return guarded([&]() -> co2net_status {
    if (!sol || !summary_json) throw std::invalid_argument("null argument");
    *summary_json = dup_string(co2net::solution_summary_json(sol->sol));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_nodes_csv(const co2net_solution *sol, char **csv) {
  return guarded([&]() -> co2net_status {
    if (!sol || !csv) throw std::invalid_argument("null argument");
    *csv = dup_string(co2net::solution_nodes_csv(sol->sol));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_edges_csv(const co2net_solution *sol, char **csv) {
  return guarded([&]() -> co2net_status {
    if (!sol || !csv) throw std::invalid_argument("null argument");
    *csv = dup_string(co2net::solution_edges_csv(sol->sol));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_geojson(const co2net_solution *sol,
                                      char **geojson) {
  return guarded([&]() -> co2net_status {
    if (!sol || !geojson) throw std::invalid_argument("null argument");
    *geojson = dup_string(co2net::solution_geojson(sol->sol, sol->net));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_phase_nodes_csv(const co2net_solution *sol,
                                              char **csv) {
  return guarded([&]() -> co2net_status {
    if (!sol || !csv) throw std::invalid_argument("null argument");
    *csv = dup_string(co2net::phase_nodes_csv(sol->sol));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_phase_curve_csv(const co2net_solution *sol,
                                              char **csv) {
  return guarded([&]() -> co2net_status {
    if (!sol || !csv) throw std::invalid_argument("null argument");
    *csv = dup_string(co2net::phase_curve_csv(*sol->eos));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_profile_csv(const co2net_solution *sol,
                                          const char *edge_id, char **csv) {
  return guarded([&]() -> co2net_status {
    if (!sol || !edge_id || !csv) throw std::invalid_argument("null argument");
    const auto &edge = sol->sol.edge(edge_id);
    if (edge.is_pump) {
      throw std::invalid_argument("edge " + std::string(edge_id) +
                                  " is a pump; no profile");
    }
    *csv = dup_string(co2net::profile_csv(edge.profile));
    return CO2NET_OK;
  });
}

co2net_status co2net_solution_edge_ids(const co2net_solution *sol,
                                       char **ids_json) {
  return guarded([&]() -> co2net_status {
    if (!sol || !ids_json) throw std::invalid_argument("null argument");
    nlohmann::json ids = nlohmann::json::array();
    for (const auto &e : sol->sol.edges) {
      if (!e.is_pump) ids.push_back(e.id);
    }
    *ids_json = dup_string(ids.dump() + "\n");
    return CO2NET_OK;
  });
}

co2net_status co2net_design(const co2net_network *net, const char *boundary_json,
                            const char *options_json,
                            co2net_network **out_network, char **out_cost_json) {
  return guarded([&]() -> co2net_status {
    if (!net || !out_network) {
      throw std::invalid_argument("null argument to co2net_design");
    }
    const nlohmann::json opts = parse_options(options_json);
    const co2net::DiameterCatalog catalog = catalog_from_options(opts);
    const co2net::EnvelopeConfig env = envelope_from_options(opts);
    const double pump_cost = opts.value("pump_station_cost_eur", 7.5e6);

    auto handle = std::make_unique<co2net_network>();

    if (opts.contains("uniform_dn")) {
      // Cost-table reproduction mode: stamp one DN everywhere, keep the
      // pump set as-is, skip the design loop entirely.
      const std::string dn = opts["uniform_dn"].get<std::string>();
      const co2net::DiameterEntry *entry = catalog.find(dn);
      if (!entry) throw std::invalid_argument("uniform_dn: unknown label " + dn);
      handle->net = net->net;
      for (auto &pipe : handle->net.mutable_pipes()) {
        pipe.dn_label = entry->dn_label;
        pipe.diameter_m = entry->inner_d_m;
      }
      const co2net::CostReport report =
          co2net::cost_report(handle->net, catalog, pump_cost);
      *out_network = handle.release();
      if (out_cost_json) {
        *out_cost_json = dup_string(co2net::cost_report_json(report));
      }
      return CO2NET_OK;
    }

    const nlohmann::json solver_opts =
        opts.value("solver", nlohmann::json::object());
    const co2net::BoundarySet bounds =
        boundary_with_overrides(boundary_json, solver_opts);
    const auto eos = eos_from_options(solver_opts);
    const co2net::SolverConfig cfg = solver_config_from_json(solver_opts);

    const co2net::SolutionState presolve =
        co2net::design_presolve(*eos, net->net, bounds, env, cfg);
    co2net::Network designed = co2net::assign_diameters(
        *eos, net->net, presolve, catalog, env, cfg, bounds);
    designed = co2net::place_pumps(*eos, std::move(designed), bounds, catalog,
                                   env, cfg);
    designed =
        co2net::relax_cooling(*eos, std::move(designed), bounds, env, cfg);
    const co2net::CostReport report =
        co2net::cost_report(designed, catalog, pump_cost);

    handle->net = std::move(designed);
    *out_network = handle.release();
    if (out_cost_json) {
      *out_cost_json = dup_string(co2net::cost_report_json(report));
    }
    return CO2NET_OK;
  });
}

co2net_status co2net_cost_report(const co2net_network *net,
                                 const char *options_json,
                                 char **out_cost_json) {
  return guarded([&]() -> co2net_status {
    if (!net || !out_cost_json) throw std::invalid_argument("null argument");
    const nlohmann::json opts = parse_options(options_json);
    const co2net::DiameterCatalog catalog = catalog_from_options(opts);
    const double pump_cost = opts.value("pump_station_cost_eur", 7.5e6);
    const co2net::CostReport report =
        co2net::cost_report(net->net, catalog, pump_cost);
    *out_cost_json = dup_string(co2net::cost_report_json(report));
    return CO2NET_OK;
  });
}

co2net_status co2net_cost_table(const char *cost_json, char **out_text) {
  return guarded([&]() -> co2net_status {
    if (!cost_json || !out_text) throw std::invalid_argument("null argument");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(cost_json);
    } catch (const nlohmann::json::exception &e) {
      throw co2net::ParseError(std::string("cost JSON: ") + e.what());
    }
    co2net::CostReport report;
    if (doc.contains("length_by_dn_m")) {
      for (const auto &[dn, len] : doc["length_by_dn_m"].items()) {
        report.length_by_dn_m[dn] = len.get<double>();
      }
    }
    report.pipeline_cost_eur = doc.value("pipeline_cost_eur", 0.0);
    report.pump_count = doc.value("pump_count", 0);
    report.pump_station_cost_eur = doc.value("pump_station_cost_eur", 7.5e6);
    report.pump_cost_eur = doc.value("pump_cost_eur", 0.0);
    report.total_eur = doc.value("total_eur", 0.0);
    if (doc.contains("notes")) {
      for (const auto &n : doc["notes"]) report.notes.push_back(n.get<std::string>());
    }
    *out_text = dup_string(co2net::cost_report_table(report));
    return CO2NET_OK;
  });
}

} // extern "C"
