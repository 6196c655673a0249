#include "co2net/solution_io.hpp"

#include "co2net/units.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace co2net {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

} // namespace

std::string solution_nodes_csv(const SolutionState &sol) {
  std::ostringstream os;
  os << "id,P_barg,T_C,xCO2,xH2,xO2,xN2\n";
  for (const auto &n : sol.nodes) {
    os << n.id << ',' << num(units::pa_to_barg(n.pressure_pa)) << ','
       << num(units::kelvin_to_celsius(n.temperature_k)) << ','
       << num(n.composition.fraction(Species::CO2)) << ','
       << num(n.composition.fraction(Species::H2)) << ','
       << num(n.composition.fraction(Species::O2)) << ','
       << num(n.composition.fraction(Species::N2)) << '\n';
  }
  return os.str();
}

std::string solution_edges_csv(const SolutionState &sol) {
  std::ostringstream os;
  os << "id,Qm_kgs,vmax_ms,dense_ok\n";
  for (const auto &e : sol.edges) {
    os << e.id << ',' << num(e.mass_flow_kg_s) << ',' << num(e.max_velocity_m_s)
       << ',' << (e.dense_ok ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string solution_geojson(const SolutionState &sol, const Network &net) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  ordered_json features = ordered_json::array();
  for (const auto &n : sol.nodes) {
    const Node &node = net.node(n.id);
    ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Point"}, {"coordinates", {node.lon, node.lat}}};
    ordered_json props;
    props["id"] = n.id;
    props["P_barg"] = units::pa_to_barg(n.pressure_pa);
    props["T_C"] = units::kelvin_to_celsius(n.temperature_k);
    props["xCO2"] = n.composition.fraction(Species::CO2);
    props["xH2"] = n.composition.fraction(Species::H2);
    props["xO2"] = n.composition.fraction(Species::O2);
    props["xN2"] = n.composition.fraction(Species::N2);
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  auto line = [&](const std::string &from, const std::string &to) {
    const Node &a = net.node(from);
    const Node &b = net.node(to);
    ordered_json g;
    g["type"] = "LineString";
    g["coordinates"] = {{a.lon, a.lat}, {b.lon, b.lat}};
    return g;
  };
  for (const auto &e : sol.edges) {
    ordered_json f;
    f["type"] = "Feature";
    for (const auto &p : net.pipes()) {
      if (p.id == e.id) f["geometry"] = line(p.from, p.to);
    }
    for (const auto &p : net.pumps()) {
      if (p.id == e.id) f["geometry"] = line(p.from, p.to);
    }
    ordered_json props;
    props["id"] = e.id;
    props["component"] = e.is_pump ? "pump" : "pipe";
    props["Qm_kgs"] = e.mass_flow_kg_s;
    props["vmax_ms"] = e.max_velocity_m_s;
    props["dense_ok"] = e.dense_ok;
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

std::string phase_nodes_csv(const SolutionState &sol) {
  std::ostringstream os;
  os << "node_id,T_C,P_barg\n";
  for (const auto &n : sol.nodes) {
    os << n.id << ',' << num(units::kelvin_to_celsius(n.temperature_k)) << ','
       << num(units::pa_to_barg(n.pressure_pa)) << '\n';
  }
  return os.str();
}

std::string phase_curve_csv(const Eos &eos, double t_start_k, double step_k) {
  std::ostringstream os;
  os << "T_C,Psat_barg\n";
  const double tc = eos.co2_critical_temperature();
  for (double t = t_start_k; t < tc; t += step_k) {
    os << num(units::kelvin_to_celsius(t)) << ','
       << num(units::pa_to_barg(eos.saturation_pressure(t))) << '\n';
  }
  os << num(units::kelvin_to_celsius(tc)) << ','
     << num(units::pa_to_barg(eos.co2_critical_pressure())) << '\n';
  return os.str();
}

std::string profile_csv(const PipeProfile &profile) {
  std::ostringstream os;
  os << "s_m,P_barg,T_C,rho_kgm3,v_ms,lambda,Re\n";
  for (std::size_t i = 0; i < profile.stations(); ++i) {
    os << num(profile.position_m[i]) << ','
       << num(units::pa_to_barg(profile.pressure_pa[i])) << ','
       << num(units::kelvin_to_celsius(profile.temperature_k[i])) << ','
       << num(profile.density_kg_m3[i]) << ',' << num(profile.velocity_m_s[i])
       << ',' << num(profile.lambda) << ',' << num(profile.re) << '\n';
  }
  return os.str();
}

std::string solution_summary_json(const SolutionState &sol) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json doc;
  const auto &c = sol.convergence;
  doc["converged"] = c.converged;
  doc["outer_iterations"] = c.outer_iterations;
  doc["newton_iterations"] = c.newton_iterations;
  doc["flow_direction_resweeps"] = c.flow_direction_resweeps;
  doc["max_mass_residual_kg_s"] = c.max_mass_residual_kg_s;
  doc["max_pressure_residual_pa"] = c.max_pressure_residual_pa;
  if (!c.message.empty()) doc["message"] = c.message;
  ordered_json flags = ordered_json::array();
  int violations = 0;
  for (const auto &f : sol.phase_flags) {
    ordered_json j;
    j["edge"] = f.edge;
    j["station"] = f.station;
    j["P_barg"] = units::pa_to_barg(f.pressure_pa);
    j["T_C"] = units::kelvin_to_celsius(f.temperature_k);
    j["margin_bar"] = f.margin_pa / 1e5;
    j["severity"] =
        f.severity == PhaseSeverity::Violation ? "violation" : "warning";
    if (f.severity == PhaseSeverity::Violation) ++violations;
    flags.push_back(std::move(j));
  }
  doc["dense_phase_violations"] = violations;
  doc["phase_flags"] = std::move(flags);
  return doc.dump(2) + "\n";
}

} // namespace co2net
