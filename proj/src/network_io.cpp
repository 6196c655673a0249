#include "co2net/network_io.hpp"

#include "co2net/units.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace co2net {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

namespace {

ordered_json point_feature(const Node &n) {
  ordered_json f;
  f["type"] = "Feature";
  f["geometry"] = {{"type", "Point"}, {"coordinates", {n.lon, n.lat}}};
  ordered_json props;
  props["component"] = "node";
  props["id"] = n.id;
  props["kind"] = std::string(node_kind_name(n.kind));
  props["h"] = n.elevation_m;
  f["properties"] = std::move(props);
  return f;
}

ordered_json line_geometry(const Network &net, const std::string &from,
                           const std::string &to) {
  const Node &a = net.node(from);
  const Node &b = net.node(to);
  ordered_json g;
  g["type"] = "LineString";
  g["coordinates"] = {{a.lon, a.lat}, {b.lon, b.lat}};
  return g;
}

} // namespace

std::string network_to_geojson(const Network &net) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  ordered_json features = ordered_json::array();
  for (const auto &n : net.nodes()) features.push_back(point_feature(n));
  for (const auto &p : net.pipes()) {
    ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = line_geometry(net, p.from, p.to);
    ordered_json props;
    props["component"] = "pipe";
    props["id"] = p.id;
    props["from"] = p.from;
    props["to"] = p.to;
    props["length_m"] = p.length_m;
    props["diameter_m"] = p.diameter_m;
    props["roughness_m"] = p.roughness_m;
    props["heat_transfer_w_m2k"] = p.heat_transfer_w_m2k;
    props["soil_temperature_k"] = p.soil_temperature_k;
    if (!p.dn_label.empty()) props["dn_label"] = p.dn_label;
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  for (const auto &p : net.pumps()) {
    ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = line_geometry(net, p.from, p.to);
    ordered_json props;
    props["component"] = "pump";
    props["id"] = p.id;
    props["from"] = p.from;
    props["to"] = p.to;
    props["mode"] = std::string(pump_mode_name(p.mode));
    props["setpoint_pa"] = p.setpoint_pa;
    props["setpoint_barg"] = units::pa_to_barg(p.setpoint_pa);
    props["cooler_out_k"] = p.cooler_out_k;
    props["enabled"] = p.enabled;
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

Network network_from_geojson(const std::string &text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("network GeoJSON: invalid JSON: ") + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
    throw ParseError("network GeoJSON: expected a FeatureCollection");
  }
  Network net;
  std::size_t index = 0;
  // Two passes so edges can resolve nodes regardless of feature order.
  for (const auto &f : doc["features"]) {
    const auto &props = f.at("properties");
    if (props.value("component", "") != "node") continue;
    Node n;
    n.id = props.at("id").get<std::string>();
    n.kind = node_kind_from_name(props.value("kind", "junction"));
    n.elevation_m = props.value("h", 0.0);
    const auto &coords = f.at("geometry").at("coordinates");
    n.lon = coords.at(0).get<double>();
    n.lat = coords.at(1).get<double>();
    net.add_node(std::move(n));
  }
  for (const auto &f : doc["features"]) {
    ++index;
    const auto &props = f.at("properties");
    const std::string component = props.value("component", "");
    try {
      if (component == "pipe") {
        Pipe p;
        p.id = props.at("id").get<std::string>();
        p.from = props.at("from").get<std::string>();
        p.to = props.at("to").get<std::string>();
        p.length_m = props.at("length_m").get<double>();
        p.diameter_m = props.at("diameter_m").get<double>();
        p.roughness_m = props.value("roughness_m", 3.6e-5);
        p.heat_transfer_w_m2k = props.value("heat_transfer_w_m2k", 2.0);
        p.soil_temperature_k = props.value("soil_temperature_k", 283.15);
        p.dn_label = props.value("dn_label", "");
        net.add_pipe(std::move(p));
      } else if (component == "pump") {
        Pump p;
        p.id = props.at("id").get<std::string>();
        p.from = props.at("from").get<std::string>();
        p.to = props.at("to").get<std::string>();
        p.mode = pump_mode_from_name(
            props.value("mode", "outlet_setpoint"));
        p.setpoint_pa = props.at("setpoint_pa").get<double>();
        p.cooler_out_k = props.value("cooler_out_k", 283.15);
        p.enabled = props.value("enabled", true);
        net.add_pump(std::move(p));
      }
    } catch (const nlohmann::json::exception &e) {
      throw ParseError("network GeoJSON: feature " + std::to_string(index) +
                       ": " + e.what());
    }
  }
  return net;
}

void save_network_geojson(const Network &net, const std::string &path) {
  write_file(path, network_to_geojson(net));
}

Network load_network_geojson(const std::string &path) {
  return network_from_geojson(read_file(path));
}

namespace {

ordered_json composition_to_json(const Composition &c) {
  ordered_json j;
  j["co2"] = c.fraction(Species::CO2);
  j["h2"] = c.fraction(Species::H2);
  j["o2"] = c.fraction(Species::O2);
  j["n2"] = c.fraction(Species::N2);
  return j;
}

Composition composition_from_json(const ordered_json &j) {
  std::array<double, kSpeciesCount> x = {
      j.value("co2", 0.0), j.value("h2", 0.0), j.value("o2", 0.0),
      j.value("n2", 0.0)};
  return Composition(x);
}

} // namespace

std::string boundary_to_json(const BoundarySet &bounds) {
  ordered_json doc;
  ordered_json refs = ordered_json::array();
  for (const auto &r : bounds.references) {
    ordered_json j;
    j["node"] = r.node;
    j["pressure_barg"] = units::pa_to_barg(r.pressure_pa);
    j["temperature_c"] = units::kelvin_to_celsius(r.injection_temperature_k);
    j["composition"] = composition_to_json(r.composition);
    refs.push_back(std::move(j));
  }
  doc["references"] = std::move(refs);
  ordered_json flows = ordered_json::array();
  for (const auto &f : bounds.flows) {
    ordered_json j;
    j["node"] = f.node;
    j["rate_kg_s"] = f.mass_rate_kg_s;
    j["temperature_c"] = units::kelvin_to_celsius(f.injection_temperature_k);
    j["composition"] = composition_to_json(f.composition);
    flows.push_back(std::move(j));
  }
  doc["flows"] = std::move(flows);
  return doc.dump(2) + "\n";
}

BoundarySet boundary_from_json(const std::string &text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("boundary JSON: invalid JSON: ") + e.what());
  }
  BoundarySet bounds;
  try {
    for (const auto &j : doc.value("references", ordered_json::array())) {
      PressureReference r;
      r.node = j.at("node").get<std::string>();
      if (j.contains("pressure_pa")) {
        r.pressure_pa = j["pressure_pa"].get<double>();
      } else {
        r.pressure_pa = units::barg_to_pa(j.at("pressure_barg").get<double>());
      }
      if (j.contains("temperature_c")) {
        r.injection_temperature_k =
            units::celsius_to_kelvin(j["temperature_c"].get<double>());
      }
      if (j.contains("composition")) {
        r.composition = composition_from_json(j["composition"]);
      }
      bounds.references.push_back(std::move(r));
    }
    for (const auto &j : doc.value("flows", ordered_json::array())) {
      BoundaryFlow f;
      f.node = j.at("node").get<std::string>();
      if (j.contains("rate_kg_s")) {
        f.mass_rate_kg_s = j["rate_kg_s"].get<double>();
      } else if (j.contains("q_t_per_a")) {
        f.mass_rate_kg_s = mass_rate_from_annual(j["q_t_per_a"].get<double>());
      } else {
        throw ParseError("boundary JSON: flow needs rate_kg_s or q_t_per_a");
      }
      if (j.contains("temperature_c")) {
        f.injection_temperature_k =
            units::celsius_to_kelvin(j["temperature_c"].get<double>());
      }
      if (j.contains("composition")) {
        f.composition = composition_from_json(j["composition"]);
      }
      bounds.flows.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("boundary JSON: ") + e.what());
  }
  return bounds;
}

void save_boundary_json(const BoundarySet &bounds, const std::string &path) {
  write_file(path, boundary_to_json(bounds));
}

BoundarySet load_boundary_json(const std::string &path) {
  return boundary_from_json(read_file(path));
}

} // namespace co2net
