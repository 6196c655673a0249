#include "co2net/network.hpp"

#include "co2net/units.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace co2net {

std::string_view node_kind_name(NodeKind k) {
  switch (k) {
  case NodeKind::Junction: return "junction";
  case NodeKind::Source: return "source";
  case NodeKind::Sink: return "sink";
  case NodeKind::Hub: return "hub";
  case NodeKind::Border: return "border";
  }
  return "junction";
}

NodeKind node_kind_from_name(std::string_view name) {
  if (name == "junction") return NodeKind::Junction;
  if (name == "source") return NodeKind::Source;
  if (name == "sink") return NodeKind::Sink;
  if (name == "hub") return NodeKind::Hub;
  if (name == "border") return NodeKind::Border;
  throw std::invalid_argument("unknown node kind: " + std::string(name));
}

std::string_view pump_mode_name(PumpMode m) {
  return m == PumpMode::OutletSetpoint ? "outlet_setpoint" : "inlet_setpoint";
}

PumpMode pump_mode_from_name(std::string_view name) {
  if (name == "outlet_setpoint") return PumpMode::OutletSetpoint;
  if (name == "inlet_setpoint") return PumpMode::InletSetpoint;
  throw std::invalid_argument("unknown pump mode: " + std::string(name));
}

void Network::add_node(Node n) {
  if (node_index_.count(n.id)) {
    throw std::invalid_argument("Network: duplicate node id " + n.id);
  }
  node_index_[n.id] = nodes_.size();
  nodes_.push_back(std::move(n));
}

void Network::add_pipe(Pipe p) { pipes_.push_back(std::move(p)); }

void Network::add_pump(Pump p) { pumps_.push_back(std::move(p)); }

bool Network::has_node(const std::string &id) const {
  return node_index_.count(id) > 0;
}

const Node &Network::node(const std::string &id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) {
    throw std::invalid_argument("Network: unknown node id " + id);
  }
  return nodes_[it->second];
}

std::optional<std::size_t> Network::node_index(const std::string &id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Network::connected_components() const {
  std::vector<int> parent(nodes_.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](const std::string &u, const std::string &v) {
    auto iu = node_index(u);
    auto iv = node_index(v);
    if (!iu || !iv) return;
    int ru = find(static_cast<int>(*iu));
    int rv = find(static_cast<int>(*iv));
    if (ru != rv) parent[ru] = rv;
  };
  for (const auto &p : pipes_) unite(p.from, p.to);
  for (const auto &p : pumps_) unite(p.from, p.to);
  std::map<int, int> labels;
  std::vector<int> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    int root = find(static_cast<int>(i));
    auto [it, inserted] = labels.emplace(root, static_cast<int>(labels.size()));
    out[i] = it->second;
  }
  return out;
}

ValidationReport validate(const Network &net, const BoundarySet &bounds) {
  ValidationReport report;
  auto add = [&](std::string code, std::string what) {
    report.violations.push_back({std::move(code), std::move(what)});
  };

  for (const auto &n : net.nodes()) {
    if (n.lat < -90.0 || n.lat > 90.0 || n.lon < -180.0 || n.lon > 180.0) {
      add("bad_coordinates", "node " + n.id + " has out-of-range lat/lon");
    }
    if (!std::isfinite(n.elevation_m)) {
      add("bad_elevation", "node " + n.id + " has non-finite elevation");
    }
  }

  std::set<std::string> edge_ids;
  auto check_edge_id = [&](const std::string &id) {
    if (!edge_ids.insert(id).second) {
      add("duplicate_edge_id", "edge id " + id + " appears more than once");
    }
  };

  bool dangling = false;
  for (const auto &p : net.pipes()) {
    check_edge_id(p.id);
    if (!net.has_node(p.from) || !net.has_node(p.to)) {
      add("dangling_edge", "pipe " + p.id + " references an unknown node");
      dangling = true;
      continue;
    }
    if (!(p.length_m > 0.0)) add("bad_pipe", "pipe " + p.id + " has L <= 0");
    if (!(p.diameter_m > 0.0)) add("bad_pipe", "pipe " + p.id + " has D <= 0");
    if (p.roughness_m < 0.0) add("bad_pipe", "pipe " + p.id + " has k < 0");
    if (p.roughness_m >= p.diameter_m && p.diameter_m > 0.0) {
      add("bad_pipe", "pipe " + p.id + " has roughness >= diameter");
    }
    if (p.heat_transfer_w_m2k < 0.0) {
      add("bad_pipe", "pipe " + p.id + " has c_h < 0");
    }
  }

  std::set<std::pair<std::string, std::string>> pump_pairs;
  for (const auto &p : net.pumps()) {
    check_edge_id(p.id);
    if (!net.has_node(p.from) || !net.has_node(p.to)) {
      add("dangling_edge", "pump " + p.id + " references an unknown node");
      dangling = true;
      continue;
    }
    auto key = std::minmax(p.from, p.to);
    if (!pump_pairs.insert({key.first, key.second}).second) {
      add("parallel_pumps",
          "duplicate pump between " + p.from + " and " + p.to);
    }
    if (p.enabled) {
      const double barg = units::pa_to_barg(p.setpoint_pa);
      if (barg < 85.0 - 1e-9 || barg > 180.0 + 1e-9) {
        add("pump_envelope", "pump " + p.id + " setpoint outside [85,180] barg");
      }
      if (p.cooler_out_k < 283.15 - 1e-9 || p.cooler_out_k > 318.15 + 1e-9) {
        add("pump_envelope",
            "pump " + p.id + " cooler outside [10,45] C");
      }
    }
  }

  for (const auto &f : bounds.flows) {
    if (!net.has_node(f.node)) {
      add("unknown_boundary_node",
          "boundary flow references unknown node " + f.node);
    }
  }

  std::set<std::string> ref_nodes;
  for (const auto &r : bounds.references) {
    if (!net.has_node(r.node)) {
      add("unknown_boundary_node",
          "pressure reference on unknown node " + r.node);
      continue;
    }
    if (!ref_nodes.insert(r.node).second) {
      add("over_constrained", "node " + r.node + " referenced twice");
    }
  }
  for (const auto &f : bounds.flows) {
    if (ref_nodes.count(f.node)) {
      add("over_constrained",
          "reference node " + f.node + " also carries a fixed rate");
    }
  }

  if (!dangling) {
    const auto comps = net.connected_components();
    int ncomp = 0;
    for (int c : comps) ncomp = std::max(ncomp, c + 1);
    std::vector<int> refs_per_comp(ncomp, 0);
    for (const auto &r : bounds.references) {
      auto idx = net.node_index(r.node);
      if (idx) refs_per_comp[comps[*idx]]++;
    }
    for (int c = 0; c < ncomp; ++c) {
      if (refs_per_comp[c] == 0) {
        add("missing_reference",
            "connected component " + std::to_string(c) +
                " has no pressure-reference node");
      } else if (refs_per_comp[c] > 1) {
        add("over_constrained",
            "connected component " + std::to_string(c) +
                " has more than one pressure-reference node");
      }
    }
  }

  return report;
}

double mass_rate_from_annual(double tonnes_per_year, double hours_per_year) {
  if (tonnes_per_year < 0.0) {
    throw std::domain_error("mass_rate_from_annual: negative quantity");
  }
  return tonnes_per_year * 1000.0 / (hours_per_year * 3600.0);
}

} // namespace co2net
