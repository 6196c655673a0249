#pragma once

#include "co2net/composition.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace co2net {

enum class NodeKind { Junction, Source, Sink, Hub, Border };

std::string_view node_kind_name(NodeKind k);
NodeKind node_kind_from_name(std::string_view name);

struct Node {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  double elevation_m = 0.0;
  NodeKind kind = NodeKind::Junction;
};

struct Pipe {
  std::string id;
  std::string from;
  std::string to;
  double length_m = 0.0;
  double diameter_m = 0.0;
  double roughness_m = 3.6e-5;
  double heat_transfer_w_m2k = 2.0;
  double soil_temperature_k = 283.15;
  std::string dn_label; // optional catalog tag
};

enum class PumpMode { OutletSetpoint, InletSetpoint };

std::string_view pump_mode_name(PumpMode m);
PumpMode pump_mode_from_name(std::string_view name);

/// Free pump: raises (or holds) the pressure on one side straight to the
/// setpoint, no characteristic curve; the after-cooler pins the outlet
/// temperature.
struct Pump {
  std::string id;
  std::string from;
  std::string to;
  PumpMode mode = PumpMode::OutletSetpoint;
  double setpoint_pa = 0.0;     // absolute
  double cooler_out_k = 283.15; // 10 C default, 45 C ceiling
  bool enabled = true;
};

struct BoundaryFlow {
  std::string node;
  double mass_rate_kg_s = 0.0; // positive = injection
  Composition composition;
  double injection_temperature_k = 283.15;
};

struct PressureReference {
  std::string node;
  double pressure_pa = 0.0; // absolute
  Composition composition;  // used when the reference node injects
  double injection_temperature_k = 283.15;
};

/// Boundary conditions for one solve: fixed mass rates everywhere except
/// exactly one pressure-reference node per connected component, which
/// absorbs the component's imbalance.
struct BoundarySet {
  std::vector<PressureReference> references;
  std::vector<BoundaryFlow> flows;
};

struct Violation {
  std::string code;
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Typed pipeline graph. Mutation happens through add_*; queries are const
/// and the object is cheap to share read-only once built.
class Network {
public:
  void add_node(Node n);
  void add_pipe(Pipe p);
  void add_pump(Pump p);

  const std::vector<Node> &nodes() const { return nodes_; }
  const std::vector<Pipe> &pipes() const { return pipes_; }
  const std::vector<Pump> &pumps() const { return pumps_; }

  std::vector<Pipe> &mutable_pipes() { return pipes_; }
  std::vector<Pump> &mutable_pumps() { return pumps_; }
  std::vector<Node> &mutable_nodes() { return nodes_; }

  bool has_node(const std::string &id) const;
  const Node &node(const std::string &id) const;
  std::optional<std::size_t> node_index(const std::string &id) const;

  /// Component label per node index; labels are dense from zero.
  std::vector<int> connected_components() const;

private:
  std::vector<Node> nodes_;
  std::vector<Pipe> pipes_;
  std::vector<Pump> pumps_;
  std::map<std::string, std::size_t> node_index_;
};

/// Report-only structural and envelope checks; the network is simulatable
/// iff the report is empty.
ValidationReport validate(const Network &net, const BoundarySet &bounds);

/// Annual tonnage to continuous mass rate: q * 1000 / (hours * 3600).
double mass_rate_from_annual(double tonnes_per_year,
                             double hours_per_year = 8760.0);

} // namespace co2net
