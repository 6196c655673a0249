#pragma once

#include "co2net/network.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace co2net {

/// Great-circle distance [m], spherical Earth R = 6,371,000 m.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

struct SiteRecord {
  enum class Type { Cement, Lime, WasteIncineration, Border, Hub };
  enum class Role { Source, Sink, None };
  Type type = Type::Cement;
  Role role = Role::None;
  double lat = 0.0;
  double lon = 0.0;
  double q_t_per_a = 0.0;
  std::string id; // content-derived, stable across input orderings
};

std::string_view site_type_name(SiteRecord::Type t);
SiteRecord::Type site_type_from_name(std::string_view name);
std::string_view site_role_name(SiteRecord::Role r);
SiteRecord::Role site_role_from_name(std::string_view name);

/// Derives the stable id "<type>_<lat>_<lon>" used for nodes built from
/// this site.
std::string site_id(const SiteRecord &s);

/// Geometric graph of existing transmission corridors. Vertices are
/// deduplicated by coordinate; edges are straight segments with geodesic
/// lengths and a provenance tag.
class CorridorGraph {
public:
  struct Vertex {
    double lat = 0.0;
    double lon = 0.0;
    double h = 0.0;
    std::string id;
  };
  struct Edge {
    std::string id;
    std::size_t a = 0;
    std::size_t b = 0;
    double length_m = 0.0;
    std::string provenance;
  };

  /// Adds (or finds) a vertex; coordinates are quantized to ~1e-7 degrees
  /// for joining shared polyline endpoints.
  std::size_t add_vertex(double lat, double lon, double h = 0.0,
                         const std::string &id_hint = "");
  std::size_t add_edge(std::size_t a, std::size_t b, std::string id,
                       std::string provenance);

  const std::vector<Vertex> &vertices() const { return vertices_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const std::vector<std::vector<std::size_t>> &adjacency() const {
    return adjacency_;
  }
  double total_length_m() const;

  /// Splits edge `edge_index` at parameter t in (0, 1), introducing `vertex`
  /// between its endpoints; the two parts carry lengths t*L and (1-t)*L so
  /// total length is conserved exactly.
  void split_edge(std::size_t edge_index, std::size_t vertex, double t);

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_; // vertex -> edge indices
  std::map<std::pair<long long, long long>, std::size_t> coord_index_;
};

struct SiteConnection {
  std::size_t site_vertex = 0; // vertex holding the site itself
  std::size_t foot_vertex = 0; // nearest point on the corridor
  double stub_length_m = 0.0;
  std::string split_edge_id; // empty when the foot landed on a vertex
};

/// Step one of the topology heuristic: connect the site to the globally
/// nearest point on any corridor segment (perpendicular foot, clamped to
/// the segment), splitting that edge and adding a straight stub. Ties break
/// on smaller distance, then lexicographic edge id.
SiteConnection connect_site(CorridorGraph &g, const SiteRecord &site);

struct RoutePath {
  bool reachable = false;
  std::vector<std::size_t> vertices;
  double length_m = 0.0;
};

/// Shortest path by summed edge length (deterministic tie-break toward the
/// lexicographically smaller predecessor chain).
RoutePath route(const CorridorGraph &g, std::size_t from, std::size_t to);

struct RoutingPlan {
  /// Explicit source-id -> sink-id assignments; sources not listed fall
  /// back to their nearest sink by corridor distance.
  std::vector<std::pair<std::string, std::string>> explicit_pairs;
  /// Uniform starting diameter for emitted pipes.
  std::string initial_dn = "DN700";
  double initial_diameter_m = 0.661;
};

struct BuildReport {
  double total_length_m = 0.0;
  std::map<std::string, int> node_kind_counts;
  std::vector<std::pair<std::string, std::string>> unreachable_pairs;
  std::vector<std::string> warnings;
};

/// Step two: route every source to its assigned sink along the corridors,
/// union the used edges, contract pass-through vertices, and emit the typed
/// network. Unreachable pairs are reported, not fatal.
Network build_network(const std::vector<SiteRecord> &sites, CorridorGraph g,
                      const RoutingPlan &plan, BuildReport *report = nullptr);

struct ScenarioTable {
  double hours_per_year = 8760.0;
  double hub_pressure_barg = 125.0;
  double injection_temperature_c = 10.0;
  Composition composition;
  /// Optional multiplier per site type name (e.g. {"waste_incineration", 1.2}).
  std::map<std::string, double> type_scale;
};

/// Converts site quantities into boundary flows: sources inject their
/// annual rates, sink withdrawals are scaled proportionally to capacity so
/// each component balances exactly, and the largest sink becomes the
/// pressure-reference node. Throws std::runtime_error when the sink
/// capacity cannot absorb the sources.
BoundarySet assign_boundary_flows(const Network &net,
                                  const std::vector<SiteRecord> &sites,
                                  const ScenarioTable &scenario = {});

/// Sites CSV with header `type,role,lat,lon,q_t_per_a`.
std::vector<SiteRecord> parse_sites_csv(const std::string &text);
std::vector<SiteRecord> load_sites_csv(const std::string &path);

/// Corridor GeoJSON: a FeatureCollection of LineStrings; degenerate
/// features are skipped with a warning.
CorridorGraph parse_corridors_geojson(const std::string &text,
                                      std::vector<std::string> *warnings);
CorridorGraph load_corridors_geojson(const std::string &path,
                                     std::vector<std::string> *warnings);

std::string build_report_json(const BuildReport &report);

} // namespace co2net
