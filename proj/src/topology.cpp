#include "co2net/topology.hpp"

#include "co2net/network_io.hpp"
#include "co2net/units.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace co2net {

namespace {
constexpr double kEarthRadiusM = 6371000.0;

double deg2rad(double d) { return d * units::kPi / 180.0; }
} // namespace

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  const double dlat = deg2rad(lat2 - lat1);
  const double dlon = deg2rad(lon2 - lon1);
  const double sa = std::sin(dlat / 2.0);
  const double sb = std::sin(dlon / 2.0);
  double h = sa * sa + sb * sb * std::cos(deg2rad(lat1)) * std::cos(deg2rad(lat2));
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

std::string_view site_type_name(SiteRecord::Type t) {
  switch (t) {
  case SiteRecord::Type::Cement: return "cement";
  case SiteRecord::Type::Lime: return "lime";
  case SiteRecord::Type::WasteIncineration: return "waste_incineration";
  case SiteRecord::Type::Border: return "border";
  case SiteRecord::Type::Hub: return "hub";
  }
  return "cement";
}

SiteRecord::Type site_type_from_name(std::string_view name) {
  if (name == "cement" || name == "Cement plant") return SiteRecord::Type::Cement;
  if (name == "lime" || name == "Lime plant") return SiteRecord::Type::Lime;
  if (name == "waste_incineration" || name == "Waste incineration") {
    return SiteRecord::Type::WasteIncineration;
  }
  if (name == "border" || name == "Border transfer point") {
    return SiteRecord::Type::Border;
  }
  if (name == "hub" || name == "Hub") return SiteRecord::Type::Hub;
  throw std::invalid_argument("unknown site type: " + std::string(name));
}

std::string_view site_role_name(SiteRecord::Role r) {
  switch (r) {
  case SiteRecord::Role::Source: return "source";
  case SiteRecord::Role::Sink: return "sink";
  case SiteRecord::Role::None: return "none";
  }
  return "none";
}

SiteRecord::Role site_role_from_name(std::string_view name) {
  if (name == "source") return SiteRecord::Role::Source;
  if (name == "sink") return SiteRecord::Role::Sink;
  if (name == "none" || name == "--" || name.empty()) return SiteRecord::Role::None;
  throw std::invalid_argument("unknown site role: " + std::string(name));
}

std::string site_id(const SiteRecord &s) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s_%.5f_%.5f",
                std::string(site_type_name(s.type)).c_str(), s.lat, s.lon);
  return buf;
}

std::size_t CorridorGraph::add_vertex(double lat, double lon, double h,
                                      const std::string &id_hint) {
  const auto key = std::make_pair(
      static_cast<long long>(std::llround(lat * 1e7)),
      static_cast<long long>(std::llround(lon * 1e7)));
  auto it = coord_index_.find(key);
  if (it != coord_index_.end()) return it->second;
  Vertex v{lat, lon, h,
           id_hint.empty() ? "v" + std::to_string(vertices_.size()) : id_hint};
  coord_index_[key] = vertices_.size();
  vertices_.push_back(std::move(v));
  adjacency_.emplace_back();
  return vertices_.size() - 1;
}

std::size_t CorridorGraph::add_edge(std::size_t a, std::size_t b, std::string id,
                                    std::string provenance) {
  Edge e{std::move(id), a, b,
         haversine_m(vertices_[a].lat, vertices_[a].lon, vertices_[b].lat,
                     vertices_[b].lon),
         std::move(provenance)};
  edges_.push_back(std::move(e));
  adjacency_[a].push_back(edges_.size() - 1);
  adjacency_[b].push_back(edges_.size() - 1);
  return edges_.size() - 1;
}

double CorridorGraph::total_length_m() const {
  double total = 0.0;
  for (const auto &e : edges_) total += e.length_m;
  return total;
}

void CorridorGraph::split_edge(std::size_t edge_index, std::size_t vertex,
                               double t) {
  Edge original = edges_[edge_index];
  // Proportional sub-lengths conserve the corridor length exactly.
  const double len_a = t * original.length_m;
  const double len_b = (1.0 - t) * original.length_m;

  auto detach = [&](std::size_t v) {
    auto &adj = adjacency_[v];
    adj.erase(std::remove(adj.begin(), adj.end(), edge_index), adj.end());
  };
  detach(original.a);
  detach(original.b);

  edges_[edge_index] =
      Edge{original.id + "_a", original.a, vertex, len_a, original.provenance};
  adjacency_[original.a].push_back(edge_index);
  adjacency_[vertex].push_back(edge_index);

  edges_.push_back(
      Edge{original.id + "_b", vertex, original.b, len_b, original.provenance});
  adjacency_[vertex].push_back(edges_.size() - 1);
  adjacency_[original.b].push_back(edges_.size() - 1);
}

namespace {

struct FootCandidate {
  double distance_m = std::numeric_limits<double>::infinity();
  std::size_t edge = 0;
  double t = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  std::string edge_id;
};

/// Perpendicular foot on the segment in a local equirectangular plane
/// centered at the site; accurate to well under 0.1% at stub scales.
FootCandidate project_onto_edge(const CorridorGraph &g, std::size_t edge_index,
                                const SiteRecord &site) {
  const auto &e = g.edges()[edge_index];
  const auto &a = g.vertices()[e.a];
  const auto &b = g.vertices()[e.b];
  const double coslat = std::cos(deg2rad(site.lat));
  const double ax = kEarthRadiusM * coslat * deg2rad(a.lon - site.lon);
  const double ay = kEarthRadiusM * deg2rad(a.lat - site.lat);
  const double bx = kEarthRadiusM * coslat * deg2rad(b.lon - site.lon);
  const double by = kEarthRadiusM * deg2rad(b.lat - site.lat);
  const double dx = bx - ax;
  const double dy = by - ay;
  const double denom = dx * dx + dy * dy;
  double t = 0.0;
  if (denom > 0.0) t = std::clamp(-(ax * dx + ay * dy) / denom, 0.0, 1.0);
  FootCandidate c;
  c.edge = edge_index;
  c.t = t;
  c.lat = a.lat + t * (b.lat - a.lat);
  c.lon = a.lon + t * (b.lon - a.lon);
  c.distance_m = haversine_m(site.lat, site.lon, c.lat, c.lon);
  c.edge_id = e.id;
  return c;
}

} // namespace

SiteConnection connect_site(CorridorGraph &g, const SiteRecord &site) {
  if (g.edges().empty()) {
    throw std::invalid_argument("connect_site: corridor graph has no edges");
  }
  FootCandidate best;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    FootCandidate c = project_onto_edge(g, e, site);
    const bool closer = c.distance_m < best.distance_m - 1e-6;
    const bool tied = std::abs(c.distance_m - best.distance_m) <= 1e-6;
    if (closer || (tied && c.edge_id < best.edge_id)) best = c;
  }

  const auto &edge = g.edges()[best.edge];
  const double snap_m = 0.05;
  SiteConnection conn;

  std::size_t foot;
  if (best.t * edge.length_m < snap_m) {
    foot = edge.a;
  } else if ((1.0 - best.t) * edge.length_m < snap_m) {
    foot = edge.b;
  } else {
    const std::string sid = site.id.empty() ? site_id(site) : site.id;
    foot = g.add_vertex(best.lat, best.lon, 0.0, sid + "_tap");
    g.split_edge(best.edge, foot, best.t);
    conn.split_edge_id = edge.id;
  }
  conn.foot_vertex = foot;
  conn.stub_length_m = best.distance_m;

  if (best.distance_m < snap_m) {
    // Site sits on the corridor; it adopts the foot vertex, no stub.
    conn.site_vertex = foot;
    conn.stub_length_m = 0.0;
    return conn;
  }
  const std::string sid = site.id.empty() ? site_id(site) : site.id;
  conn.site_vertex = g.add_vertex(site.lat, site.lon, 0.0, sid);
  g.add_edge(conn.site_vertex, foot, sid + "_stub", "stub");
  return conn;
}

namespace {

struct DijkstraResult {
  std::vector<double> dist;
  std::vector<int> pred_vertex;
  std::vector<int> pred_edge;
};

DijkstraResult dijkstra(const CorridorGraph &g, std::size_t from) {
  const std::size_t n = g.vertices().size();
  DijkstraResult r;
  r.dist.assign(n, std::numeric_limits<double>::infinity());
  r.pred_vertex.assign(n, -1);
  r.pred_edge.assign(n, -1);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  r.dist[from] = 0.0;
  pq.push({0.0, from});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > r.dist[u]) continue;
    for (std::size_t ei : g.adjacency()[u]) {
      const auto &e = g.edges()[ei];
      const std::size_t v = e.a == u ? e.b : e.a;
      const double nd = d + e.length_m;
      if (nd < r.dist[v]) {
        r.dist[v] = nd;
        r.pred_vertex[v] = static_cast<int>(u);
        r.pred_edge[v] = static_cast<int>(ei);
        pq.push({nd, v});
      } else if (nd == r.dist[v] && r.pred_vertex[v] >= 0 &&
                 g.vertices()[u].id <
                     g.vertices()[static_cast<std::size_t>(r.pred_vertex[v])].id) {
        // Equal length: prefer the lexicographically smaller predecessor so
        // the chosen vertex sequence is deterministic.
        r.pred_vertex[v] = static_cast<int>(u);
        r.pred_edge[v] = static_cast<int>(ei);
        pq.push({nd, v});
      }
    }
  }
  return r;
}

} // namespace

RoutePath route(const CorridorGraph &g, std::size_t from, std::size_t to) {
  RoutePath path;
  if (from == to) {
    path.reachable = true;
    path.vertices = {from};
    return path;
  }
  const DijkstraResult r = dijkstra(g, from);
  if (!std::isfinite(r.dist[to])) return path;
  path.reachable = true;
  path.length_m = r.dist[to];
  for (int v = static_cast<int>(to); v >= 0; v = r.pred_vertex[static_cast<std::size_t>(v)]) {
    path.vertices.push_back(static_cast<std::size_t>(v));
    if (static_cast<std::size_t>(v) == from) break;
  }
  std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

Network build_network(const std::vector<SiteRecord> &sites, CorridorGraph g,
                      const RoutingPlan &plan, BuildReport *report) {
  BuildReport local_report;
  BuildReport &rep = report ? *report : local_report;

  // Stable processing order regardless of the input listing.
  std::vector<SiteRecord> ordered = sites;
  for (auto &s : ordered) {
    if (s.id.empty()) s.id = site_id(s);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const SiteRecord &a, const SiteRecord &b) { return a.id < b.id; });

  std::map<std::string, std::size_t> site_vertex;
  std::map<std::size_t, const SiteRecord *> vertex_site;
  for (const auto &s : ordered) {
    const SiteConnection conn = connect_site(g, s);
    site_vertex[s.id] = conn.site_vertex;
    if (vertex_site.count(conn.site_vertex)) {
      rep.warnings.push_back("sites " + vertex_site[conn.site_vertex]->id +
                             " and " + s.id + " share one network vertex");
    }
    vertex_site[conn.site_vertex] = &s;
  }

  std::map<std::string, std::string> assigned;
  for (const auto &[src, dst] : plan.explicit_pairs) assigned[src] = dst;

  std::set<std::size_t> used_edges;
  std::set<std::size_t> terminal_vertices;
  for (const auto &s : ordered) {
    if (s.role == SiteRecord::Role::Sink) {
      terminal_vertices.insert(site_vertex[s.id]);
    }
  }

  for (const auto &s : ordered) {
    if (s.role != SiteRecord::Role::Source) continue;
    const std::size_t from = site_vertex[s.id];
    const DijkstraResult dr = dijkstra(g, from);

    std::string target_id;
    if (auto it = assigned.find(s.id); it != assigned.end()) {
      target_id = it->second;
      if (!site_vertex.count(target_id)) {
        rep.warnings.push_back("assignment for " + s.id +
                               " names unknown sink " + target_id);
        target_id.clear();
      }
    }
    if (target_id.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &t : ordered) {
        if (t.role != SiteRecord::Role::Sink) continue;
        const double d = dr.dist[site_vertex[t.id]];
        if (d < best || (d == best && !target_id.empty() && t.id < target_id)) {
          best = d;
          target_id = t.id;
        }
      }
    }
    if (target_id.empty() ||
        !std::isfinite(dr.dist[site_vertex[target_id]])) {
      rep.unreachable_pairs.push_back({s.id, target_id.empty() ? "*" : target_id});
      continue;
    }
    terminal_vertices.insert(from);
    for (int v = static_cast<int>(site_vertex[target_id]);
         dr.pred_edge[static_cast<std::size_t>(v)] >= 0;
         v = dr.pred_vertex[static_cast<std::size_t>(v)]) {
      used_edges.insert(
          static_cast<std::size_t>(dr.pred_edge[static_cast<std::size_t>(v)]));
    }
  }

  // Contractable working copy of the used subgraph.
  struct WorkEdge {
    std::size_t a, b;
    double length;
    std::string min_id;
    bool alive = true;
  };
  std::vector<WorkEdge> work;
  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t ei : used_edges) {
    const auto &e = g.edges()[ei];
    work.push_back({e.a, e.b, e.length_m, e.id, true});
    incident[e.a].push_back(work.size() - 1);
    incident[e.b].push_back(work.size() - 1);
  }

  // Contract pass-through vertices: degree exactly two, no site identity.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto &[v, list] : incident) {
      if (terminal_vertices.count(v) || vertex_site.count(v)) continue;
      std::vector<std::size_t> alive;
      for (std::size_t w : list) {
        if (work[w].alive) alive.push_back(w);
      }
      if (alive.size() != 2) continue;
      WorkEdge &e1 = work[alive[0]];
      WorkEdge &e2 = work[alive[1]];
      const std::size_t other1 = e1.a == v ? e1.b : e1.a;
      const std::size_t other2 = e2.a == v ? e2.b : e2.a;
      if (other1 == other2) continue; // keep the cycle intact
      e1.a = other1;
      e1.b = other2;
      e1.length += e2.length;
      e1.min_id = std::min(e1.min_id, e2.min_id);
      e2.alive = false;
      incident[other2].push_back(alive[0]);
      list.clear();
      changed = true;
    }
  }

  // Emit the typed network.
  Network net;
  std::set<std::size_t> final_vertices;
  for (const auto &e : work) {
    if (!e.alive) continue;
    final_vertices.insert(e.a);
    final_vertices.insert(e.b);
  }
  auto node_id_of = [&](std::size_t v) {
    auto it = vertex_site.find(v);
    if (it != vertex_site.end()) return it->second->id;
    return g.vertices()[v].id;
  };
  for (std::size_t v : final_vertices) {
    Node n;
    n.id = node_id_of(v);
    n.lat = g.vertices()[v].lat;
    n.lon = g.vertices()[v].lon;
    n.elevation_m = g.vertices()[v].h;
    auto it = vertex_site.find(v);
    if (it != vertex_site.end()) {
      switch (it->second->type) {
      case SiteRecord::Type::Hub: n.kind = NodeKind::Hub; break;
      case SiteRecord::Type::Border: n.kind = NodeKind::Border; break;
      default:
        n.kind = it->second->role == SiteRecord::Role::Sink ? NodeKind::Sink
                                                            : NodeKind::Source;
      }
    }
    net.add_node(std::move(n));
  }

  struct FinalEdge {
    std::string from, to, min_id;
    double length;
  };
  std::vector<FinalEdge> finals;
  for (const auto &e : work) {
    if (!e.alive) continue;
    std::string ia = node_id_of(e.a), ib = node_id_of(e.b);
    if (ib < ia) std::swap(ia, ib);
    finals.push_back({ia, ib, e.min_id, e.length});
  }
  std::sort(finals.begin(), finals.end(), [](const FinalEdge &x, const FinalEdge &y) {
    return std::tie(x.from, x.to, x.min_id) < std::tie(y.from, y.to, y.min_id);
  });
  double total = 0.0;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    Pipe p;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "p%04zu", i);
    p.id = buf;
    p.from = finals[i].from;
    p.to = finals[i].to;
    p.length_m = finals[i].length;
    p.diameter_m = plan.initial_diameter_m;
    p.dn_label = plan.initial_dn;
    total += p.length_m;
    net.add_pipe(std::move(p));
  }

  rep.total_length_m = total;
  for (const auto &n : net.nodes()) {
    rep.node_kind_counts[std::string(node_kind_name(n.kind))]++;
  }
  return net;
}

BoundarySet assign_boundary_flows(const Network &net,
                                  const std::vector<SiteRecord> &sites,
                                  const ScenarioTable &scenario) {
  BoundarySet bounds;
  const auto comps = net.connected_components();
  int ncomp = 0;
  for (int c : comps) ncomp = std::max(ncomp, c + 1);

  const double t_in = units::celsius_to_kelvin(scenario.injection_temperature_c);

  struct SinkInfo {
    std::string id;
    double capacity = 0.0;
    int component = 0;
  };
  std::vector<double> injected(ncomp, 0.0);
  std::vector<double> capacity(ncomp, 0.0);
  std::vector<SinkInfo> sinks;

  for (const auto &raw : sites) {
    SiteRecord s = raw;
    if (s.id.empty()) s.id = site_id(s);
    const auto idx = net.node_index(s.id);
    if (!idx) continue; // not part of the routed network
    const int comp = comps[*idx];
    double q = s.q_t_per_a;
    if (auto it = scenario.type_scale.find(std::string(site_type_name(s.type)));
        it != scenario.type_scale.end()) {
      q *= it->second;
    }
    if (s.role == SiteRecord::Role::Source && q > 0.0) {
      BoundaryFlow f;
      f.node = s.id;
      f.mass_rate_kg_s = mass_rate_from_annual(q, scenario.hours_per_year);
      f.composition = scenario.composition;
      f.injection_temperature_k = t_in;
      bounds.flows.push_back(std::move(f));
      injected[comp] += q;
    } else if (s.role == SiteRecord::Role::Sink) {
      sinks.push_back({s.id, q, comp});
      capacity[comp] += q;
    }
  }

  for (int c = 0; c < ncomp; ++c) {
    if (injected[c] <= 0.0 && capacity[c] <= 0.0) continue;
    if (injected[c] > capacity[c]) {
      std::ostringstream os;
      os << "assign_boundary_flows: component " << c << " injects "
         << injected[c] << " t/a but sink capacity is only " << capacity[c]
         << " t/a (shortfall " << injected[c] - capacity[c] << ")";
      throw std::runtime_error(os.str());
    }
    if (capacity[c] > 0.0 && injected[c] <= 0.0) {
      // Sinks with nothing to absorb: still need the pressure anchor.
    }
    // Largest-capacity sink anchors the component; ties go to the
    // lexicographically smaller id.
    const SinkInfo *anchor = nullptr;
    for (const auto &s : sinks) {
      if (s.component != c) continue;
      if (!anchor || s.capacity > anchor->capacity ||
          (s.capacity == anchor->capacity && s.id < anchor->id)) {
        anchor = &s;
      }
    }
    if (!anchor) {
      throw std::runtime_error(
          "assign_boundary_flows: component " + std::to_string(c) +
          " has sources but no sink to anchor the pressure");
    }
    PressureReference ref;
    ref.node = anchor->id;
    ref.pressure_pa = units::barg_to_pa(scenario.hub_pressure_barg);
    ref.composition = scenario.composition;
    ref.injection_temperature_k = t_in;
    bounds.references.push_back(std::move(ref));

    const double scale = capacity[c] > 0.0 ? injected[c] / capacity[c] : 0.0;
    for (const auto &s : sinks) {
      if (s.component != c || s.id == anchor->id) continue;
      if (s.capacity <= 0.0) continue;
      BoundaryFlow f;
      f.node = s.id;
      f.mass_rate_kg_s =
          -mass_rate_from_annual(s.capacity * scale, scenario.hours_per_year);
      f.composition = scenario.composition;
      f.injection_temperature_k = t_in;
      bounds.flows.push_back(std::move(f));
    }
  }
  return bounds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

} // namespace

std::vector<SiteRecord> parse_sites_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("sites CSV: empty file");
  }
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"type", "role", "lat", "lon",
                                             "q_t_per_a"};
  if (header.size() != expected.size()) {
    throw ParseError("sites CSV: expected header type,role,lat,lon,q_t_per_a");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (trim(header[i]) != expected[i]) {
      throw ParseError("sites CSV: expected header type,role,lat,lon,q_t_per_a");
    }
  }
  std::vector<SiteRecord> sites;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) {
      throw ParseError("sites CSV: line " + std::to_string(line_no) +
                       ": expected 5 columns");
    }
    try {
      SiteRecord s;
      s.type = site_type_from_name(trim(cells[0]));
      s.role = site_role_from_name(trim(cells[1]));
      s.lat = std::stod(trim(cells[2]));
      s.lon = std::stod(trim(cells[3]));
      s.q_t_per_a = std::stod(trim(cells[4]));
      if (s.q_t_per_a < 0.0) {
        throw std::invalid_argument("negative quantity");
      }
      s.id = site_id(s);
      sites.push_back(std::move(s));
    } catch (const std::exception &e) {
      throw ParseError("sites CSV: line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return sites;
}

std::vector<SiteRecord> load_sites_csv(const std::string &path) {
  return parse_sites_csv(read_file(path));
}

CorridorGraph parse_corridors_geojson(const std::string &text,
                                      std::vector<std::string> *warnings) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("corridor GeoJSON: invalid JSON: ") + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
    throw ParseError("corridor GeoJSON: expected a FeatureCollection");
  }
  CorridorGraph g;
  std::size_t findex = 0;
  for (const auto &f : doc["features"]) {
    const std::size_t fi = findex++;
    const auto &geom = f.value("geometry", nlohmann::json::object());
    if (geom.value("type", "") != "LineString") {
      if (warnings) {
        warnings->push_back("feature " + std::to_string(fi) +
                            ": not a LineString, skipped");
      }
      continue;
    }
    const auto &coords = geom.value("coordinates", nlohmann::json::array());
    if (coords.size() < 2) {
      if (warnings) {
        warnings->push_back("feature " + std::to_string(fi) +
                            ": dangling LineString with fewer than two points, skipped");
      }
      continue;
    }
    std::size_t prev = 0;
    bool have_prev = false;
    std::size_t seg = 0;
    for (const auto &c : coords) {
      if (!c.is_array() || c.size() < 2) {
        throw ParseError("corridor GeoJSON: feature " + std::to_string(fi) +
                         ": malformed coordinate");
      }
      const double lon = c[0].get<double>();
      const double lat = c[1].get<double>();
      const double h = c.size() > 2 ? c[2].get<double>() : 0.0;
      const std::size_t v = g.add_vertex(lat, lon, h);
      if (have_prev) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "c%04zu_s%03zu", fi, seg++);
        if (v != prev) g.add_edge(prev, v, buf, "corridor");
      }
      prev = v;
      have_prev = true;
    }
  }
  return g;
}

CorridorGraph load_corridors_geojson(const std::string &path,
                                     std::vector<std::string> *warnings) {
  return parse_corridors_geojson(read_file(path), warnings);
}

std::string build_report_json(const BuildReport &report) {
  nlohmann::ordered_json doc;
  doc["total_length_m"] = report.total_length_m;
  doc["total_length_km"] = report.total_length_m / 1000.0;
  doc["node_kind_counts"] = report.node_kind_counts;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto &[a, b] : report.unreachable_pairs) {
    pairs.push_back({{"source", a}, {"sink", b}});
  }
  doc["unreachable_pairs"] = std::move(pairs);
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

} // namespace co2net
