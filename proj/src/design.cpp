#include "co2net/design.hpp"

#include "co2net/units.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace co2net {

DiameterCatalog DiameterCatalog::defaults() {
  DiameterCatalog c;
  c.entries = {{"DN400", 0.378, 2200.0, false},
               {"DN500", 0.468, 2500.0, false},
               {"DN700", 0.661, 3000.0, false},
               {"DN900", 0.882, 3500.0, true}};
  return c;
}

DiameterCatalog DiameterCatalog::ait() {
  DiameterCatalog c;
  c.entries = {{"DN400", 0.378, 2115.0, false},
               {"DN500", 0.468, 2355.0, false},
               {"DN700", 0.661, 2955.0, false}};
  return c;
}

void DiameterCatalog::validate() const {
  if (entries.empty()) {
    throw std::invalid_argument("DiameterCatalog: no entries");
  }
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (!(entries[i].inner_d_m > entries[i - 1].inner_d_m)) {
      throw std::invalid_argument(
          "DiameterCatalog: inner diameters must increase strictly");
    }
    if (!(entries[i].cost_per_m_eur > entries[i - 1].cost_per_m_eur)) {
      throw std::invalid_argument(
          "DiameterCatalog: costs must increase with diameter");
    }
  }
}

const DiameterEntry *DiameterCatalog::find(const std::string &dn_label) const {
  for (const auto &e : entries) {
    if (e.dn_label == dn_label) return &e;
  }
  return nullptr;
}

namespace {

IntegrationOptions integration_options(const SolverConfig &cfg) {
  IntegrationOptions opts;
  opts.step_m = cfg.step_m;
  opts.friction = cfg.friction;
  opts.viscosity_pa_s = cfg.viscosity_pa_s;
  opts.check_phase = false;
  return opts;
}

void reverse_into_pipe_orientation(PipeProfile &prof, double length_m,
                                   double signed_q) {
  std::reverse(prof.pressure_pa.begin(), prof.pressure_pa.end());
  std::reverse(prof.temperature_k.begin(), prof.temperature_k.end());
  std::reverse(prof.density_kg_m3.begin(), prof.density_kg_m3.end());
  std::reverse(prof.velocity_m_s.begin(), prof.velocity_m_s.end());
  for (auto &v : prof.velocity_m_s) v = -v;
  for (auto &pos : prof.position_m) pos = length_m - pos;
  std::reverse(prof.position_m.begin(), prof.position_m.end());
  prof.mass_flow_kg_s = signed_q;
}

struct ComponentDefault {
  Composition composition;
  double temperature_k = 283.15;
};

std::vector<ComponentDefault> component_defaults(const Network &net,
                                                 const BoundarySet &bounds) {
  const auto comps = net.connected_components();
  int ncomp = 0;
  for (int c : comps) ncomp = std::max(ncomp, c + 1);
  std::vector<ComponentDefault> out(ncomp);
  std::vector<double> best(ncomp, -1.0);
  for (const auto &r : bounds.references) {
    if (auto idx = net.node_index(r.node)) {
      const int c = comps[*idx];
      out[c] = {r.composition, r.injection_temperature_k};
      best[c] = 0.0;
    }
  }
  for (const auto &f : bounds.flows) {
    if (auto idx = net.node_index(f.node)) {
      const int c = comps[*idx];
      if (f.mass_rate_kg_s > best[c]) {
        best[c] = f.mass_rate_kg_s;
        out[c] = {f.composition, f.injection_temperature_k};
      }
    }
  }
  return out;
}

struct MarchResult {
  SolutionState sol;
  std::vector<std::string> boost_nodes; // flow-upstream nodes needing a pump
  std::vector<std::string> infeasible_edges;
};

/// Marches the oriented flow graph in topological order, integrating every
/// pipe from its flow inlet. Where the pressure would fall under the
/// envelope floor, the march resets the inlet node to the pump setpoint
/// (recording the node) and tries the hop again; a hop that fails even from
/// the setpoint is infeasible at this diameter.
MarchResult march_estimate(const Eos &eos, const Network &net,
                           const BoundarySet &bounds, const EnvelopeConfig &env,
                           const SolverConfig &cfg,
                           const std::map<std::string, double> &flows) {
  const auto &nodes = net.nodes();
  const std::size_t n = nodes.size();
  const auto comps = net.connected_components();
  const auto defaults = component_defaults(net, bounds);
  const IntegrationOptions iopts = integration_options(cfg);
  const double ztol = std::max(cfg.abs_tol_flow, 1e-9);

  struct OrientedEdge {
    bool is_pump;
    std::size_t index;
    std::size_t tail, head; // flow direction
    double q;               // signed, pipe convention
  };
  std::vector<OrientedEdge> oriented;
  std::vector<std::vector<std::size_t>> outgoing(n);
  std::vector<int> indegree(n, 0);
  std::vector<std::size_t> zero_flow_pipes;

  auto add_edge = [&](bool is_pump, std::size_t index, const std::string &id,
                      const std::string &from, const std::string &to) {
    const double q = flows.count(id) ? flows.at(id) : 0.0;
    const std::size_t fi = *net.node_index(from);
    const std::size_t ti = *net.node_index(to);
    if (std::abs(q) <= ztol) {
      if (!is_pump) zero_flow_pipes.push_back(index);
      return;
    }
    const std::size_t tail = q > 0.0 ? fi : ti;
    const std::size_t head = q > 0.0 ? ti : fi;
    outgoing[tail].push_back(oriented.size());
    ++indegree[head];
    oriented.push_back({is_pump, index, tail, head, q});
  };
  for (std::size_t i = 0; i < net.pipes().size(); ++i) {
    add_edge(false, i, net.pipes()[i].id, net.pipes()[i].from, net.pipes()[i].to);
  }
  for (std::size_t i = 0; i < net.pumps().size(); ++i) {
    add_edge(true, i, net.pumps()[i].id, net.pumps()[i].from, net.pumps()[i].to);
  }

  std::vector<double> node_p(n, 0.0), node_t(n, 283.15);
  std::vector<double> arrive_min_p(n, std::numeric_limits<double>::infinity());
  std::vector<double> arrive_q(n, 0.0), arrive_qt(n, 0.0);
  std::set<std::size_t> reference_nodes;
  std::map<std::size_t, double> reference_p;
  for (const auto &r : bounds.references) {
    const std::size_t i = *net.node_index(r.node);
    reference_nodes.insert(i);
    reference_p[i] = r.pressure_pa;
  }
  std::map<std::size_t, double> injection_t;
  std::map<std::size_t, double> injection_rate;
  for (const auto &f : bounds.flows) {
    const std::size_t i = *net.node_index(f.node);
    if (f.mass_rate_kg_s > injection_rate[i]) {
      injection_rate[i] = f.mass_rate_kg_s;
      injection_t[i] = f.injection_temperature_k;
    }
  }

  MarchResult result;
  std::vector<PipeProfile> profiles(net.pipes().size());
  std::set<std::string> boosted;

  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t processed = 0;
  std::vector<bool> done(n, false);
  while (processed < n) {
    if (ready.empty()) {
      // Oriented cycle in the estimate; release the remaining nodes in index
      // order so the march can finish.
      bool found = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!done[i] && indegree[i] > 0) {
          indegree[i] = 0;
          ready.push_back(i);
          found = true;
          break;
        }
      }
      if (!found) break;
      continue;
    }
    const std::size_t u = ready.front();
    ready.pop_front();
    if (done[u]) continue;
    done[u] = true;
    ++processed;
    const int comp = comps[u];

    if (arrive_q[u] > 0.0 || std::isfinite(arrive_min_p[u])) {
      node_p[u] = arrive_min_p[u];
      node_t[u] = arrive_q[u] > 0.0 ? arrive_qt[u] / arrive_q[u]
                                    : defaults[comp].temperature_k;
    } else if (reference_nodes.count(u)) {
      node_p[u] = reference_p[u];
      node_t[u] = injection_t.count(u) ? injection_t[u]
                                       : defaults[comp].temperature_k;
    } else {
      // Segment head without a pin: the march starts it at the setpoint.
      node_p[u] = env.pump_outlet_pa;
      node_t[u] = injection_t.count(u) ? injection_t[u]
                                       : defaults[comp].temperature_k;
    }

    for (std::size_t oe : outgoing[u]) {
      const auto &edge = oriented[oe];
      double p_out, t_out;
      if (edge.is_pump) {
        const Pump &pump = net.pumps()[edge.index];
        p_out = pump.enabled ? pump.setpoint_pa : node_p[u];
        t_out = pump.enabled ? pump.cooler_out_k : node_t[u];
      } else {
        const Pipe &pipe = net.pipes()[edge.index];
        const bool forward = edge.q > 0.0;
        const double h_in = nodes[forward ? *net.node_index(pipe.from)
                                          : *net.node_index(pipe.to)]
                                .elevation_m;
        const double h_out = nodes[forward ? *net.node_index(pipe.to)
                                           : *net.node_index(pipe.from)]
                                 .elevation_m;
        auto run = [&](double p_in, double t_in) {
          return integrate_pipe(eos, p_in, t_in, defaults[comp].composition,
                                std::abs(edge.q), pipe,
                                cfg.flat_elevation ? 0.0 : h_in,
                                cfg.flat_elevation ? 0.0 : h_out, iopts);
        };
        PipeProfile prof;
        bool ok = true;
        try {
          prof = run(node_p[u], node_t[u]);
        } catch (const EosError &) {
          ok = false;
        }
        auto min_pressure = [](const PipeProfile &pr) {
          double m = std::numeric_limits<double>::infinity();
          for (double p : pr.pressure_pa) m = std::min(m, p);
          return m;
        };
        if (!ok || min_pressure(prof) < env.p_min_pa) {
          if (node_p[u] < env.pump_outlet_pa * (1.0 - 1e-12)) {
            if (boosted.insert(nodes[u].id).second) {
              result.boost_nodes.push_back(nodes[u].id);
            }
            node_p[u] = env.pump_outlet_pa;
            node_t[u] = env.cooler_initial_k;
            ok = true;
            try {
              prof = run(node_p[u], node_t[u]);
            } catch (const EosError &) {
              ok = false;
            }
          }
          if (!ok || min_pressure(prof) < env.p_min_pa) {
            result.infeasible_edges.push_back(pipe.id);
            if (!ok) {
              // Keep marching downstream from the floor.
              prof = run(env.pump_outlet_pa, env.cooler_initial_k);
            }
          }
        }
        p_out = prof.outlet_pressure_pa();
        t_out = prof.outlet_temperature_k();
        if (!forward) {
          reverse_into_pipe_orientation(prof, pipe.length_m, edge.q);
        }
        profiles[edge.index] = std::move(prof);
      }
      arrive_min_p[edge.head] = std::min(arrive_min_p[edge.head], p_out);
      arrive_q[edge.head] += std::abs(edge.q);
      arrive_qt[edge.head] += std::abs(edge.q) * t_out;
      if (--indegree[edge.head] == 0 && !done[edge.head]) {
        ready.push_back(edge.head);
      }
    }
  }

  for (std::size_t pi : zero_flow_pipes) {
    const Pipe &pipe = net.pipes()[pi];
    const std::size_t fi = *net.node_index(pipe.from);
    const std::size_t ti = *net.node_index(pipe.to);
    profiles[pi] = integrate_pipe(
        eos, node_p[fi] > 0.0 ? node_p[fi] : env.pump_outlet_pa, node_t[fi],
        defaults[comps[fi]].composition, 0.0, pipe,
        cfg.flat_elevation ? 0.0 : nodes[fi].elevation_m,
        cfg.flat_elevation ? 0.0 : nodes[ti].elevation_m, iopts);
  }

  SolutionState sol;
  sol.convergence.converged = false;
  sol.convergence.message = "design march estimate (no steady-state solve)";
  for (std::size_t i = 0; i < n; ++i) {
    sol.nodes.push_back(
        {nodes[i].id, node_p[i], node_t[i], defaults[comps[i]].composition});
  }
  for (std::size_t i = 0; i < net.pipes().size(); ++i) {
    EdgeSolution es;
    es.id = net.pipes()[i].id;
    es.is_pump = false;
    es.mass_flow_kg_s =
        flows.count(es.id) ? flows.at(es.id) : 0.0;
    es.profile = profiles[i];
    es.max_velocity_m_s = es.profile.max_velocity_m_s();
    sol.edges.push_back(std::move(es));
  }
  for (const auto &pump : net.pumps()) {
    EdgeSolution es;
    es.id = pump.id;
    es.is_pump = true;
    es.mass_flow_kg_s = flows.count(pump.id) ? flows.at(pump.id) : 0.0;
    sol.edges.push_back(std::move(es));
  }
  result.sol = std::move(sol);
  return result;
}

std::map<std::string, double> flow_estimate(const Eos &eos, const Network &net,
                                            const BoundarySet &bounds,
                                            const SolverConfig &cfg,
                                            SolutionState *solved) {
  try {
    SolutionState sol = solve_steady_state(eos, net, bounds, cfg);
    std::map<std::string, double> flows;
    for (const auto &e : sol.edges) flows[e.id] = e.mass_flow_kg_s;
    if (solved) *solved = std::move(sol);
    return flows;
  } catch (const SolverError &) {
    // Networks that need pumps have no pump-free steady state; fall back to
    // the mass-balance tree estimate for directions.
    return spanning_tree_flows(net, bounds);
  }
}

} // namespace

SolutionState design_presolve(const Eos &eos, const Network &net,
                              const BoundarySet &bounds,
                              const EnvelopeConfig &env,
                              const SolverConfig &cfg) {
  SolutionState solved;
  solved.convergence.converged = false;
  const auto flows = flow_estimate(eos, net, bounds, cfg, &solved);
  if (solved.convergence.converged) return solved;
  return march_estimate(eos, net, bounds, env, cfg, flows).sol;
}

Network assign_diameters(const Eos &eos, Network net, const SolutionState &sol,
                         const DiameterCatalog &catalog,
                         const EnvelopeConfig &env, const SolverConfig &cfg,
                         const BoundarySet &bounds) {
  catalog.validate();
  const SolutionState *current = &sol;
  SolutionState resolved;

  for (int round = 0; round < 10; ++round) {
    bool changed = false;
    std::vector<std::string> stuck;
    for (auto &pipe : net.mutable_pipes()) {
      const EdgeSolution &es = current->edge(pipe.id);
      const double q = std::abs(es.mass_flow_kg_s);
      const DiameterEntry *choice = nullptr;
      if (q <= cfg.abs_tol_flow) {
        choice = &catalog.entries.front();
      } else {
        // Least density along the pipe, clamped to the envelope floor: a
        // pre-pump state below the floor would otherwise size against a
        // density the finished design never sees.
        double rho_min = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < es.profile.stations(); ++s) {
          const double p = std::max(es.profile.pressure_pa[s], env.p_min_pa);
          rho_min = std::min(rho_min, eos.density(p, es.profile.temperature_k[s],
                                                  current->node(pipe.from).composition));
        }
        if (!std::isfinite(rho_min)) {
          rho_min = eos.density(env.p_min_pa, env.cooler_initial_k,
                                Composition::pure_co2());
        }
        for (const auto &entry : catalog.entries) {
          const double area = units::kPi * entry.inner_d_m * entry.inner_d_m / 4.0;
          if (q / (rho_min * area) <= env.target_velocity_m_s) {
            choice = &entry;
            break;
          }
        }
        if (!choice) {
          const double required =
              std::sqrt(4.0 * q /
                        (units::kPi * rho_min * env.target_velocity_m_s));
          stuck.push_back(pipe.id + " needs D >= " + std::to_string(required) +
                          " m");
        }
      }
      if (choice && pipe.dn_label != choice->dn_label) {
        pipe.dn_label = choice->dn_label;
        pipe.diameter_m = choice->inner_d_m;
        changed = true;
      }
    }
    if (!stuck.empty()) {
      throw DesignError("assign_diameters: no catalog entry satisfies the "
                        "velocity bound",
                        stuck);
    }
    if (!changed) return net;
    resolved = design_presolve(eos, net, bounds, env, cfg);
    current = &resolved;
  }
  return net;
}

namespace {

/// Orients every pump's setpoint away from the reference region so each
/// pressure region keeps exactly one anchor.
void normalize_pump_anchors(Network &net, const BoundarySet &bounds) {
  const std::size_t n = net.nodes().size();
  std::vector<int> region(n, -1);
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto &p : net.pipes()) {
    const std::size_t a = *net.node_index(p.from);
    const std::size_t b = *net.node_index(p.to);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  int nregion = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (region[s] >= 0) continue;
    std::deque<std::size_t> q{s};
    region[s] = nregion;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      for (std::size_t v : adj[u]) {
        if (region[v] < 0) {
          region[v] = nregion;
          q.push_back(v);
        }
      }
    }
    ++nregion;
  }
  std::vector<int> depth(nregion, -1);
  std::deque<int> q;
  for (const auto &r : bounds.references) {
    if (auto idx = net.node_index(r.node)) {
      const int rg = region[*idx];
      if (depth[rg] < 0) {
        depth[rg] = 0;
        q.push_back(rg);
      }
    }
  }
  std::vector<std::vector<int>> region_adj(nregion);
  for (const auto &p : net.pumps()) {
    const int ra = region[*net.node_index(p.from)];
    const int rb = region[*net.node_index(p.to)];
    region_adj[ra].push_back(rb);
    region_adj[rb].push_back(ra);
  }
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : region_adj[u]) {
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        q.push_back(v);
      }
    }
  }
  for (auto &p : net.mutable_pumps()) {
    const int rf = region[*net.node_index(p.from)];
    const int rt = region[*net.node_index(p.to)];
    if (depth[rt] > depth[rf]) {
      p.mode = PumpMode::OutletSetpoint;
    } else if (depth[rf] > depth[rt]) {
      p.mode = PumpMode::InletSetpoint;
    }
  }
}

} // namespace

Network place_pumps(const Eos &eos, Network net, const BoundarySet &bounds,
                    const DiameterCatalog &catalog, const EnvelopeConfig &env,
                    const SolverConfig &cfg) {
  (void)catalog;
  if (!net.pumps().empty()) {
    throw std::invalid_argument(
        "place_pumps: expected a pump-free network (re-run from the bare "
        "topology to re-place)");
  }
  const auto flows = flow_estimate(eos, net, bounds, cfg, nullptr);
  MarchResult mr = march_estimate(eos, net, bounds, env, cfg, flows);
  if (!mr.infeasible_edges.empty()) {
    std::ostringstream os;
    os << "place_pumps: " << mr.infeasible_edges.size()
       << " pipe(s) lose more than the setpoint-to-floor budget in a single "
          "hop (diameter too small)";
    throw DesignError(os.str(), mr.infeasible_edges);
  }

  int pump_no = 0;
  for (const auto &node_id : mr.boost_nodes) {
    const Node &u = net.node(node_id);
    Node boost = u;
    boost.id = node_id + "_ps";
    boost.kind = NodeKind::Junction;
    net.add_node(boost);

    // Outgoing flow reattaches to the boosted side; inflows stay put.
    for (auto &pipe : net.mutable_pipes()) {
      const double q = flows.count(pipe.id) ? flows.at(pipe.id) : 0.0;
      if (pipe.from == node_id && q > 0.0) pipe.from = boost.id;
      if (pipe.to == node_id && q < 0.0) pipe.to = boost.id;
    }

    Pump pump;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "pump%02d", pump_no++);
    pump.id = buf;
    pump.from = node_id;
    pump.to = boost.id;
    pump.mode = PumpMode::OutletSetpoint;
    pump.setpoint_pa = env.pump_outlet_pa;
    pump.cooler_out_k = env.cooler_initial_k;
    net.add_pump(std::move(pump));
  }

  normalize_pump_anchors(net, bounds);

  SolutionState verify;
  try {
    verify = solve_steady_state(eos, net, bounds, cfg);
  } catch (const SolverError &e) {
    throw DesignError(std::string("place_pumps: verification solve failed: ") +
                      e.what());
  }
  std::vector<std::string> under;
  for (const auto &e : verify.edges) {
    if (e.is_pump) continue;
    for (double p : e.profile.pressure_pa) {
      if (p < env.p_min_pa - 1e4) {
        under.push_back(e.id);
        break;
      }
    }
  }
  if (!under.empty()) {
    throw DesignError(
        "place_pumps: verified solution still falls under the envelope floor",
        under);
  }
  return net;
}

Network relax_cooling(const Eos &eos, Network net, const BoundarySet &bounds,
                      const EnvelopeConfig &env, const SolverConfig &cfg) {
  if (net.pumps().empty()) return net;

  SolutionState sol = solve_steady_state(eos, net, bounds, cfg);
  if (!envelope_feasible(sol, env)) {
    throw DesignError("relax_cooling: starting point is not envelope-feasible");
  }

  // Visit pumps by descending solved outlet pressure, ids breaking ties.
  struct Order {
    double outlet_p;
    std::string id;
  };
  std::vector<Order> order;
  for (const auto &p : net.pumps()) {
    order.push_back({sol.node(p.to).pressure_pa, p.id});
  }
  std::sort(order.begin(), order.end(), [](const Order &a, const Order &b) {
    if (a.outlet_p != b.outlet_p) return a.outlet_p > b.outlet_p;
    return a.id < b.id;
  });

  for (const auto &o : order) {
    Pump *pump = nullptr;
    for (auto &p : net.mutable_pumps()) {
      if (p.id == o.id) pump = &p;
    }
    while (pump->cooler_out_k < env.cooler_max_k - 1e-9) {
      const double previous = pump->cooler_out_k;
      pump->cooler_out_k =
          std::min(pump->cooler_out_k + env.cooler_step_k, env.cooler_max_k);
      bool feasible = false;
      try {
        SolutionState trial = solve_steady_state(eos, net, bounds, cfg);
        feasible = envelope_feasible(trial, env);
      } catch (const SolverError &) {
        feasible = false;
      }
      if (!feasible) {
        pump->cooler_out_k = previous;
        break;
      }
    }
  }
  return net;
}

CostReport cost_report(const Network &net, const DiameterCatalog &catalog,
                       double pump_station_cost_eur) {
  catalog.validate();
  CostReport report;
  report.pump_station_cost_eur = pump_station_cost_eur;
  for (const auto &pipe : net.pipes()) {
    if (pipe.dn_label.empty()) {
      throw DesignError("cost_report: pipe " + pipe.id + " has no DN label",
                        {pipe.id});
    }
    const DiameterEntry *entry = catalog.find(pipe.dn_label);
    if (!entry) {
      throw DesignError("cost_report: pipe " + pipe.id + " carries unknown DN " +
                            pipe.dn_label,
                        {pipe.id});
    }
    report.length_by_dn_m[pipe.dn_label] += pipe.length_m;
    report.pipeline_cost_eur += pipe.length_m * entry->cost_per_m_eur;
    if (entry->theoretical &&
        std::find(report.notes.begin(), report.notes.end(),
                  pipe.dn_label + " is a theoretical size") ==
            report.notes.end()) {
      report.notes.push_back(pipe.dn_label + " is a theoretical size");
    }
  }
  for (const auto &pump : net.pumps()) {
    if (pump.enabled) ++report.pump_count;
  }
  report.pump_cost_eur = report.pump_count * pump_station_cost_eur;
  report.total_eur = report.pipeline_cost_eur + report.pump_cost_eur;
  return report;
}

std::string cost_report_json(const CostReport &report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json lengths;
  for (const auto &[dn, len] : report.length_by_dn_m) lengths[dn] = len;
  doc["length_by_dn_m"] = std::move(lengths);
  doc["pipeline_cost_eur"] = report.pipeline_cost_eur;
  doc["pump_count"] = report.pump_count;
  doc["pump_station_cost_eur"] = report.pump_station_cost_eur;
  doc["pump_cost_eur"] = report.pump_cost_eur;
  doc["total_eur"] = report.total_eur;
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

std::string cost_report_table(const CostReport &report) {
  std::ostringstream os;
  char buf[256];
  os << "DN       Length [km]\n";
  for (const auto &[dn, len] : report.length_by_dn_m) {
    std::snprintf(buf, sizeof(buf), "%-8s %11.1f\n", dn.c_str(), len / 1000.0);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "Total cost of pipelines: %.3f bil. EUR\n"
                "Amount of pumps: %d\n"
                "Specific cost of pumps: %.1f mil. EUR per station\n"
                "Total cost of pumps: %.1f mil. EUR\n"
                "Total: %.3f bil. EUR\n",
                report.pipeline_cost_eur / 1e9, report.pump_count,
                report.pump_station_cost_eur / 1e6, report.pump_cost_eur / 1e6,
                report.total_eur / 1e9);
  os << buf;
  for (const auto &n : report.notes) os << "note: " << n << '\n';
  return os.str();
}

bool envelope_feasible(const SolutionState &sol, const EnvelopeConfig &env,
                       double tolerance_pa) {
  if (sol.has_violations()) return false;
  for (const auto &n : sol.nodes) {
    if (n.pressure_pa < env.p_min_pa - tolerance_pa ||
        n.pressure_pa > env.p_max_pa + tolerance_pa) {
      return false;
    }
  }
  for (const auto &e : sol.edges) {
    for (double p : e.profile.pressure_pa) {
      if (p < env.p_min_pa - tolerance_pa || p > env.p_max_pa + tolerance_pa) {
        return false;
      }
    }
  }
  return true;
}

} // namespace co2net
