#include "co2net/solver.hpp"

#include "co2net/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace co2net {

const NodeSolution &SolutionState::node(const std::string &id) const {
  for (const auto &n : nodes) {
    if (n.id == id) return n;
  }
  throw std::invalid_argument("SolutionState: unknown node " + id);
}

const EdgeSolution &SolutionState::edge(const std::string &id) const {
  for (const auto &e : edges) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument("SolutionState: unknown edge " + id);
}

bool SolutionState::has_violations() const {
  for (const auto &f : phase_flags) {
    if (f.severity == PhaseSeverity::Violation) return true;
  }
  return false;
}

namespace {

struct UnifiedEdge {
  bool is_pump = false;
  std::size_t index = 0; // into pipes() or pumps()
  std::size_t from = 0;
  std::size_t to = 0;
  std::string id;
};

struct Assembly {
  Assembly(const Eos &e, const Network &n, const BoundarySet &b, SolverConfig c)
      : eos(e), net(n), bounds(b), cfg(c) {}

  const Eos &eos;
  const Network &net;
  const BoundarySet &bounds;
  SolverConfig cfg;
  IntegrationOptions iopts;

  std::vector<UnifiedEdge> edges;
  std::vector<double> elevation;     // per node, flattened when requested
  std::vector<double> boundary_rate; // fixed injection per node
  std::vector<int> component;        // per node
  std::vector<bool> is_reference;    // per node
  std::vector<double> ref_pressure;  // per node, meaningful for references
  std::vector<int> ref_node_of_component;

  // Frozen fields the hydraulic Newton marches against.
  std::vector<std::vector<double>> pipe_temperature; // per edge (pipes only)
  std::vector<Composition> pipe_composition;
  std::vector<double> node_temperature;
  std::vector<Composition> node_composition;

  std::size_t n_nodes() const { return net.nodes().size(); }
  std::size_t n_edges() const { return edges.size(); }
  std::size_t n_vars() const { return n_nodes() + n_edges(); }

  double pipe_grade(const UnifiedEdge &e) const {
    const Pipe &p = net.pipes()[e.index];
    return (elevation[e.to] - elevation[e.from]) / p.length_m;
  }
};

Assembly build_assembly(const Eos &eos, const Network &net,
                        const BoundarySet &bounds, const SolverConfig &cfg) {
  const auto report = validate(net, bounds);
  if (!report.ok()) {
    std::ostringstream os;
    os << "solve_steady_state: network fails validation:";
    for (const auto &v : report.violations) os << " [" << v.code << "] " << v.what;
    throw std::invalid_argument(os.str());
  }

  Assembly a{.eos = eos, .net = net, .bounds = bounds, .cfg = cfg};
  a.iopts.step_m = cfg.step_m;
  a.iopts.friction = cfg.friction;
  a.iopts.viscosity_pa_s = cfg.viscosity_pa_s;
  a.iopts.check_phase = false;

  const std::size_t n = net.nodes().size();
  a.elevation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.elevation[i] = cfg.flat_elevation ? 0.0 : net.nodes()[i].elevation_m;
  }

  for (std::size_t i = 0; i < net.pipes().size(); ++i) {
    const Pipe &p = net.pipes()[i];
    a.edges.push_back({false, i, *net.node_index(p.from), *net.node_index(p.to),
                       p.id});
  }
  for (std::size_t i = 0; i < net.pumps().size(); ++i) {
    const Pump &p = net.pumps()[i];
    a.edges.push_back({true, i, *net.node_index(p.from), *net.node_index(p.to),
                       p.id});
  }

  a.boundary_rate.assign(n, 0.0);
  for (const auto &f : bounds.flows) {
    a.boundary_rate[*net.node_index(f.node)] += f.mass_rate_kg_s;
  }

  a.component = net.connected_components();
  int ncomp = 0;
  for (int c : a.component) ncomp = std::max(ncomp, c + 1);
  a.is_reference.assign(n, false);
  a.ref_pressure.assign(n, 0.0);
  a.ref_node_of_component.assign(ncomp, -1);
  for (const auto &r : bounds.references) {
    const std::size_t idx = *net.node_index(r.node);
    a.is_reference[idx] = true;
    a.ref_pressure[idx] = r.pressure_pa;
    a.ref_node_of_component[a.component[idx]] = static_cast<int>(idx);
  }
  return a;
}

/// Pressure regions are the connected components left after cutting pump
/// edges; each needs at least one anchor (a reference node, or a pump
/// setpoint pointing into it) or the pressure level is undetermined.
void check_pressure_anchors(const Assembly &a) {
  const std::size_t n = a.n_nodes();
  std::vector<int> region(n, -1);
  int nregion = 0;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto &e : a.edges) {
    if (e.is_pump) continue;
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
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
  std::vector<bool> anchored(nregion, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.is_reference[i]) anchored[region[i]] = true;
  }
  for (const auto &e : a.edges) {
    if (!e.is_pump) continue;
    const Pump &p = a.net.pumps()[e.index];
    if (!p.enabled) continue;
    const std::size_t anchor_node =
        p.mode == PumpMode::OutletSetpoint ? e.to : e.from;
    anchored[region[anchor_node]] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!anchored[region[i]]) {
      throw SingularError(
          "solve_steady_state: pressure region containing node '" +
          a.net.nodes()[i].id +
          "' has no pressure anchor (reference node or pump setpoint)");
    }
  }
}

double pipe_outlet_pressure(const Assembly &a, const UnifiedEdge &e,
                            double p_from, double q) {
  const Pipe &pipe = a.net.pipes()[e.index];
  return integrate_pressure(a.eos, p_from, a.pipe_temperature[&e - a.edges.data()],
                            a.pipe_composition[&e - a.edges.data()], q, pipe,
                            a.elevation[e.from], a.elevation[e.to], a.iopts);
}

/// Residual layout: one mass balance per node (the reference rows carry the
/// pressure anchor instead), then one equation per edge.
bool residual(const Assembly &a, const Eigen::VectorXd &x, Eigen::VectorXd &r) {
  const std::size_t n = a.n_nodes();
  const std::size_t m = a.n_edges();
  r.setZero(static_cast<Eigen::Index>(n + m));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.is_reference[i]) {
      r[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(i)] - a.ref_pressure[i];
    } else {
      r[static_cast<Eigen::Index>(i)] = a.boundary_rate[i];
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    const double q = x[static_cast<Eigen::Index>(n + e)];
    const auto &edge = a.edges[e];
    if (!a.is_reference[edge.from]) r[static_cast<Eigen::Index>(edge.from)] -= q;
    if (!a.is_reference[edge.to]) r[static_cast<Eigen::Index>(edge.to)] += q;
  }
  bool ok = true;
  for (std::size_t e = 0; e < m; ++e) {
    const auto &edge = a.edges[e];
    const Eigen::Index row = static_cast<Eigen::Index>(n + e);
    if (edge.is_pump) {
      const Pump &pump = a.net.pumps()[edge.index];
      if (!pump.enabled) {
        r[row] = x[static_cast<Eigen::Index>(n + e)];
      } else if (pump.mode == PumpMode::OutletSetpoint) {
        r[row] = x[static_cast<Eigen::Index>(edge.to)] - pump.setpoint_pa;
      } else {
        r[row] = x[static_cast<Eigen::Index>(edge.from)] - pump.setpoint_pa;
      }
    } else {
      const double p_from = x[static_cast<Eigen::Index>(edge.from)];
      const double q = x[static_cast<Eigen::Index>(n + e)];
      try {
        r[row] = pipe_outlet_pressure(a, edge, p_from, q) -
                 x[static_cast<Eigen::Index>(edge.to)];
      } catch (const EosError &) {
        r[row] = std::numeric_limits<double>::quiet_NaN();
        ok = false;
      }
    }
  }
  return ok;
}

/// Infinity norm with pressure rows scaled to bar so flows and pressures
/// weigh comparably in the line search.
double scaled_norm(const Assembly &a, const Eigen::VectorXd &r) {
  const std::size_t n = a.n_nodes();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(r[static_cast<Eigen::Index>(i)]);
    norm = std::max(norm, a.is_reference[i] ? v * 1e-5 : v);
  }
  for (std::size_t e = 0; e < a.n_edges(); ++e) {
    double v = std::abs(r[static_cast<Eigen::Index>(n + e)]);
    if (!(a.edges[e].is_pump && !a.net.pumps()[a.edges[e].index].enabled)) {
      v *= 1e-5;
    }
    norm = std::max(norm, v);
  }
  return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
}

std::string worst_residual_location(const Assembly &a, const Eigen::VectorXd &r) {
  const std::size_t n = a.n_nodes();
  double worst = -1.0;
  std::string where = "unknown";
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(r[static_cast<Eigen::Index>(i)]) *
                     (a.is_reference[i] ? 1e-5 : 1.0);
    if (v > worst) {
      worst = v;
      where = "node " + a.net.nodes()[i].id;
    }
  }
  for (std::size_t e = 0; e < a.n_edges(); ++e) {
    const double v = std::abs(r[static_cast<Eigen::Index>(n + e)]) * 1e-5;
    if (v > worst || !std::isfinite(r[static_cast<Eigen::Index>(n + e)])) {
      worst = std::isfinite(v) ? v : worst;
      where = "edge " + a.edges[e].id;
      if (!std::isfinite(r[static_cast<Eigen::Index>(n + e)])) break;
    }
  }
  return where;
}

void jacobian(const Assembly &a, const Eigen::VectorXd &x, Eigen::MatrixXd &jac) {
  const std::size_t n = a.n_nodes();
  const std::size_t m = a.n_edges();
  jac.setZero(static_cast<Eigen::Index>(n + m), static_cast<Eigen::Index>(n + m));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.is_reference[i]) {
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    const auto &edge = a.edges[e];
    if (!a.is_reference[edge.from]) {
      jac(static_cast<Eigen::Index>(edge.from), static_cast<Eigen::Index>(n + e)) = -1.0;
    }
    if (!a.is_reference[edge.to]) {
      jac(static_cast<Eigen::Index>(edge.to), static_cast<Eigen::Index>(n + e)) = 1.0;
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    const auto &edge = a.edges[e];
    const Eigen::Index row = static_cast<Eigen::Index>(n + e);
    if (edge.is_pump) {
      const Pump &pump = a.net.pumps()[edge.index];
      if (!pump.enabled) {
        jac(row, static_cast<Eigen::Index>(n + e)) = 1.0;
      } else if (pump.mode == PumpMode::OutletSetpoint) {
        jac(row, static_cast<Eigen::Index>(edge.to)) = 1.0;
      } else {
        jac(row, static_cast<Eigen::Index>(edge.from)) = 1.0;
      }
      continue;
    }
    const double p_from = x[static_cast<Eigen::Index>(edge.from)];
    const double q = x[static_cast<Eigen::Index>(n + e)];
    const double base = pipe_outlet_pressure(a, edge, p_from, q);
    const double hp = std::max(1.0, std::abs(p_from)) * 1e-7;
    const double hq = std::max(1e-4, std::abs(q) * 1e-7);
    jac(row, static_cast<Eigen::Index>(edge.from)) =
        (pipe_outlet_pressure(a, edge, p_from + hp, q) - base) / hp;
    jac(row, static_cast<Eigen::Index>(n + e)) =
        (pipe_outlet_pressure(a, edge, p_from, q + hq) - base) / hq;
    jac(row, static_cast<Eigen::Index>(edge.to)) = -1.0;
  }
}

Eigen::VectorXd initial_guess(const Assembly &a) {
  const std::size_t n = a.n_nodes();
  const std::size_t m = a.n_edges();
  Eigen::VectorXd x(static_cast<Eigen::Index>(n + m));

  // Reference-anchored hydrostatic pressure field.
  std::vector<double> ref_p(a.ref_node_of_component.size(), 1.26e7);
  std::vector<double> ref_h(a.ref_node_of_component.size(), 0.0);
  std::vector<double> ref_rho(a.ref_node_of_component.size(), 800.0);
  for (std::size_t c = 0; c < a.ref_node_of_component.size(); ++c) {
    const int rn = a.ref_node_of_component[c];
    if (rn < 0) continue;
    ref_p[c] = a.ref_pressure[rn];
    ref_h[c] = a.elevation[rn];
    Composition comp;
    double t = 283.15;
    for (const auto &r : a.bounds.references) {
      if (*a.net.node_index(r.node) == static_cast<std::size_t>(rn)) {
        comp = r.composition;
        t = r.injection_temperature_k;
      }
    }
    ref_rho[c] = a.eos.density(ref_p[c], t, comp);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a.cfg.initial_pressure_pa) {
      x[static_cast<Eigen::Index>(i)] = *a.cfg.initial_pressure_pa;
    } else {
      const std::size_t c = static_cast<std::size_t>(a.component[i]);
      x[static_cast<Eigen::Index>(i)] =
          ref_p[c] - ref_rho[c] * units::kGravity * (a.elevation[i] - ref_h[c]);
    }
  }

  // Spanning-tree mass-balance estimate for the flows: tree edges carry
  // their subtree's net injection toward the reference, chords start at zero.
  for (std::size_t e = 0; e < m; ++e) x[static_cast<Eigen::Index>(n + e)] = 0.0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < m; ++e) {
    adj[a.edges[e].from].push_back({a.edges[e].to, e});
    adj[a.edges[e].to].push_back({a.edges[e].from, e});
  }
  std::vector<int> parent(n, -1);
  std::vector<int> parent_edge(n, -1);
  std::vector<std::size_t> order;
  std::vector<bool> seen(n, false);
  for (int rn : a.ref_node_of_component) {
    if (rn < 0) continue;
    std::deque<std::size_t> q{static_cast<std::size_t>(rn)};
    seen[static_cast<std::size_t>(rn)] = true;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      order.push_back(u);
      for (auto [v, e] : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          parent[v] = static_cast<int>(u);
          parent_edge[v] = static_cast<int>(e);
          q.push_back(v);
        }
      }
    }
  }
  std::vector<double> subtree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) subtree[i] = a.boundary_rate[i];
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t u = *it;
    if (parent[u] < 0) continue;
    subtree[static_cast<std::size_t>(parent[u])] += subtree[u];
    const std::size_t e = static_cast<std::size_t>(parent_edge[u]);
    // Flow carrying the subtree surplus from u toward its parent.
    if (a.edges[e].from == u) {
      x[static_cast<Eigen::Index>(n + e)] = subtree[u];
    } else {
      x[static_cast<Eigen::Index>(n + e)] = -subtree[u];
    }
  }
  return x;
}

struct NewtonResult {
  int iterations = 0;
  double max_mass_residual = 0.0;
  double max_pressure_residual = 0.0;
};

NewtonResult newton_solve(const Assembly &a, Eigen::VectorXd &x) {
  const std::size_t n = a.n_nodes();
  const double pscale = [&] {
    double p = 1e5;
    for (std::size_t i = 0; i < n; ++i) {
      if (a.is_reference[i]) p = std::max(p, a.ref_pressure[i]);
    }
    return p;
  }();
  const double flow_tol = 0.1 * a.cfg.abs_tol_flow;
  const double pressure_tol = std::max(0.01 * a.cfg.rel_tol * pscale, 1e-4);

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  NewtonResult result;

  auto residual_max = [&](const Eigen::VectorXd &rr, double &mass, double &pres) {
    mass = 0.0;
    pres = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::abs(rr[static_cast<Eigen::Index>(i)]);
      if (a.is_reference[i]) pres = std::max(pres, v);
      else mass = std::max(mass, v);
    }
    for (std::size_t e = 0; e < a.n_edges(); ++e) {
      const double v = std::abs(rr[static_cast<Eigen::Index>(n + e)]);
      if (a.edges[e].is_pump && !a.net.pumps()[a.edges[e].index].enabled) {
        mass = std::max(mass, v);
      } else {
        pres = std::max(pres, v);
      }
    }
  };

  residual(a, x, r);
  double norm = scaled_norm(a, r);
  if (!std::isfinite(norm)) {
    throw ConvergenceError(
        "solve_steady_state: initial state not evaluable (EoS failure)",
        worst_residual_location(a, r));
  }

  for (int it = 0; it < a.cfg.max_newton_iterations; ++it) {
    double mass, pres;
    residual_max(r, mass, pres);
    result.max_mass_residual = mass;
    result.max_pressure_residual = pres;
    if (mass <= flow_tol && pres <= pressure_tol) return result;

    jacobian(a, x, jac);

    // Scale columns (pressures in bar) and rows before factoring; the raw
    // system mixes Pa and kg/s magnitudes.
    const std::size_t dim = a.n_vars();
    Eigen::VectorXd col_scale(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      col_scale[static_cast<Eigen::Index>(i)] = i < n ? 1e5 : 1.0;
    }
    Eigen::MatrixXd js = jac * col_scale.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(js);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      // Point at the pressure block of the null space; that is where an
      // unanchored region shows up.
      Eigen::MatrixXd kernel = lu.kernel();
      std::string who = "unknown";
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = std::abs(kernel(static_cast<Eigen::Index>(i), 0));
        if (v > best) {
          best = v;
          who = a.net.nodes()[i].id;
        }
      }
      throw SingularError(
          "solve_steady_state: singular Jacobian; component containing node '" +
          who + "' is under-constrained");
    }
    Eigen::VectorXd step = col_scale.asDiagonal() * lu.solve(-r).eval();

    double alpha = a.cfg.damping;
    bool accepted = false;
    Eigen::VectorXd x_trial, r_trial;
    for (int halving = 0; halving < 20; ++halving) {
      x_trial = x + alpha * step;
      residual(a, x_trial, r_trial);
      const double trial_norm = scaled_norm(a, r_trial);
      if (trial_norm <= (1.0 - 1e-4 * alpha) * norm) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++result.iterations;
    if (!accepted) {
      double mass2, pres2;
      residual_max(r, mass2, pres2);
      // Accept a stall only if we are already inside the outer tolerances.
      if (mass2 <= a.cfg.abs_tol_flow && pres2 <= a.cfg.rel_tol * pscale) {
        return result;
      }
      throw ConvergenceError(
          "solve_steady_state: Newton line search stalled",
          worst_residual_location(a, r));
    }
    x = x_trial;
    r = r_trial;
    norm = scaled_norm(a, r);
  }
  double mass, pres;
  residual_max(r, mass, pres);
  result.max_mass_residual = mass;
  result.max_pressure_residual = pres;
  if (mass <= a.cfg.abs_tol_flow && pres <= a.cfg.rel_tol * pscale) {
    return result;
  }
  throw ConvergenceError("solve_steady_state: Newton did not converge in " +
                             std::to_string(a.cfg.max_newton_iterations) +
                             " iterations",
                         worst_residual_location(a, r));
}

struct SweepResult {
  std::vector<double> node_temperature;
  std::vector<Composition> node_composition;
  std::vector<PipeProfile> pipe_profile; // per unified edge (pipes only)
  std::vector<int> orientation;          // +1 from->to, -1 reverse, 0 none
};

/// Thermal and composition propagation along the converged flow directions:
/// junction states are mass-flow-weighted molar mixtures with
/// enthalpy-consistent temperatures, coolers pin pump outlets.
SweepResult sweep(const Assembly &a, const Eigen::VectorXd &x) {
  const std::size_t n = a.n_nodes();
  const std::size_t m = a.n_edges();
  const double ztol = std::max(a.cfg.abs_tol_flow, 1e-12);

  SweepResult out;
  out.node_temperature = a.node_temperature;
  out.node_composition = a.node_composition;
  out.pipe_profile.resize(m);
  out.orientation.assign(m, 0);

  for (std::size_t e = 0; e < m; ++e) {
    const double q = x[static_cast<Eigen::Index>(n + e)];
    out.orientation[e] = q > ztol ? 1 : (q < -ztol ? -1 : 0);
  }

  // Kahn order over the oriented flow graph.
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<std::size_t>> outgoing(n);
  for (std::size_t e = 0; e < m; ++e) {
    if (out.orientation[e] == 0) continue;
    const std::size_t head =
        out.orientation[e] > 0 ? a.edges[e].to : a.edges[e].from;
    const std::size_t tail =
        out.orientation[e] > 0 ? a.edges[e].from : a.edges[e].to;
    ++indegree[head];
    outgoing[tail].push_back(e);
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }

  struct Arrival {
    double mass = 0.0;
    double enthalpy_flux = 0.0;
    std::array<double, kSpeciesCount> moles{};
  };
  std::vector<Arrival> arrivals(n);

  // Boundary injections (and a net-injecting reference node) feed the mix.
  for (const auto &f : a.bounds.flows) {
    if (f.mass_rate_kg_s <= 0.0) continue;
    const std::size_t i = *a.net.node_index(f.node);
    const double p = x[static_cast<Eigen::Index>(i)];
    arrivals[i].mass += f.mass_rate_kg_s;
    arrivals[i].enthalpy_flux +=
        f.mass_rate_kg_s *
        a.eos.enthalpy(p, f.injection_temperature_k, f.composition);
    const double molar = f.mass_rate_kg_s / f.composition.molar_mass();
    for (std::size_t s = 0; s < kSpeciesCount; ++s) {
      arrivals[i].moles[s] +=
          molar * f.composition.fractions()[s];
    }
  }
  for (const auto &r : a.bounds.references) {
    const std::size_t i = *a.net.node_index(r.node);
    double net_out = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      const double q = x[static_cast<Eigen::Index>(n + e)];
      if (a.edges[e].from == i) net_out += q;
      if (a.edges[e].to == i) net_out -= q;
    }
    const double injection = net_out - a.boundary_rate[i];
    if (injection > ztol) {
      const double p = x[static_cast<Eigen::Index>(i)];
      arrivals[i].mass += injection;
      arrivals[i].enthalpy_flux +=
          injection * a.eos.enthalpy(p, r.injection_temperature_k, r.composition);
      const double molar = injection / r.composition.molar_mass();
      for (std::size_t s = 0; s < kSpeciesCount; ++s) {
        arrivals[i].moles[s] += molar * r.composition.fractions()[s];
      }
    }
  }

  std::size_t processed = 0;
  std::vector<bool> done(n, false);
  while (processed < n) {
    if (ready.empty()) {
      // A numerically oriented cycle; drop its weakest edge and move on.
      double best = std::numeric_limits<double>::infinity();
      std::size_t victim = m;
      for (std::size_t e = 0; e < m; ++e) {
        if (out.orientation[e] == 0) continue;
        const std::size_t head =
            out.orientation[e] > 0 ? a.edges[e].to : a.edges[e].from;
        if (done[head] || indegree[head] == 0) continue;
        const double q = std::abs(x[static_cast<Eigen::Index>(n + e)]);
        if (q < best) {
          best = q;
          victim = e;
        }
      }
      if (victim == m) break;
      const std::size_t head =
          out.orientation[victim] > 0 ? a.edges[victim].to : a.edges[victim].from;
      out.orientation[victim] = 0;
      if (--indegree[head] == 0) ready.push_back(head);
      continue;
    }
    const std::size_t u = ready.front();
    ready.pop_front();
    done[u] = true;
    ++processed;

    // Fix the node state from everything that arrived.
    const double p_u = x[static_cast<Eigen::Index>(u)];
    if (arrivals[u].mass > ztol) {
      double total_moles = 0.0;
      for (double v : arrivals[u].moles) total_moles += v;
      if (total_moles > 0.0) {
        std::array<double, kSpeciesCount> frac{};
        for (std::size_t s = 0; s < kSpeciesCount; ++s) {
          frac[s] = std::max(arrivals[u].moles[s], 0.0) / total_moles;
        }
        double sum = 0.0;
        for (double v : frac) sum += v;
        for (auto &v : frac) v /= sum;
        out.node_composition[u] = Composition(frac);
      }
      const double h_mix = arrivals[u].enthalpy_flux / arrivals[u].mass;
      out.node_temperature[u] =
          a.eos.temperature_from_enthalpy(p_u, h_mix, out.node_composition[u]);
    }

    // Push the node state down every outgoing edge.
    for (std::size_t e : outgoing[u]) {
      const auto &edge = a.edges[e];
      const double q = x[static_cast<Eigen::Index>(n + e)];
      const std::size_t v = out.orientation[e] > 0 ? edge.to : edge.from;
      double h_arrive;
      const double p_v = x[static_cast<Eigen::Index>(v)];
      const Composition &comp = out.node_composition[u];
      if (edge.is_pump) {
        const Pump &pump = a.net.pumps()[edge.index];
        h_arrive = a.eos.enthalpy(p_v, pump.cooler_out_k, comp);
      } else {
        const Pipe &pipe = a.net.pipes()[edge.index];
        const bool forward = out.orientation[e] > 0;
        const double h_in = a.elevation[forward ? edge.from : edge.to];
        const double h_out = a.elevation[forward ? edge.to : edge.from];
        PipeProfile prof = integrate_pipe(
            a.eos, x[static_cast<Eigen::Index>(u)], out.node_temperature[u],
            comp, std::abs(q), pipe, h_in, h_out, a.iopts);
        const double t_out = prof.outlet_temperature_k();
        if (!forward) {
          // Store in pipe orientation: mirror stations, flip velocity sign.
          std::reverse(prof.pressure_pa.begin(), prof.pressure_pa.end());
          std::reverse(prof.temperature_k.begin(), prof.temperature_k.end());
          std::reverse(prof.density_kg_m3.begin(), prof.density_kg_m3.end());
          std::reverse(prof.velocity_m_s.begin(), prof.velocity_m_s.end());
          for (auto &vel : prof.velocity_m_s) vel = -vel;
          for (auto &pos : prof.position_m) pos = pipe.length_m - pos;
          std::reverse(prof.position_m.begin(), prof.position_m.end());
          prof.mass_flow_kg_s = q;
        }
        out.pipe_profile[e] = std::move(prof);
        h_arrive = a.eos.enthalpy(p_v, t_out, comp);
      }
      arrivals[v].mass += std::abs(q);
      arrivals[v].enthalpy_flux += std::abs(q) * h_arrive;
      const double molar = std::abs(q) / comp.molar_mass();
      for (std::size_t s = 0; s < kSpeciesCount; ++s) {
        arrivals[v].moles[s] += molar * comp.fractions()[s];
      }
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }

  // Zero-flow pipes: hydrostatic profile from the upstream-by-convention
  // ('from') endpoint.
  for (std::size_t e = 0; e < m; ++e) {
    const auto &edge = a.edges[e];
    if (edge.is_pump || out.orientation[e] != 0) continue;
    const Pipe &pipe = a.net.pipes()[edge.index];
    out.pipe_profile[e] = integrate_pipe(
        a.eos, x[static_cast<Eigen::Index>(edge.from)],
        out.node_temperature[edge.from], out.node_composition[edge.from], 0.0,
        pipe, a.elevation[edge.from], a.elevation[edge.to], a.iopts);
  }
  return out;
}

} // namespace

SolutionState solve_steady_state(const Eos &eos, const Network &net,
                                 const BoundarySet &bounds,
                                 const SolverConfig &cfg) {
  Assembly a = build_assembly(eos, net, bounds, cfg);
  check_pressure_anchors(a);

  const std::size_t n = a.n_nodes();
  const std::size_t m = a.n_edges();

  // Initial frozen fields: every component starts from its dominant
  // injection (falling back to the reference state).
  a.node_temperature.assign(n, 283.15);
  a.node_composition.assign(n, Composition::pure_co2());
  {
    std::vector<double> best_rate(a.ref_node_of_component.size(), -1.0);
    std::vector<Composition> comp(a.ref_node_of_component.size());
    std::vector<double> temp(a.ref_node_of_component.size(), 283.15);
    for (const auto &r : a.bounds.references) {
      const std::size_t c =
          static_cast<std::size_t>(a.component[*net.node_index(r.node)]);
      comp[c] = r.composition;
      temp[c] = r.injection_temperature_k;
      best_rate[c] = 0.0;
    }
    for (const auto &f : bounds.flows) {
      const std::size_t c =
          static_cast<std::size_t>(a.component[*net.node_index(f.node)]);
      if (f.mass_rate_kg_s > best_rate[c]) {
        best_rate[c] = f.mass_rate_kg_s;
        comp[c] = f.composition;
        temp[c] = f.injection_temperature_k;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = static_cast<std::size_t>(a.component[i]);
      a.node_composition[i] = comp[c];
      a.node_temperature[i] = temp[c];
    }
  }
  a.pipe_temperature.resize(m);
  a.pipe_composition.assign(m, Composition::pure_co2());
  for (std::size_t e = 0; e < m; ++e) {
    if (a.edges[e].is_pump) continue;
    const Pipe &pipe = net.pipes()[a.edges[e].index];
    const std::size_t stations =
        station_count(pipe.length_m, a.pipe_grade(a.edges[e]), a.iopts);
    a.pipe_temperature[e].assign(stations, a.node_temperature[a.edges[e].from]);
    a.pipe_composition[e] = a.node_composition[a.edges[e].from];
  }

  Eigen::VectorXd x = initial_guess(a);

  ConvergenceReport report;
  SweepResult last_sweep;
  std::vector<int> prev_orientation;
  std::vector<double> prev_p(n, 0.0), prev_t(n, 0.0);

  for (int outer = 0; outer < cfg.max_outer_iterations; ++outer) {
    const NewtonResult nr = newton_solve(a, x);
    report.newton_iterations += nr.iterations;
    report.max_mass_residual_kg_s = nr.max_mass_residual;
    report.max_pressure_residual_pa = nr.max_pressure_residual;

    last_sweep = sweep(a, x);
    report.outer_iterations = outer + 1;

    if (!prev_orientation.empty() && last_sweep.orientation != prev_orientation) {
      ++report.flow_direction_resweeps;
    }
    prev_orientation = last_sweep.orientation;

    // Load the sweep back as the frozen fields for the next hydraulic pass.
    bool fields_converged = outer > 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = x[static_cast<Eigen::Index>(i)];
      if (std::abs(p - prev_p[i]) > cfg.rel_tol * std::max(std::abs(p), 1e5) ||
          std::abs(last_sweep.node_temperature[i] - prev_t[i]) > 0.01) {
        fields_converged = false;
      }
      prev_p[i] = p;
      prev_t[i] = last_sweep.node_temperature[i];
    }
    a.node_temperature = last_sweep.node_temperature;
    a.node_composition = last_sweep.node_composition;
    for (std::size_t e = 0; e < m; ++e) {
      if (a.edges[e].is_pump) continue;
      a.pipe_temperature[e] = last_sweep.pipe_profile[e].temperature_k;
      a.pipe_composition[e] =
          last_sweep.orientation[e] >= 0
              ? a.node_composition[a.edges[e].from]
              : a.node_composition[a.edges[e].to];
    }

    if (fields_converged) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged) {
    throw ConvergenceError(
        "solve_steady_state: outer loop did not settle within " +
            std::to_string(cfg.max_outer_iterations) + " iterations",
        "outer loop");
  }

  SolutionState sol;
  sol.convergence = report;
  sol.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.nodes.push_back({net.nodes()[i].id, x[static_cast<Eigen::Index>(i)],
                         a.node_temperature[i], a.node_composition[i]});
  }
  sol.edges.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    EdgeSolution es;
    es.id = a.edges[e].id;
    es.is_pump = a.edges[e].is_pump;
    es.mass_flow_kg_s = x[static_cast<Eigen::Index>(n + e)];
    if (!es.is_pump) {
      es.profile = last_sweep.pipe_profile[e];
      es.max_velocity_m_s = es.profile.max_velocity_m_s();
    }
    sol.edges.push_back(std::move(es));
  }
  sol.phase_flags = check_dense_phase(eos, sol, cfg.dense_warning_margin_pa);
  for (auto &e : sol.edges) {
    e.dense_ok = true;
    for (const auto &f : sol.phase_flags) {
      if (f.edge == e.id && f.severity == PhaseSeverity::Violation) {
        e.dense_ok = false;
        break;
      }
    }
  }
  return sol;
}

std::vector<PhaseFlag> check_dense_phase(const Eos &eos,
                                         const SolutionState &sol,
                                         double warning_margin_pa) {
  std::vector<PhaseFlag> flags;
  for (const auto &e : sol.edges) {
    if (e.is_pump) continue;
    for (std::size_t s = 0; s < e.profile.stations(); ++s) {
      const double p = e.profile.pressure_pa[s];
      const double t = e.profile.temperature_k[s];
      const double margin = eos.dense_margin(p, t);
      if (margin <= 0.0) {
        flags.push_back({e.id, s, p, t, margin, PhaseSeverity::Violation});
      } else if (margin < warning_margin_pa) {
        flags.push_back({e.id, s, p, t, margin, PhaseSeverity::Warning});
      }
    }
  }
  return flags;
}

std::map<std::string, double> spanning_tree_flows(const Network &net,
                                                  const BoundarySet &bounds) {
  SolverConfig cfg;
  // The EoS is only needed for the hydrostatic pressure init inside the
  // guess; the tree flow estimate itself is pure bookkeeping.
  const auto eos = make_default_eos();
  Assembly a = build_assembly(*eos, net, bounds, cfg);
  const Eigen::VectorXd x = initial_guess(a);
  std::map<std::string, double> flows;
  for (std::size_t e = 0; e < a.n_edges(); ++e) {
    flows[a.edges[e].id] = x[static_cast<Eigen::Index>(a.n_nodes() + e)];
  }
  return flows;
}

std::map<std::string, EdgeOrientation>
flow_directions(const SolutionState &sol, double zero_tol_kg_s) {
  std::map<std::string, EdgeOrientation> out;
  for (const auto &e : sol.edges) {
    if (e.mass_flow_kg_s > zero_tol_kg_s) {
      out[e.id] = EdgeOrientation::Forward;
    } else if (e.mass_flow_kg_s < -zero_tol_kg_s) {
      out[e.id] = EdgeOrientation::Reverse;
    } else {
      out[e.id] = EdgeOrientation::Unoriented;
    }
  }
  return out;
}

} // namespace co2net
