#pragma once

#include "co2net/eos.hpp"
#include "co2net/network.hpp"
#include "co2net/solver.hpp"

#include <string>
#include <vector>

namespace co2net {

struct DiameterEntry {
  std::string dn_label;
  double inner_d_m = 0.0;
  double cost_per_m_eur = 0.0;
  bool theoretical = false;
};

struct DiameterCatalog {
  std::vector<DiameterEntry> entries; // ascending inner diameter

  /// DN400/500/700/900 at 2200/2500/3000/3500 EUR per meter; DN900 is kept
  /// for theoretical comparison only.
  static DiameterCatalog defaults();
  /// Alternate preset: 2115/2355/2955 EUR per meter for DN400/500/700.
  static DiameterCatalog ait();

  void validate() const;
  const DiameterEntry *find(const std::string &dn_label) const;
};

struct EnvelopeConfig {
  double p_min_pa = 8.601325e6;       // 85 barg
  double p_max_pa = 1.8101325e7;      // 180 barg
  double pump_outlet_pa = 1.7101325e7; // 170 barg setpoint
  double cooler_initial_k = 283.15;   // 10 C
  double cooler_max_k = 318.15;       // 45 C
  double cooler_step_k = 5.0;
  double target_velocity_m_s = 5.0;
};

struct CostReport {
  std::map<std::string, double> length_by_dn_m;
  double pipeline_cost_eur = 0.0;
  int pump_count = 0;
  double pump_station_cost_eur = 7.5e6;
  double pump_cost_eur = 0.0;
  double total_eur = 0.0;
  std::vector<std::string> notes;
};

class DesignError : public std::runtime_error {
public:
  DesignError(const std::string &what, std::vector<std::string> edges = {})
      : std::runtime_error(what), offending_edges(std::move(edges)) {}
  std::vector<std::string> offending_edges;
};

/// Solves if it can; otherwise falls back to a segment-marching estimate
/// (spanning-tree flows, virtual pressure resets at the envelope floor) so
/// design steps always have station states to work from. Networks that need
/// pumps to reach steady state hit the fallback.
SolutionState design_presolve(const Eos &eos, const Network &net,
                              const BoundarySet &bounds,
                              const EnvelopeConfig &env,
                              const SolverConfig &cfg);

/// Per pipe, the smallest catalog diameter keeping the predicted velocity
/// |Qm| / (rho A) at or under the target, using the least solved density
/// along the pipe (clamped to the envelope floor when a pre-pump state dips
/// below it). Re-solves and re-assigns to a fixed point, ten rounds max.
Network assign_diameters(const Eos &eos, Network net, const SolutionState &sol,
                         const DiameterCatalog &catalog,
                         const EnvelopeConfig &env, const SolverConfig &cfg,
                         const BoundarySet &bounds);

/// Segmentation pump placement: marches the oriented flow graph from its
/// upstream ends, inserting a pump at the last node before the pressure
/// would fall under the envelope floor (outlet setpoint, cooler at the
/// initial temperature), as late as possible so the per-segment count is
/// minimal. Pump anchor modes are then oriented away from the reference
/// region so the verification solve stays well posed.
Network place_pumps(const Eos &eos, Network net, const BoundarySet &bounds,
                    const DiameterCatalog &catalog, const EnvelopeConfig &env,
                    const SolverConfig &cfg);

/// Raises each after-cooler in 5 K steps (pumps visited by descending
/// outlet pressure) while the re-solved network stays inside the envelope
/// and dense phase; the first infeasible step is reverted.
Network relax_cooling(const Eos &eos, Network net, const BoundarySet &bounds,
                      const EnvelopeConfig &env, const SolverConfig &cfg);

/// Length-weighted pipeline cost per DN plus pump stations.
CostReport cost_report(const Network &net, const DiameterCatalog &catalog,
                       double pump_station_cost_eur = 7.5e6);

std::string cost_report_json(const CostReport &report);
std::string cost_report_table(const CostReport &report);

/// True when every node and profile station of the solution sits inside
/// [p_min, p_max] (0.1 bar slack) with no dense-phase violations.
bool envelope_feasible(const SolutionState &sol, const EnvelopeConfig &env,
                       double tolerance_pa = 1e4);

} // namespace co2net
