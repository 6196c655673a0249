#pragma once

#include "co2net/eos.hpp"
#include "co2net/hydraulics.hpp"
#include "co2net/network.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace co2net {

struct SolverConfig {
  double rel_tol = 1e-8;
  double abs_tol_flow = 1e-6; // kg/s
  int max_outer_iterations = 50;
  int max_newton_iterations = 100;
  double damping = 1.0; // initial Newton step scale; line search halves from here
  double step_m = 1000.0;
  FrictionModel friction = FrictionModel::Hofer;
  double viscosity_pa_s = 1e-4;
  double dense_warning_margin_pa = 5e5; // 5 bar
  // Overrides the reference-anchored hydrostatic initialization.
  std::optional<double> initial_pressure_pa;
  // Elevation ablation: solve with every node height forced to zero.
  bool flat_elevation = false;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Newton could not drive the residuals down; carries the worst offender.
class ConvergenceError : public SolverError {
public:
  ConvergenceError(const std::string &what, std::string location)
      : SolverError(what), worst_residual_location(std::move(location)) {}
  std::string worst_residual_location;
};

/// Structurally singular system; names the under-constrained part.
class SingularError : public SolverError {
public:
  using SolverError::SolverError;
};

struct NodeSolution {
  std::string id;
  double pressure_pa = 0.0;
  double temperature_k = 0.0;
  Composition composition;
};

struct EdgeSolution {
  std::string id;
  bool is_pump = false;
  double mass_flow_kg_s = 0.0;
  double max_velocity_m_s = 0.0;
  bool dense_ok = true;
  PipeProfile profile; // empty for pumps
};

struct ConvergenceReport {
  bool converged = false;
  int outer_iterations = 0;
  int newton_iterations = 0;
  int flow_direction_resweeps = 0;
  double max_mass_residual_kg_s = 0.0;
  double max_pressure_residual_pa = 0.0;
  std::string message;
};

enum class PhaseSeverity { Violation, Warning };

struct PhaseFlag {
  std::string edge;
  std::size_t station = 0;
  double pressure_pa = 0.0;
  double temperature_k = 0.0;
  double margin_pa = 0.0; // distance to the dense-phase boundary
  PhaseSeverity severity = PhaseSeverity::Warning;
};

struct SolutionState {
  std::vector<NodeSolution> nodes;
  std::vector<EdgeSolution> edges;
  ConvergenceReport convergence;
  std::vector<PhaseFlag> phase_flags;

  const NodeSolution &node(const std::string &id) const;
  const EdgeSolution &edge(const std::string &id) const;
  bool has_violations() const;
};

/// Semi-coupled steady-state solve: an outer loop alternates a hydraulic
/// Newton on {node pressures, edge mass flows} with frozen temperature and
/// composition fields, a thermal sweep of the enthalpy balance along the
/// converged flow directions (coolers applied after pumps), and a
/// mass-flow-weighted molar composition sweep. Converged when successive
/// outer iterations move node pressures by less than rel_tol relative and
/// temperatures by less than 0.01 K.
///
/// Dense-phase excursions are not an error: the solution comes back with
/// phase_flags set. Non-convergence and singular systems throw.
SolutionState solve_steady_state(const Eos &eos, const Network &net,
                                 const BoundarySet &bounds,
                                 const SolverConfig &cfg = {});

/// Stations that leave the dense phase (violations) or come closer to the
/// boundary than the warning margin.
std::vector<PhaseFlag> check_dense_phase(const Eos &eos,
                                         const SolutionState &sol,
                                         double warning_margin_pa = 5e5);

enum class EdgeOrientation { Forward, Reverse, Unoriented };

/// Flow orientation per edge id from the sign of the solved mass flow;
/// edges below the zero tolerance are unoriented.
std::map<std::string, EdgeOrientation>
flow_directions(const SolutionState &sol, double zero_tol_kg_s = 1e-6);

/// Mass-balance flow estimate per edge id over a spanning tree rooted at
/// the reference nodes (exact on trees; chords start at zero). The design
/// march uses this when a pump-free solve cannot converge.
std::map<std::string, double> spanning_tree_flows(const Network &net,
                                                  const BoundarySet &bounds);

} // namespace co2net
