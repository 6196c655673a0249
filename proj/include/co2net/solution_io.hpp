#pragma once

#include "co2net/network.hpp"
#include "co2net/solver.hpp"

#include <string>

namespace co2net {

/// Solution exports. Pressures in barg, temperatures in Celsius, flows in
/// kg/s; fixed column orders so identical runs produce identical bytes.

/// Header: id,P_barg,T_C,xCO2,xH2,xO2,xN2
std::string solution_nodes_csv(const SolutionState &sol);

/// Header: id,Qm_kgs,vmax_ms,dense_ok
std::string solution_edges_csv(const SolutionState &sol);

/// GeoJSON mirror of the two CSVs over the network geometry.
std::string solution_geojson(const SolutionState &sol, const Network &net);

/// Header: node_id,T_C,P_barg (one row per node, phase-diagram scatter)
std::string phase_nodes_csv(const SolutionState &sol);

/// Header: T_C,Psat_barg (sampled pure-CO2 saturation curve up to Tc)
std::string phase_curve_csv(const Eos &eos, double t_start_k = 218.15,
                            double step_k = 0.5);

/// Header: s_m,P_barg,T_C,rho_kgm3,v_ms,lambda,Re
std::string profile_csv(const PipeProfile &profile);

/// Convergence report plus phase flags as JSON, for sidecars and the C API.
std::string solution_summary_json(const SolutionState &sol);

} // namespace co2net
