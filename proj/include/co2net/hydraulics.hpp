#pragma once

#include "co2net/eos.hpp"
#include "co2net/network.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace co2net {

/// Re = 4|Qm| / (pi * mu_visc * D).
double reynolds(double mass_flow_kg_s, double diameter_m,
                double viscosity_pa_s);

/// Fully rough Nikuradse friction factor (2 log10(D/k) + 1.138)^-2.
/// Throws std::domain_error for k >= D.
double friction_nikuradse(double roughness_m, double diameter_m);

/// Hofer's explicit Colebrook approximation
/// [-2 log10((4.518/Re) log10(Re/7) + k/(3.71 D))]^-2.
/// Re <= 7 falls back to laminar 64/Re (the formula's log domain ends there).
double friction_hofer(double re, double roughness_m, double diameter_m);

enum class FrictionModel { Hofer, Nikuradse };

/// Friction factor with the flow-regime policy applied: laminar 64/Re below
/// Re = 2300, linear blend to the turbulent correlation over [2300, 4000].
double friction_factor(double re, double roughness_m, double diameter_m,
                       FrictionModel model);

struct IntegrationOptions {
  double step_m = 1000.0;
  // Steep pipes (|dh/ds| above the grade threshold) refine to this step.
  double steep_step_m = 100.0;
  double steep_grade = 0.01;
  FrictionModel friction = FrictionModel::Hofer;
  double viscosity_pa_s = 1e-4;
  // Halt on a phase-boundary crossing and flag the profile.
  bool check_phase = true;
};

/// Station-resolved state along one pipe. Mass flow is constant along the
/// pipe; velocity and density at each station satisfy
/// Qm = rho * v * pi D^2/4 exactly.
struct PipeProfile {
  std::vector<double> position_m;
  std::vector<double> pressure_pa;
  std::vector<double> temperature_k;
  std::vector<double> density_kg_m3;
  std::vector<double> velocity_m_s;
  double mass_flow_kg_s = 0.0;
  double lambda = 0.0; // constant along the pipe (Re depends only on Qm, D)
  double re = 0.0;
  bool dense_ok = true;
  bool truncated = false; // stopped early at a phase-boundary crossing
  // Integrated pressure contributions, reported separately.
  double friction_drop_pa = 0.0;
  double inertia_drop_pa = 0.0;
  double hydrostatic_drop_pa = 0.0;

  std::size_t stations() const { return position_m.size(); }
  double outlet_pressure_pa() const { return pressure_pa.back(); }
  double outlet_temperature_k() const { return temperature_k.back(); }
  double max_velocity_m_s() const;
};

/// Number of marching stations the step policy yields for a pipe.
std::size_t station_count(double length_m, double grade,
                          const IntegrationOptions &opts);

/// Marches the steady momentum and enthalpy balances from the inlet to the
/// outlet. Positive mass flow runs from the pipe's `from` end (s = 0);
/// negative flow is integrated spatially forward with reversed friction and
/// heat-exchange signs. Zero flow gives the hydrostatic profile at constant
/// temperature. Elevation is interpolated linearly between the endpoint
/// heights.
PipeProfile integrate_pipe(const Eos &eos, double inlet_pressure_pa,
                           double inlet_temperature_k, const Composition &comp,
                           double mass_flow_kg_s, const Pipe &pipe,
                           double h_from_m, double h_to_m,
                           const IntegrationOptions &opts = {});

/// Pressure-only march against a frozen temperature field sampled at the
/// station grid of `station_count`. Used by the network solver, which
/// iterates hydraulics against the most recent thermal sweep.
double integrate_pressure(const Eos &eos, double inlet_pressure_pa,
                          std::span<const double> temperature_k,
                          const Composition &comp, double mass_flow_kg_s,
                          const Pipe &pipe, double h_from_m, double h_to_m,
                          const IntegrationOptions &opts);

} // namespace co2net
