#include "co2net/hydraulics.hpp"

#include "co2net/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace co2net {

namespace {
constexpr double kLaminarRe = 2300.0;
constexpr double kTurbulentRe = 4000.0;
} // namespace

double reynolds(double mass_flow_kg_s, double diameter_m,
                double viscosity_pa_s) {
  if (!(diameter_m > 0.0) || !(viscosity_pa_s > 0.0)) {
    throw std::domain_error("reynolds: D and viscosity must be positive");
  }
  return 4.0 * std::abs(mass_flow_kg_s) /
         (units::kPi * viscosity_pa_s * diameter_m);
}

double friction_nikuradse(double roughness_m, double diameter_m) {
  if (!(roughness_m > 0.0) || roughness_m >= diameter_m) {
    throw std::domain_error("friction_nikuradse: requires 0 < k < D");
  }
  const double t = 2.0 * std::log10(diameter_m / roughness_m) + 1.138;
  return 1.0 / (t * t);
}

double friction_hofer(double re, double roughness_m, double diameter_m) {
  if (!(roughness_m > 0.0) || roughness_m >= diameter_m) {
    throw std::domain_error("friction_hofer: requires 0 < k < D");
  }
  if (re <= 7.0) {
    // The log10(Re/7) factor ends the formula's domain here; the laminar
    // law is the defined fallback.
    return re > 0.0 ? 64.0 / re : 0.0;
  }
  const double t = -2.0 * std::log10((4.518 / re) * std::log10(re / 7.0) +
                                     roughness_m / (3.71 * diameter_m));
  return 1.0 / (t * t);
}

double friction_factor(double re, double roughness_m, double diameter_m,
                       FrictionModel model) {
  if (re <= 0.0) return 0.0;
  auto turbulent = [&] {
    return model == FrictionModel::Hofer
               ? friction_hofer(re, roughness_m, diameter_m)
               : friction_nikuradse(roughness_m, diameter_m);
  };
  if (re < kLaminarRe) return 64.0 / re;
  if (re < kTurbulentRe) {
    const double w = (re - kLaminarRe) / (kTurbulentRe - kLaminarRe);
    return (1.0 - w) * 64.0 / re + w * turbulent();
  }
  return turbulent();
}

double PipeProfile::max_velocity_m_s() const {
  double m = 0.0;
  for (double v : velocity_m_s) m = std::max(m, std::abs(v));
  return m;
}

std::size_t station_count(double length_m, double grade,
                          const IntegrationOptions &opts) {
  const double step = std::abs(grade) > opts.steep_grade ? opts.steep_step_m
                                                         : opts.step_m;
  const auto n = static_cast<std::size_t>(std::ceil(length_m / step));
  return std::max<std::size_t>(n, 1) + 1;
}

namespace {

struct MarchContext {
  const Eos &eos;
  const Composition &comp;
  double qm;
  double area;
  double diameter;
  double lambda;
  double heat_term; // pi D c_h / 1, multiplied by (T - Ts)/qm per meter
  double soil_t;
  double dhds;
};

double friction_gradient(const MarchContext &ctx, double rho) {
  const double v = ctx.qm / (rho * ctx.area);
  return -(ctx.lambda / (2.0 * ctx.diameter)) * rho * v * std::abs(v);
}

double gravity_gradient(const MarchContext &ctx, double rho) {
  return -rho * units::kGravity * ctx.dhds;
}

} // namespace

PipeProfile integrate_pipe(const Eos &eos, double inlet_pressure_pa,
                           double inlet_temperature_k, const Composition &comp,
                           double mass_flow_kg_s, const Pipe &pipe,
                           double h_from_m, double h_to_m,
                           const IntegrationOptions &opts) {
  if (!(pipe.length_m > 0.0) || !(pipe.diameter_m > 0.0)) {
    throw std::invalid_argument("integrate_pipe: pipe needs L > 0 and D > 0");
  }
  if (!(opts.step_m > 0.0)) {
    throw std::invalid_argument("integrate_pipe: step must be positive");
  }

  const double grade = (h_to_m - h_from_m) / pipe.length_m;
  const std::size_t n = station_count(pipe.length_m, grade, opts);
  const double ds = pipe.length_m / static_cast<double>(n - 1);
  const double area = units::kPi * pipe.diameter_m * pipe.diameter_m / 4.0;

  MarchContext ctx{eos,
                   comp,
                   mass_flow_kg_s,
                   area,
                   pipe.diameter_m,
                   0.0,
                   units::kPi * pipe.diameter_m * pipe.heat_transfer_w_m2k,
                   pipe.soil_temperature_k,
                   grade};

  PipeProfile prof;
  prof.mass_flow_kg_s = mass_flow_kg_s;
  prof.re = reynolds(mass_flow_kg_s, pipe.diameter_m, opts.viscosity_pa_s);
  prof.lambda = friction_factor(prof.re, pipe.roughness_m, pipe.diameter_m,
                                opts.friction);
  ctx.lambda = prof.lambda;

  prof.position_m.reserve(n);
  prof.pressure_pa.reserve(n);
  prof.temperature_k.reserve(n);
  prof.density_kg_m3.reserve(n);
  prof.velocity_m_s.reserve(n);

  const bool zero_flow = mass_flow_kg_s == 0.0;
  double p = inlet_pressure_pa;
  double t = inlet_temperature_k;
  double rho;
  try {
    rho = eos.density(p, t, comp);
  } catch (const EosError &e) {
    throw EosError(std::string("integrate_pipe: inlet state invalid: ") +
                       e.what(),
                   p, t);
  }
  double h = zero_flow ? 0.0 : eos.enthalpy(p, t, comp);
  double v = zero_flow ? 0.0 : mass_flow_kg_s / (rho * area);
  const bool inlet_dense = opts.check_phase ? eos.is_dense(p, t) : true;

  prof.position_m.push_back(0.0);
  prof.pressure_pa.push_back(p);
  prof.temperature_k.push_back(t);
  prof.density_kg_m3.push_back(rho);
  prof.velocity_m_s.push_back(v);

  for (std::size_t i = 1; i < n; ++i) {
    const double s = static_cast<double>(i) * ds;
    double p_next, t_next, rho_next, v_next;
    if (zero_flow) {
      // Hydrostatic balance only; temperature carried along unchanged.
      const double g0 = gravity_gradient(ctx, rho);
      const double p_star = p + g0 * ds;
      const double rho_star = eos.density(p_star, t, comp);
      p_next = p + 0.5 * (g0 + gravity_gradient(ctx, rho_star)) * ds;
      t_next = t;
      rho_next = eos.density(p_next, t_next, comp);
      v_next = 0.0;
      prof.hydrostatic_drop_pa += p_next - p;
    } else {
      const double f_p0 = friction_gradient(ctx, rho) + gravity_gradient(ctx, rho);
      const double f_h0 = -ctx.heat_term * (t - ctx.soil_t) / mass_flow_kg_s;
      // Heun predictor-corrector; the inertia term integrates exactly to
      // -(Qm/A) * dv between stations.
      double p_star = p + f_p0 * ds;
      double h_star = h + f_h0 * ds;
      double t_star;
      double rho_star;
      double v_star;
      try {
        t_star = eos.temperature_from_enthalpy(p_star, h_star, comp);
        rho_star = eos.density(p_star, t_star, comp);
      } catch (const EosError &) {
        throw EosError("integrate_pipe: EoS failure at station " +
                           std::to_string(i) + " of pipe " + pipe.id,
                       p_star, t);
      }
      v_star = mass_flow_kg_s / (rho_star * area);

      const double f_p1 =
          friction_gradient(ctx, rho_star) + gravity_gradient(ctx, rho_star);
      const double f_h1 = -ctx.heat_term * (t_star - ctx.soil_t) / mass_flow_kg_s;

      double inertia = -(mass_flow_kg_s / area) * (v_star - v);
      p_next = p + 0.5 * (f_p0 + f_p1) * ds + inertia;
      const double h_next = h + 0.5 * (f_h0 + f_h1) * ds;
      try {
        t_next = eos.temperature_from_enthalpy(p_next, h_next, comp);
        rho_next = eos.density(p_next, t_next, comp);
      } catch (const EosError &) {
        throw EosError("integrate_pipe: EoS failure at station " +
                           std::to_string(i) + " of pipe " + pipe.id,
                       p_next, t);
      }
      v_next = mass_flow_kg_s / (rho_next * area);
      // One more inertia pass with the corrected endpoint velocity.
      const double inertia2 = -(mass_flow_kg_s / area) * (v_next - v);
      p_next += inertia2 - inertia;
      inertia = inertia2;
      t_next = eos.temperature_from_enthalpy(p_next, h_next, comp);
      rho_next = eos.density(p_next, t_next, comp);
      v_next = mass_flow_kg_s / (rho_next * area);

      prof.friction_drop_pa += 0.5 * (friction_gradient(ctx, rho) +
                                      friction_gradient(ctx, rho_star)) * ds;
      prof.hydrostatic_drop_pa += 0.5 * (gravity_gradient(ctx, rho) +
                                         gravity_gradient(ctx, rho_star)) * ds;
      prof.inertia_drop_pa += inertia;
      h = h_next;
    }

    p = p_next;
    t = t_next;
    rho = rho_next;
    v = v_next;

    prof.position_m.push_back(s);
    prof.pressure_pa.push_back(p);
    prof.temperature_k.push_back(t);
    prof.density_kg_m3.push_back(rho);
    prof.velocity_m_s.push_back(v);

    if (opts.check_phase && eos.is_dense(p, t) != inlet_dense) {
      prof.dense_ok = false;
      prof.truncated = true;
      break;
    }
  }
  return prof;
}

double integrate_pressure(const Eos &eos, double inlet_pressure_pa,
                          std::span<const double> temperature_k,
                          const Composition &comp, double mass_flow_kg_s,
                          const Pipe &pipe, double h_from_m, double h_to_m,
                          const IntegrationOptions &opts) {
  const double grade = (h_to_m - h_from_m) / pipe.length_m;
  const std::size_t n = station_count(pipe.length_m, grade, opts);
  if (temperature_k.size() != n) {
    throw std::invalid_argument(
        "integrate_pressure: temperature field does not match station grid");
  }
  const double ds = pipe.length_m / static_cast<double>(n - 1);
  const double area = units::kPi * pipe.diameter_m * pipe.diameter_m / 4.0;
  const double re =
      reynolds(mass_flow_kg_s, pipe.diameter_m, opts.viscosity_pa_s);
  const double lambda =
      friction_factor(re, pipe.roughness_m, pipe.diameter_m, opts.friction);

  MarchContext ctx{eos,    comp,           mass_flow_kg_s, area,
                   pipe.diameter_m, lambda, 0.0,            pipe.soil_temperature_k,
                   grade};

  double p = inlet_pressure_pa;
  double rho = eos.density(p, temperature_k[0], comp);
  double v = mass_flow_kg_s == 0.0 ? 0.0 : mass_flow_kg_s / (rho * area);

  for (std::size_t i = 1; i < n; ++i) {
    const double t1 = temperature_k[i];
    const double f0 = friction_gradient(ctx, rho) + gravity_gradient(ctx, rho);
    const double p_star = p + f0 * ds;
    const double rho_star = eos.density(p_star, t1, comp);
    const double f1 =
        friction_gradient(ctx, rho_star) + gravity_gradient(ctx, rho_star);
    double p_next = p + 0.5 * (f0 + f1) * ds;
    if (mass_flow_kg_s != 0.0) {
      const double v_star = mass_flow_kg_s / (rho_star * area);
      p_next += -(mass_flow_kg_s / area) * (v_star - v);
      const double rho_next = eos.density(p_next, t1, comp);
      v = mass_flow_kg_s / (rho_next * area);
      rho = rho_next;
    } else {
      rho = eos.density(p_next, t1, comp);
    }
    p = p_next;
  }
  return p;
}

} // namespace co2net
