#include "co2net/eos.hpp"

#include "co2net/units.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace co2net {

namespace {

constexpr double kR = units::kGasConstant;
constexpr double kTriplePointK = 216.6;
constexpr double kOmegaA = 0.45724;
constexpr double kOmegaB = 0.07780;
constexpr double kSqrt2 = 1.4142135623730951;
// Compressibility at the Peng-Robinson critical point, used to tell the
// liquid-like branch from the vapor-like one when the cubic has a single
// real root.
constexpr double kCriticalZ = 0.3074013086987038;

double kappa_of_acentric(double omega) {
  return 0.37464 + 1.54226 * omega - 0.26992 * omega * omega;
}

/// Real roots of z^3 + a2 z^2 + a1 z + a0, ascending. Returns the count.
int solve_cubic(double a2, double a1, double a0, std::array<double, 3> &roots) {
  const double q = (a2 * a2 - 3.0 * a1) / 9.0;
  const double r = (2.0 * a2 * a2 * a2 - 9.0 * a2 * a1 + 27.0 * a0) / 54.0;
  int n = 0;
  if (r * r < q * q * q) {
    const double theta = std::acos(r / std::sqrt(q * q * q));
    const double m = -2.0 * std::sqrt(q);
    roots[0] = m * std::cos(theta / 3.0) - a2 / 3.0;
    roots[1] = m * std::cos((theta + 2.0 * units::kPi) / 3.0) - a2 / 3.0;
    roots[2] = m * std::cos((theta - 2.0 * units::kPi) / 3.0) - a2 / 3.0;
    n = 3;
  } else {
    const double s = std::cbrt(std::abs(r) + std::sqrt(r * r - q * q * q));
    const double a = r >= 0.0 ? -s : s;
    const double b = a == 0.0 ? 0.0 : q / a;
    roots[0] = (a + b) - a2 / 3.0;
    n = 1;
  }
  // Newton polish; the closed forms lose digits when roots nearly coincide.
  for (int i = 0; i < n; ++i) {
    double z = roots[i];
    for (int it = 0; it < 3; ++it) {
      const double f = ((z + a2) * z + a1) * z + a0;
      const double df = (3.0 * z + 2.0 * a2) * z + a1;
      if (df == 0.0) break;
      z -= f / df;
    }
    roots[i] = z;
  }
  std::sort(roots.begin(), roots.begin() + n);
  return n;
}

double ln_fugacity_coefficient(double z, double a_dim, double b_dim) {
  return z - 1.0 - std::log(z - b_dim) -
         a_dim / (2.0 * kSqrt2 * b_dim) *
             std::log((z + (1.0 + kSqrt2) * b_dim) /
                      (z + (1.0 - kSqrt2) * b_dim));
}

std::string state_tag(double p_pa, double t_k) {
  std::ostringstream os;
  os << " at P = " << p_pa << " Pa, T = " << t_k << " K";
  return os.str();
}

} // namespace

EosError::EosError(const std::string &what, double p_pa, double t_k)
    : std::runtime_error(what + state_tag(p_pa, t_k)), pressure_pa(p_pa),
      temperature_k(t_k) {}

EosParameters EosParameters::defaults() {
  EosParameters p;
  // Tc [K], Pc [Pa], acentric factor, cp0 cubic [J/(mol K)].
  p.species[0] = {304.1282, 7.3773e6, 0.22394,
                  {22.26, 5.981e-2, -3.501e-5, 7.469e-9}};   // CO2
  p.species[1] = {33.145, 1.2964e6, -0.219,
                  {29.11, -0.1916e-2, 0.4003e-5, -0.8704e-9}}; // H2
  p.species[2] = {154.581, 5.043e6, 0.0222,
                  {25.48, 1.520e-2, -0.7155e-5, 1.312e-9}};  // O2
  p.species[3] = {126.192, 3.3958e6, 0.0372,
                  {28.90, -0.1571e-2, 0.8081e-5, -2.873e-9}}; // N2
  for (auto &row : p.k_ij) row.fill(0.0);
  return p;
}

void EosParameters::validate() const {
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    const auto &s = species[i];
    if (!(s.tc_k > 0.0) || !(s.pc_pa > 0.0)) {
      throw std::invalid_argument(
          "EosParameters: nonpositive critical constants for " +
          std::string(species_name(static_cast<Species>(i))));
    }
    if (k_ij[i][i] != 0.0) {
      throw std::invalid_argument("EosParameters: k_ii must be zero");
    }
    for (std::size_t j = 0; j < kSpeciesCount; ++j) {
      if (k_ij[i][j] != k_ij[j][i]) {
        throw std::invalid_argument("EosParameters: k_ij must be symmetric");
      }
    }
  }
}

double Eos::joule_thomson(double p_pa, double t_k, const Composition &c) const {
  const double dp = p_pa * 1e-6;
  const double dt = t_k * 1e-6;
  const double dhdp =
      (enthalpy(p_pa + dp, t_k, c) - enthalpy(p_pa - dp, t_k, c)) / (2.0 * dp);
  const double dhdt =
      (enthalpy(p_pa, t_k + dt, c) - enthalpy(p_pa, t_k - dt, c)) / (2.0 * dt);
  return -dhdp / dhdt;
}

bool Eos::is_dense(double p_pa, double t_k) const {
  return dense_margin(p_pa, t_k) > 0.0;
}

double Eos::dense_margin(double p_pa, double t_k) const {
  if (t_k >= co2_tc_) return p_pa - co2_pc_;
  // The solid (dry ice) region is out of scope; below the triple point the
  // boundary is held at its triple-point value.
  const double t = std::max(t_k, kTriplePointK);
  return p_pa - saturation_pressure(t);
}

FluidState Eos::state(double p_pa, double t_k, const Composition &c) const {
  FluidState s;
  s.pressure_pa = p_pa;
  s.temperature_k = t_k;
  s.composition = c;
  s.density_kg_m3 = density(p_pa, t_k, c);
  const double mu = c.molar_mass();
  s.molar_density_mol_m3 = s.density_kg_m3 / mu;
  s.z_factor = p_pa / (s.molar_density_mol_m3 * kR * t_k);
  s.enthalpy_j_kg = enthalpy(p_pa, t_k, c);
  s.joule_thomson_k_pa = joule_thomson(p_pa, t_k, c);
  return s;
}

double Eos::temperature_from_enthalpy(double p_pa, double h_j_kg,
                                      const Composition &c) const {
  double lo = 200.0, hi = 400.0;
  auto f = [&](double t) { return enthalpy(p_pa, t, c) - h_j_kg; };
  double t = 300.0;
  double ft = f(t);
  // Newton with a finite-difference slope; H(T) at fixed P is close to
  // linear over the operating envelope, so this usually lands in a few
  // steps. Bisection picks up the rare misbehaving case.
  for (int it = 0; it < 12; ++it) {
    if (std::abs(ft) < 1e-9) return t;
    const double dt = 1e-2;
    const double slope = (f(t + dt) - ft) / dt;
    if (!(slope > 0.0)) break;
    const double step = ft / slope;
    const double tn = t - step;
    if (!(tn > lo && tn < hi)) break;
    if (std::abs(step) < 1e-4) return tn;
    t = tn;
    ft = f(t);
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) {
    throw EosError("temperature_from_enthalpy: enthalpy outside [200,400] K bracket",
                   p_pa, 0.0);
  }
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

CubicEos::CubicEos(EosParameters params) : params_(std::move(params)) {
  params_.validate();
  co2_tc_ = params_.species[0].tc_k;
  co2_pc_ = params_.species[0].pc_pa;
}

CubicEos::Mixture CubicEos::mixture(double t_k, const Composition &c) const {
  std::array<double, kSpeciesCount> a{}, dadt{};
  Mixture mix;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    const auto &sp = params_.species[i];
    const double kap = kappa_of_acentric(sp.acentric);
    const double sqrt_tr = std::sqrt(t_k / sp.tc_k);
    const double sqrt_alpha = 1.0 + kap * (1.0 - sqrt_tr);
    const double ac = kOmegaA * kR * kR * sp.tc_k * sp.tc_k / sp.pc_pa;
    a[i] = ac * sqrt_alpha * sqrt_alpha;
    dadt[i] = -ac * kap * sqrt_alpha / std::sqrt(t_k * sp.tc_k);
    mix.b += c.fraction(static_cast<Species>(i)) * kOmegaB * kR * sp.tc_k / sp.pc_pa;
  }
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    const double xi = c.fraction(static_cast<Species>(i));
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < kSpeciesCount; ++j) {
      const double xj = c.fraction(static_cast<Species>(j));
      if (xj == 0.0) continue;
      const double w = xi * xj * (1.0 - params_.k_ij[i][j]);
      const double aij = std::sqrt(a[i] * a[j]);
      mix.a += w * aij;
      mix.dadt += w * 0.5 * (dadt[i] * a[j] + a[i] * dadt[j]) / aij;
    }
  }
  mix.mu = c.molar_mass();
  return mix;
}

double CubicEos::compressibility(double p_pa, double t_k, const Composition &c,
                                 const Mixture &mix) const {
  const double a_dim = mix.a * p_pa / (kR * kR * t_k * t_k);
  const double b_dim = mix.b * p_pa / (kR * t_k);
  std::array<double, 3> roots;
  const int n = solve_cubic(b_dim - 1.0, a_dim - 2.0 * b_dim - 3.0 * b_dim * b_dim,
                            b_dim * b_dim + b_dim * b_dim * b_dim - a_dim * b_dim,
                            roots);
  double zmin = 0.0, zmax = 0.0;
  int physical = 0;
  for (int i = 0; i < n; ++i) {
    if (roots[i] > b_dim * (1.0 + 1e-12)) {
      if (physical == 0) zmin = roots[i];
      zmax = roots[i];
      ++physical;
    }
  }
  if (physical == 0) {
    throw EosError("cubic EoS: no physical compressibility root", p_pa, t_k);
  }
  if (physical == 1 || zmax - zmin < 1e-12) return zmax;
  // Root selection is deterministic by phase classification: dense states
  // take the liquid-like (largest density, smallest z) root.
  return is_dense(p_pa, t_k) ? zmin : zmax;
}

double CubicEos::density(double p_pa, double t_k, const Composition &c) const {
  if (!(p_pa > 0.0) || !(t_k > 0.0)) {
    throw EosError("cubic EoS: state requires P > 0 and T > 0", p_pa, t_k);
  }
  const Mixture mix = mixture(t_k, c);
  const double z = compressibility(p_pa, t_k, c, mix);
  return p_pa * mix.mu / (z * kR * t_k);
}

double CubicEos::enthalpy(double p_pa, double t_k, const Composition &c) const {
  if (!(p_pa > 0.0) || !(t_k > 0.0)) {
    throw EosError("cubic EoS: state requires P > 0 and T > 0", p_pa, t_k);
  }
  const double t0 = units::kCelsiusZeroK;
  double h_ideal = 0.0; // J/mol
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    const double xi = c.fraction(static_cast<Species>(i));
    if (xi == 0.0) continue;
    const auto &cp = params_.species[i].cp_poly;
    double integral = 0.0;
    double tp = t_k, t0p = t0;
    for (int k = 0; k < 4; ++k) {
      integral += cp[k] * (tp - t0p) / static_cast<double>(k + 1);
      tp *= t_k;
      t0p *= t0;
    }
    h_ideal += xi * integral;
  }
  const Mixture mix = mixture(t_k, c);
  const double z = compressibility(p_pa, t_k, c, mix);
  const double b_dim = mix.b * p_pa / (kR * t_k);
  const double h_res =
      kR * t_k * (z - 1.0) +
      (t_k * mix.dadt - mix.a) / (2.0 * kSqrt2 * mix.b) *
          std::log((z + (1.0 + kSqrt2) * b_dim) / (z + (1.0 - kSqrt2) * b_dim));
  return (h_ideal + h_res) / mix.mu;
}

double CubicEos::saturation_pressure(double t_k) const {
  const double tc = params_.species[0].tc_k;
  const double pc = params_.species[0].pc_pa;
  if (t_k < kTriplePointK - 1e-9 || t_k > tc + 1e-9) {
    throw std::domain_error(
        "saturation_pressure: T outside [216.6 K, Tc] for CO2");
  }
  if (t_k >= tc * (1.0 - 1e-12)) return pc;

  const Composition co2 = Composition::pure_co2();
  const Mixture mix = mixture(t_k, co2);
  const double vc = kCriticalZ * kR * tc / pc;

  // Sign of (ln phi_liquid - ln phi_vapor): positive below the saturation
  // pressure, negative above, so plain bisection brackets the VLE point.
  auto vle_sign = [&](double p) {
    const double a_dim = mix.a * p / (kR * kR * t_k * t_k);
    const double b_dim = mix.b * p / (kR * t_k);
    std::array<double, 3> roots;
    const int n = solve_cubic(b_dim - 1.0,
                              a_dim - 2.0 * b_dim - 3.0 * b_dim * b_dim,
                              b_dim * b_dim + b_dim * b_dim * b_dim - a_dim * b_dim,
                              roots);
    double zmin = 0.0, zmax = 0.0;
    int physical = 0;
    for (int i = 0; i < n; ++i) {
      if (roots[i] > b_dim * (1.0 + 1e-12)) {
        if (physical == 0) zmin = roots[i];
        zmax = roots[i];
        ++physical;
      }
    }
    if (physical >= 2 && zmax - zmin > 1e-11) {
      return ln_fugacity_coefficient(zmin, a_dim, b_dim) -
             ln_fugacity_coefficient(zmax, a_dim, b_dim);
    }
    if (physical == 0) return 1.0;
    const double v = zmax * kR * t_k / p;
    return v < vc ? -1.0 : 1.0;
  };

  double lo = 1e3, hi = pc;
  if (!(vle_sign(lo) > 0.0) || !(vle_sign(hi) < 0.0)) {
    throw EosError("saturation_pressure: failed to bracket the VLE point", 0.0,
                   t_k);
  }
  while (hi - lo > 1.0) {
    const double mid = 0.5 * (lo + hi);
    if (vle_sign(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

EosParameters eos_parameters_from_json(const std::string &json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("EoS override: invalid JSON: ") +
                                e.what());
  }
  EosParameters p = EosParameters::defaults();
  if (doc.contains("species")) {
    for (std::size_t i = 0; i < kSpeciesCount; ++i) {
      const std::string name(species_name(static_cast<Species>(i)));
      if (!doc["species"].contains(name)) continue;
      const auto &s = doc["species"][name];
      auto &target = p.species[i];
      if (s.contains("tc_k")) target.tc_k = s["tc_k"].get<double>();
      if (s.contains("pc_pa")) target.pc_pa = s["pc_pa"].get<double>();
      if (s.contains("acentric")) target.acentric = s["acentric"].get<double>();
      if (s.contains("cp_poly")) {
        const auto &poly = s["cp_poly"];
        if (!poly.is_array() || poly.size() != 4) {
          throw std::invalid_argument("EoS override: cp_poly needs 4 numbers");
        }
        for (std::size_t k = 0; k < 4; ++k) target.cp_poly[k] = poly[k].get<double>();
      }
    }
  }
  if (doc.contains("k_ij")) {
    const auto &m = doc["k_ij"];
    if (!m.is_array() || m.size() != kSpeciesCount) {
      throw std::invalid_argument("EoS override: k_ij must be a 4x4 matrix");
    }
    for (std::size_t i = 0; i < kSpeciesCount; ++i) {
      if (!m[i].is_array() || m[i].size() != kSpeciesCount) {
        throw std::invalid_argument("EoS override: k_ij must be a 4x4 matrix");
      }
      for (std::size_t j = 0; j < kSpeciesCount; ++j) {
        p.k_ij[i][j] = m[i][j].get<double>();
      }
    }
  }
  p.validate();
  return p;
}

std::shared_ptr<const Eos> make_default_eos() {
  return std::make_shared<CubicEos>();
}

} // namespace co2net
