#pragma once

#include "co2net/composition.hpp"

#include <array>
#include <memory>
#include <stdexcept>
#include <string>

namespace co2net {

/// Per-species critical constants and an ideal-gas heat-capacity cubic
/// cp0(T) = c0 + c1*T + c2*T^2 + c3*T^3 [J/(mol K)].
struct SpeciesEosData {
  double tc_k = 0.0;
  double pc_pa = 0.0;
  double acentric = 0.0;
  std::array<double, 4> cp_poly = {0, 0, 0, 0};
};

struct EosParameters {
  std::array<SpeciesEosData, kSpeciesCount> species;
  std::array<std::array<double, kSpeciesCount>, kSpeciesCount> k_ij;

  static EosParameters defaults();

  /// Throws std::invalid_argument on asymmetric k_ij, nonzero diagonal, or
  /// nonpositive critical constants.
  void validate() const;
};

/// Point state with the EoS-derived quantities filled in.
struct FluidState {
  double pressure_pa = 0.0;
  double temperature_k = 0.0;
  Composition composition;
  double density_kg_m3 = 0.0;
  double molar_density_mol_m3 = 0.0;
  double z_factor = 0.0;
  double enthalpy_j_kg = 0.0;       // specific, reference H(ideal, 273.15 K) = 0
  double joule_thomson_k_pa = 0.0;
};

class EosError : public std::runtime_error {
public:
  EosError(const std::string &what, double p_pa, double t_k);
  double pressure_pa;
  double temperature_k;
};

/// Thermodynamic closure. Implementations are immutable after construction
/// and safe to call from many threads.
class Eos {
public:
  virtual ~Eos() = default;

  /// Mass density [kg/m3].
  virtual double density(double p_pa, double t_k, const Composition &c) const = 0;

  /// Specific enthalpy [J/kg]: ideal-gas part (zero at 273.15 K) plus the
  /// EoS residual.
  virtual double enthalpy(double p_pa, double t_k, const Composition &c) const = 0;

  /// Pure-CO2 vapor-liquid equilibrium pressure [Pa] from equal fugacities,
  /// resolved to 1 Pa. Domain: triple point 216.6 K up to Tc.
  virtual double saturation_pressure(double t_k) const = 0;

  /// Joule-Thomson coefficient [K/Pa], central finite differences on
  /// enthalpy with relative step 1e-6.
  double joule_thomson(double p_pa, double t_k, const Composition &c) const;

  /// Dense-phase test against the pure-CO2 boundary (used for mixtures too):
  /// above the saturation curve below Tc, at or above Pc from Tc upward.
  bool is_dense(double p_pa, double t_k) const;
  bool is_dense(double p_pa, double t_k, const Composition &c) const {
    (void)c;
    return is_dense(p_pa, t_k);
  }

  /// Distance to the dense-phase boundary [Pa], positive when dense.
  double dense_margin(double p_pa, double t_k) const;

  /// Full state at (P, T, composition).
  FluidState state(double p_pa, double t_k, const Composition &c) const;

  /// Temperature [K] recovering H(P, T) = h on [200 K, 400 K] to 1e-4 K.
  double temperature_from_enthalpy(double p_pa, double h_j_kg,
                                   const Composition &c) const;

  double co2_critical_temperature() const { return co2_tc_; }
  double co2_critical_pressure() const { return co2_pc_; }

protected:
  double co2_tc_ = 304.1282;
  double co2_pc_ = 7.3773e6;
};

/// Peng-Robinson cubic with van der Waals one-fluid mixing rules. Reference
/// closure; accurate to the few percent the design questions need, and
/// swappable behind the Eos interface.
class CubicEos final : public Eos {
public:
  explicit CubicEos(EosParameters params = EosParameters::defaults());

  double density(double p_pa, double t_k, const Composition &c) const override;
  double enthalpy(double p_pa, double t_k, const Composition &c) const override;
  double saturation_pressure(double t_k) const override;

  const EosParameters &parameters() const { return params_; }

private:
  struct Mixture {
    double a = 0.0;     // Pa m^6/mol^2
    double dadt = 0.0;  // d a / d T
    double b = 0.0;     // m^3/mol
    double mu = 0.0;    // kg/mol
  };

  Mixture mixture(double t_k, const Composition &c) const;
  double compressibility(double p_pa, double t_k, const Composition &c,
                         const Mixture &mix) const;

  EosParameters params_;
};

/// Parses a JSON override document (species constants, cp polynomials, k_ij
/// matrix) on top of the defaults. Throws std::invalid_argument on malformed
/// input.
EosParameters eos_parameters_from_json(const std::string &json_text);

std::shared_ptr<const Eos> make_default_eos();

} // namespace co2net
