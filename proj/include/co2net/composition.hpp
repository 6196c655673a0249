#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace co2net {

enum class Species : std::size_t { CO2 = 0, H2 = 1, O2 = 2, N2 = 3 };

inline constexpr std::size_t kSpeciesCount = 4;

std::string_view species_name(Species s);

/// Fixed species molar masses [kg/mol].
double species_molar_mass(Species s);

/// Mole-fraction vector over {CO2, H2, O2, N2}. Fractions are validated on
/// construction: nonnegative and summing to one within 1e-12.
class Composition {
public:
  /// Pure CO2.
  Composition();

  explicit Composition(const std::array<double, kSpeciesCount> &mole_fractions);

  static Composition pure_co2();

  /// Convenience for the impurity cases quoted in percent, e.g. (96, 2, 2).
  /// The N2 share fills any remainder to 100.
  static Composition from_percent(double co2, double h2, double o2);

  double fraction(Species s) const { return x_[static_cast<std::size_t>(s)]; }
  const std::array<double, kSpeciesCount> &fractions() const { return x_; }

  /// Mixture molar mass [kg/mol], the mole-fraction weighted sum.
  double molar_mass() const;

  bool operator==(const Composition &) const = default;

private:
  std::array<double, kSpeciesCount> x_;
};

/// Mixture molar mass [kg/mol].
double molar_mass(const Composition &c);

} // namespace co2net
