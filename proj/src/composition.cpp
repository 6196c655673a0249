#include "co2net/composition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace co2net {

namespace {
constexpr std::array<std::string_view, kSpeciesCount> kNames = {"CO2", "H2",
                                                                "O2", "N2"};
// kg/mol
constexpr std::array<double, kSpeciesCount> kMolarMass = {0.04401, 0.002016,
                                                          0.031999, 0.0280134};
} // namespace

std::string_view species_name(Species s) {
  return kNames[static_cast<std::size_t>(s)];
}

double species_molar_mass(Species s) {
  return kMolarMass[static_cast<std::size_t>(s)];
}

Composition::Composition() : x_{1.0, 0.0, 0.0, 0.0} {}

Composition::Composition(const std::array<double, kSpeciesCount> &mole_fractions)
    : x_(mole_fractions) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    if (!(x_[i] >= 0.0)) {
      throw std::invalid_argument("Composition: negative mole fraction for " +
                                  std::string(kNames[i]));
    }
    sum += x_[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("Composition: mole fractions sum to " +
                                std::to_string(sum) + ", expected 1");
  }
}

Composition Composition::pure_co2() { return Composition(); }

Composition Composition::from_percent(double co2, double h2, double o2) {
  const double n2 = 100.0 - co2 - h2 - o2;
  if (n2 < -1e-9) {
    throw std::invalid_argument("Composition: percentages exceed 100");
  }
  std::array<double, kSpeciesCount> x = {co2 / 100.0, h2 / 100.0, o2 / 100.0,
                                         n2 > 0.0 ? n2 / 100.0 : 0.0};
  // Remove rounding residue so the sum-to-one invariant holds exactly.
  x[3] = 1.0 - x[0] - x[1] - x[2];
  if (x[3] < 0.0 && x[3] > -1e-12) x[3] = 0.0;
  return Composition(x);
}

double Composition::molar_mass() const {
  double mu = 0.0;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) mu += x_[i] * kMolarMass[i];
  return mu;
}

double molar_mass(const Composition &c) { return c.molar_mass(); }

} // namespace co2net
