#pragma once

namespace co2net::units {

inline constexpr double kGasConstant = 8.31446261815324; // J/(mol K)
inline constexpr double kGravity = 9.80665;              // m/s^2
inline constexpr double kAtmospherePa = 1.01325e5;
inline constexpr double kCelsiusZeroK = 273.15;
inline constexpr double kPi = 3.14159265358979323846;

// Gauge pressures at I/O boundaries are bar gauge; everything internal is
// absolute pascals.
constexpr double barg_to_pa(double barg) { return (barg + 1.01325) * 1e5; }
constexpr double pa_to_barg(double pa) { return pa / 1e5 - 1.01325; }

constexpr double celsius_to_kelvin(double c) { return c + kCelsiusZeroK; }
constexpr double kelvin_to_celsius(double k) { return k - kCelsiusZeroK; }

} // namespace co2net::units
