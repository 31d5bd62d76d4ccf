#pragma once

#include <numbers>

namespace ionphoton {

// All frequencies and rates in this library are angular, in rad/us.
// Times are in us, magnetic fields in gauss.

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Linear frequency in MHz -> angular frequency in rad/us.
constexpr double angular_from_mhz(double f_mhz) { return two_pi * f_mhz; }

/// Angular frequency in rad/us -> linear frequency in MHz.
constexpr double mhz_from_angular(double w) { return w / two_pi; }

/// Bohr magneton over Planck constant, MHz per gauss.
inline constexpr double bohr_mhz_per_gauss = 1.399624;

}  // namespace ionphoton
