#pragma once

#include <numbers>

namespace qpv {

/// Physical constants in the units used throughout the library: energies in eV,
/// rates in 1/s. Derived from the exact SI definitions so that h == 2*pi*hbar
/// holds to roundoff.
struct PhysicalConstants {
  static constexpr double planck_si = 6.62607015e-34;      // J s
  static constexpr double boltzmann_si = 1.380649e-23;     // J/K
  static constexpr double e_charge = 1.602176634e-19;      // C
  static constexpr double c = 2.99792458e8;                // m/s

  static constexpr double h = planck_si / e_charge;             // eV s
  static constexpr double hbar = h / (2.0 * std::numbers::pi);  // eV s
  static constexpr double k_B = boltzmann_si / e_charge;        // eV/K
};

/// hbar*gamma [eV] -> gamma [1/s]. The only place this conversion happens.
constexpr double rate_from_hbar_gamma(double hbar_gamma_ev) {
  return hbar_gamma_ev / PhysicalConstants::hbar;
}

/// Thermal energy k_B*T in eV.
constexpr double thermal_energy(double temperature_k) {
  return PhysicalConstants::k_B * temperature_k;
}

}  // namespace qpv
