#pragma once

#include <string>

namespace qpv {

struct Bath {
  std::string name;
  double temperature_k = 0.0;
};

struct FluxResult {
  double band_gap_ev = 0.0;
  double temperature_k = 0.0;
  double flux = 0.0;  ///< photons per m^2 per s above the gap
  int series_terms = 0;
};

/// Mean thermal photon number 1/(exp(dE/kT) - 1). Exponents above 700 fall
/// back to exp(-x), which underflows gracefully to 0 instead of overflowing.
double bose_occupation(double delta_e_ev, double temperature_k);

/// Blackbody photon flux above a band gap,
///   (2 pi / c^2) (kT/h)^3 * int_{x_g}^inf x^2/(e^x - 1) dx,
/// with the integral summed as the exponential series
///   sum_n e^{-n x_g} (x_g^2/n + 2 x_g/n^2 + 2/n^3).
FluxResult planck_photon_flux(double band_gap_ev, double temperature_k);

/// Absorber area [m^2] whose photon intake at the blackbody flux equals
/// `pump_rate` [1/s].
double pump_rate_to_area(double pump_rate, double band_gap_ev, double temperature_k);

/// Area correspondence commonly quoted for a 1e15 1/s pump at 1.8 eV, 6000 K.
/// Kept for side-by-side reporting; it disagrees with pump_rate_to_area by
/// roughly two orders of magnitude.
inline constexpr double kQuotedPumpRate = 1e15;
inline constexpr double kQuotedArea_m2 = 0.1e-12;

}  // namespace qpv
