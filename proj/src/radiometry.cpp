#include "qpv/radiometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qpv/constants.hpp"
#include "qpv/errors.hpp"

namespace qpv {
namespace {

void require_positive(double value, const char* op, const char* arg) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(op) + ": " + arg + " must be positive and finite (got " +
                      std::to_string(value) + ")");
  }
}

constexpr double kExpCutoff = 700.0;
constexpr double kSeriesRelTol = 1e-16;
constexpr int kMaxSeriesTerms = 1'000'000;

}  // namespace

double bose_occupation(double delta_e_ev, double temperature_k) {
  require_positive(delta_e_ev, "bose_occupation", "delta_e");
  require_positive(temperature_k, "bose_occupation", "temperature");
  const double x = delta_e_ev / thermal_energy(temperature_k);
  if (x > kExpCutoff) return std::exp(-x);
  return 1.0 / std::expm1(x);
}

FluxResult planck_photon_flux(double band_gap_ev, double temperature_k) {
  require_positive(band_gap_ev, "planck_photon_flux", "band_gap");
  require_positive(temperature_k, "planck_photon_flux", "temperature");

  const double kt = thermal_energy(temperature_k);
  const double xg = band_gap_ev / kt;

  double sum = 0.0;
  int n = 1;
  for (; n <= kMaxSeriesTerms; ++n) {
    const double dn = n;
    const double term =
        std::exp(-dn * xg) * (xg * xg / dn + 2.0 * xg / (dn * dn) + 2.0 / (dn * dn * dn));
    sum += term;
    if (term == 0.0 || term < kSeriesRelTol * sum) break;
  }

  const double nu_scale = kt / PhysicalConstants::h;  // 1/s
  const double c = PhysicalConstants::c;
  const double prefactor = 2.0 * std::numbers::pi / (c * c) * nu_scale * nu_scale * nu_scale;
  return FluxResult{band_gap_ev, temperature_k, prefactor * sum, n};
}

double pump_rate_to_area(double pump_rate, double band_gap_ev, double temperature_k) {
  require_positive(pump_rate, "pump_rate_to_area", "pump_rate");
  const FluxResult flux = planck_photon_flux(band_gap_ev, temperature_k);
  if (!(flux.flux > 0.0)) {
    throw DomainError("pump_rate_to_area: photon flux above the gap underflows to zero");
  }
  return pump_rate / flux.flux;
}

}  // namespace qpv
