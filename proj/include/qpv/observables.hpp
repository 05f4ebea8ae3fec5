#pragma once

#include "qpv/dynamics.hpp"
#include "qpv/rate_network.hpp"

namespace qpv {

struct OperatingPoint {
  double gamma_load = 0.0;  ///< 1/s
  double current = 0.0;     ///< A
  double voltage = 0.0;     ///< V
  double power = 0.0;       ///< W
  PopulationState populations;
};

struct EfficiencyPoint {
  double pump_rate = 0.0;
  double max_power = 0.0;
  double efficiency = 0.0;
  double band_gap_ev = 0.0;
};

/// I = e * Gamma * P_source.
double current(const PopulationState& state, const LevelSystem& system);

/// V = E_source - E_sink + k_B T ln(P_source / P_sink), T the system's voltage
/// temperature. Energies are in eV, so the eV -> V division by e is the identity.
/// Throws UndefinedVoltageError when either population is zero.
double voltage(const PopulationState& state, const LevelSystem& system);

/// P_out / P_in with P_in = band_gap [J] * pump_rate.
double efficiency(double max_power_w, double pump_rate, double band_gap_ev);

/// Steady state of `system` (direct solve) mapped to current, voltage, power.
OperatingPoint operating_point(const LevelSystem& system);

/// Power in W -> ueV/s.
double watts_to_uev_per_s(double watts);

}  // namespace qpv
