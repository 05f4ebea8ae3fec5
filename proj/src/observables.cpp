#include "qpv/observables.hpp"

#include <cmath>
#include <string>

#include "qpv/constants.hpp"
#include "qpv/errors.hpp"

namespace qpv {
namespace {

void require_size(const PopulationState& state, const LevelSystem& system) {
  if (state.populations.size() != system.levels.size()) {
    throw DomainError("population vector does not match the level system");
  }
}

}  // namespace

double current(const PopulationState& state, const LevelSystem& system) {
  require_size(state, system);
  const double p_source = state.populations[system.level_index(system.extraction.source)];
  return PhysicalConstants::e_charge * system.extraction.gamma_load_per_s * p_source;
}

double voltage(const PopulationState& state, const LevelSystem& system) {
  require_size(state, system);
  const auto& x = system.extraction;
  const double p_source = state.populations[system.level_index(x.source)];
  const double p_sink = state.populations[system.level_index(x.sink)];
  if (!(p_source > 0.0) || !(p_sink > 0.0)) {
    throw UndefinedVoltageError("voltage undefined: P_" + x.source + " = " + std::to_string(p_source) + ", P_" +
                                x.sink + " = " + std::to_string(p_sink));
  }
  const double gap = system.energy(x.source) - system.energy(x.sink);
  return gap + thermal_energy(system.voltage_temperature_k) * std::log(p_source / p_sink);
}

double efficiency(double max_power_w, double pump_rate, double band_gap_ev) {
  if (!(pump_rate > 0.0) || !std::isfinite(pump_rate)) throw DomainError("efficiency: pump_rate must be > 0");
  if (!(band_gap_ev > 0.0)) throw DomainError("efficiency: band_gap must be > 0");
  if (!(max_power_w >= 0.0)) throw DomainError("efficiency: max_power must be >= 0");
  return max_power_w / (band_gap_ev * PhysicalConstants::e_charge * pump_rate);
}

OperatingPoint operating_point(const LevelSystem& system) {
  const SteadyStateReport ss = steady_state_direct(build_rate_matrix(system));
  OperatingPoint op;
  op.gamma_load = system.extraction.gamma_load_per_s;
  op.current = current(ss.state, system);
  op.voltage = voltage(ss.state, system);
  op.power = op.current * op.voltage;
  op.populations = ss.state;
  return op;
}

double watts_to_uev_per_s(double watts) { return watts / PhysicalConstants::e_charge * 1e6; }

}  // namespace qpv
