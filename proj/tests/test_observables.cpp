#include <doctest.h>

#include <cmath>

#include "qpv/constants.hpp"
#include "qpv/errors.hpp"
#include "qpv/observables.hpp"
#include "qpv/presets.hpp"

using namespace qpv;

namespace {

PopulationState model_b_state(double p_alpha, double p_beta) {
  PopulationState p;
  p.populations = {1.0 - p_alpha - p_beta, 0.0, p_alpha, p_beta};
  return p;
}

}  // namespace

TEST_CASE("current") {
  LevelSystem s = preset_model_b(1e13);
  s.extraction.gamma_load_per_s = 0.0;
  CHECK(current(model_b_state(0.3, 0.1), s) == 0.0);

  s.extraction.gamma_load_per_s = 1e12;
  PopulationState full;
  full.populations = {0.0, 0.0, 1.0, 0.0};
  CHECK(current(full, s) == doctest::Approx(1.602e-7).epsilon(1e-3));
  CHECK(current(full, s) == doctest::Approx(1e12 * PhysicalConstants::e_charge).epsilon(1e-15));
}

TEST_CASE("short-circuit current magnitude for model B") {
  const LevelSystem s = at_operating_point(preset_model_b(1.0), 1e12, 1e16);
  const OperatingPoint op = operating_point(s);
  CHECK(op.current > 0.08e-6);
  CHECK(op.current < 0.32e-6);
  CHECK(op.power == doctest::Approx(op.current * op.voltage).epsilon(1e-14));
  CHECK(op.gamma_load == 1e16);
}

TEST_CASE("voltage") {
  const LevelSystem s = preset_model_b(1e13);
  CHECK(voltage(model_b_state(0.2, 0.2), s) == doctest::Approx(1.4).epsilon(1e-12));
  const double ratio = std::exp(10.0);
  const double pb = 1e-6;
  CHECK(std::abs(voltage(model_b_state(ratio * pb, pb), s) - 1.65852) < 1e-4);
  // Population inversion raises V above the level spacing; the opposite lowers it.
  CHECK(voltage(model_b_state(0.4, 0.1), s) > 1.4);
  CHECK(voltage(model_b_state(0.1, 0.4), s) < 1.4);
}

TEST_CASE("voltage uses the system's voltage temperature") {
  LevelSystem s = preset_model_b(1e13);
  s.voltage_temperature_k = 600.0;
  const double v = voltage(model_b_state(std::exp(10.0) * 1e-6, 1e-6), s);
  CHECK(v == doctest::Approx(1.4 + 10.0 * thermal_energy(600.0)).epsilon(1e-12));
}

TEST_CASE("voltage is undefined for an empty level") {
  const LevelSystem s = preset_model_b(1e13);
  CHECK_THROWS_AS(voltage(model_b_state(0.0, 0.2), s), UndefinedVoltageError);
  CHECK_THROWS_AS(voltage(model_b_state(0.2, 0.0), s), UndefinedVoltageError);
}

TEST_CASE("efficiency") {
  const double w = 1e13;
  const double eg = 1.8;
  const double p_in = eg * PhysicalConstants::e_charge * w;
  CHECK(efficiency(p_in, w, eg) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(efficiency(0.0, w, eg) == 0.0);
  CHECK(efficiency(0.25 * p_in, w, eg) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(efficiency(1e-6, 0.0, eg), DomainError);
  CHECK_THROWS_AS(efficiency(1e-6, -1.0, eg), DomainError);
}

TEST_CASE("operating point") {
  const OperatingPoint op = operating_point(preset_model_b(1e13));
  CHECK(op.current > 0.0);
  CHECK(op.voltage > 0.0);
  CHECK(op.voltage < 1.8);
  CHECK(std::abs(op.populations.sum() - 1.0) < 1e-12);
  CHECK(watts_to_uev_per_s(PhysicalConstants::e_charge * 1e-6) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("no load gives no current but a defined voltage") {
  LevelSystem s = preset_model_b(1e13);
  s.extraction.gamma_load_per_s = 0.0;
  const OperatingPoint op = operating_point(s);
  CHECK(op.current == 0.0);
  CHECK(op.power == 0.0);
  CHECK(std::isfinite(op.voltage));
}
