#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qpv/observables.hpp"
#include "qpv/rate_network.hpp"

namespace qpv {

struct IVCurve {
  double pump_rate = 0.0;
  std::vector<OperatingPoint> points;  ///< strictly ascending voltage
};

struct PumpSweepPoint {
  double pump_rate = 0.0;
  double max_power = 0.0;   ///< W
  double v_mpp = 0.0;       ///< V
  double gamma_mpp = 0.0;   ///< 1/s
  double efficiency = 0.0;  ///< NaN when the template has no pump
  bool multimodal = false;  ///< coarse scan saw more than one local maximum
};

struct PumpSweep {
  double band_gap_ev = 0.0;
  std::vector<PumpSweepPoint> points;  ///< strictly ascending pump_rate
};

struct MaxPowerOptions {
  double gamma_min = 1e3;
  double gamma_max = 1e18;
  std::size_t coarse_points = 60;
  double log_gamma_tol = 1e-6;  ///< bracket width in ln(Gamma)
  std::optional<double> band_gap_ev;  ///< default: pump_band_gap(template)
};

struct MaxPowerResult {
  PumpSweepPoint point;
  double coarse_max_power = 0.0;
  double coarse_gamma = 0.0;
  std::size_t evaluations = 0;
};

/// n points log-spaced over [lo, hi], endpoints exact.
std::vector<double> log_space(double lo, double hi, std::size_t n);

/// Worker count for sweeps: QPV_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
unsigned default_thread_count();

/// Steady-state operating points at n log-spaced loads. Points with undefined
/// voltage are dropped; the rest are sorted by voltage.
IVCurve iv_sweep(const LevelSystem& template_system, double pump_rate, double gamma_min, double gamma_max,
                 std::size_t n_points, unsigned threads = 1);

/// Coarse log-grid scan of P(Gamma) followed by golden-section refinement on
/// ln(Gamma) inside the bracket around the best grid point.
MaxPowerResult max_power_search(const LevelSystem& template_system, double pump_rate,
                                const MaxPowerOptions& options = {});

PumpSweepPoint max_power_point(const LevelSystem& template_system, double pump_rate,
                               const MaxPowerOptions& options = {});

/// max_power_point over n log-spaced pump rates. Points are independent and
/// may run on `threads` workers; output order does not depend on scheduling.
PumpSweep pump_sweep(const LevelSystem& template_system, double wp_min, double wp_max, std::size_t n_points,
                     unsigned threads = default_thread_count(), const MaxPowerOptions& options = {});

}  // namespace qpv
