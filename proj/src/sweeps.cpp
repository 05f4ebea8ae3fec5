#include "qpv/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "qpv/errors.hpp"

namespace qpv {
namespace {

constexpr double kUndefined = -std::numeric_limits<double>::infinity();

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
// thrown by any task is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct PowerSample {
  double power = kUndefined;
  double voltage = 0.0;
};

PowerSample sample_power(const LevelSystem& tmpl, double pump_rate, double gamma) {
  try {
    const OperatingPoint op = operating_point(at_operating_point(tmpl, pump_rate, gamma));
    return {op.power, op.voltage};
  } catch (const UndefinedVoltageError&) {
    return {};
  }
}

}  // namespace

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("log_space: require 0 < lo < hi");
  if (n < 2) throw DomainError("log_space: need at least two points");
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("QPV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

IVCurve iv_sweep(const LevelSystem& tmpl, double pump_rate, double gamma_min, double gamma_max,
                 std::size_t n_points, unsigned threads) {
  if (n_points < 10) throw DomainError("iv_sweep: n_points must be >= 10");
  if (!(gamma_min > 0.0) || !(gamma_max > gamma_min)) {
    throw DomainError("iv_sweep: require 0 < gamma_min < gamma_max");
  }
  require_valid(at_operating_point(tmpl, pump_rate, gamma_min));

  const auto gammas = log_space(gamma_min, gamma_max, n_points);
  std::vector<std::optional<OperatingPoint>> slots(n_points);
  parallel_for(n_points, threads, [&](std::size_t i) {
    try {
      slots[i] = operating_point(at_operating_point(tmpl, pump_rate, gammas[i]));
    } catch (const UndefinedVoltageError&) {
    }
  });

  IVCurve curve;
  curve.pump_rate = pump_rate;
  for (auto& s : slots) {
    if (s) curve.points.push_back(std::move(*s));
  }
  if (curve.points.empty()) throw SweepError("iv_sweep: voltage undefined at every load");
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const OperatingPoint& a, const OperatingPoint& b) { return a.voltage < b.voltage; });
  auto dup = std::unique(curve.points.begin(), curve.points.end(),
                         [](const OperatingPoint& a, const OperatingPoint& b) { return a.voltage == b.voltage; });
  curve.points.erase(dup, curve.points.end());
  if (curve.points.size() < 2) throw SweepError("iv_sweep: fewer than two distinct voltages");
  return curve;
}

MaxPowerResult max_power_search(const LevelSystem& tmpl, double pump_rate, const MaxPowerOptions& opt) {
  if (opt.coarse_points < 3) throw DomainError("max_power_point: need at least 3 coarse points");
  require_valid(at_operating_point(tmpl, pump_rate, opt.gamma_min));

  MaxPowerResult result;
  const auto gammas = log_space(opt.gamma_min, opt.gamma_max, opt.coarse_points);
  std::vector<PowerSample> coarse(gammas.size());
  for (std::size_t i = 0; i < gammas.size(); ++i) coarse[i] = sample_power(tmpl, pump_rate, gammas[i]);
  result.evaluations = gammas.size();

  std::size_t best = 0;
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    if (coarse[i].power > coarse[best].power) best = i;
  }
  if (coarse[best].power == kUndefined) throw SweepError("max_power_point: voltage undefined at every load");

  int local_maxima = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const double v = coarse[i].power;
    if (v == kUndefined) continue;
    const bool left = i == 0 || v > coarse[i - 1].power;
    const bool right = i + 1 == coarse.size() || v >= coarse[i + 1].power;
    if (left && right) ++local_maxima;
  }

  result.coarse_max_power = coarse[best].power;
  result.coarse_gamma = gammas[best];

  double best_power = coarse[best].power;
  double best_voltage = coarse[best].voltage;
  double best_log_gamma = std::log(gammas[best]);

  auto evaluate = [&](double log_gamma) {
    const PowerSample s = sample_power(tmpl, pump_rate, std::exp(log_gamma));
    ++result.evaluations;
    if (s.power > best_power) {
      best_power = s.power;
      best_voltage = s.voltage;
      best_log_gamma = log_gamma;
    }
    return s.power;
  };

  double lo = std::log(gammas[best == 0 ? 0 : best - 1]);
  double hi = std::log(gammas[std::min(best + 1, gammas.size() - 1)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = evaluate(c);
  double fd = evaluate(d);
  while (hi - lo > opt.log_gamma_tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = evaluate(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = evaluate(d);
    }
  }

  const double gap = opt.band_gap_ev.value_or(pump_band_gap(tmpl));
  PumpSweepPoint& point = result.point;
  point.pump_rate = pump_rate;
  point.max_power = best_power;
  point.v_mpp = best_voltage;
  point.gamma_mpp = std::exp(best_log_gamma);
  point.multimodal = local_maxima > 1;
  point.efficiency = (pump_rate > 0.0 && gap > 0.0 && best_power >= 0.0)
                         ? efficiency(best_power, pump_rate, gap)
                         : std::numeric_limits<double>::quiet_NaN();
  return result;
}

PumpSweepPoint max_power_point(const LevelSystem& tmpl, double pump_rate, const MaxPowerOptions& options) {
  return max_power_search(tmpl, pump_rate, options).point;
}

PumpSweep pump_sweep(const LevelSystem& tmpl, double wp_min, double wp_max, std::size_t n_points, unsigned threads,
                     const MaxPowerOptions& options) {
  if (!(wp_min > 0.0) || !(wp_max > wp_min)) throw DomainError("pump_sweep: require 0 < wp_min < wp_max");
  if (tmpl.pumps.empty()) throw DomainError("pump_sweep: template has no pump");
  const auto rates = log_space(wp_min, wp_max, n_points);

  PumpSweep sweep;
  sweep.band_gap_ev = options.band_gap_ev.value_or(pump_band_gap(tmpl));
  sweep.points.resize(rates.size());
  parallel_for(rates.size(), threads,
               [&](std::size_t i) { sweep.points[i] = max_power_point(tmpl, rates[i], options); });
  return sweep;
}

}  // namespace qpv
