// Acceptance suite: one PASS/FAIL line per primary criterion. Also leaves the
// CSVs consumed by the figure scripts in the output directory
// (default ./acceptance_out, override with the first argument).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "qpv/constants.hpp"
#include "qpv/dynamics.hpp"
#include "qpv/errors.hpp"
#include "qpv/manifest.hpp"
#include "qpv/presets.hpp"
#include "qpv/radiometry.hpp"
#include "qpv/saturation_fit.hpp"
#include "qpv/sweeps.hpp"
#include "random_systems.hpp"

namespace fs = std::filesystem;
using namespace qpv;

namespace {

// Pinned tolerances.
constexpr double kBoseHot = 0.0317, kBoseHotTol = 1e-4;
constexpr double kBoseCold = 4.368e-4, kBoseColdTol = 1e-7;
constexpr double kFlux = 9.0e25, kFluxRelTol = 0.02;
constexpr double kRadiometrySeconds = 1.0;

constexpr int kCrossSystems = 100;
constexpr double kCrossTol = 1e-7;
constexpr double kCrossIntegratedTol = 1e-13;
constexpr double kNormTol = 1e-10;
constexpr double kCrossSeconds = 60.0;

constexpr double kBoltzmannRelTol = 1e-8;
constexpr double kScalingTol = 1e-10;

constexpr double kCurrentReference = 0.16e-6, kCurrentFactor = 2.0;

constexpr double kSlopeSlack = 1e-9;
constexpr double kFitRmsMax = 0.05;

constexpr double kFitA = 1.37, kFitB = 6.5;
constexpr double kFitNoiselessTol = 1e-6;
constexpr double kFitNoisyTol = 0.05;
constexpr double kFitOracleTol = 1e-4;
constexpr double kFitNoise = 0.01;

constexpr double kLowRatioMin = 0.8, kLowRatioMax = 1.25;
constexpr double kHighRatioMin = 1.1;
constexpr double kEfficiencyShare = 0.1;  // |eta_c - eta_u| < share * (ratio - 1)

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-26s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool run_qpv(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::fprintf(stderr, "qpv %s failed: %s", args.front().c_str(), err.str().c_str());
  return code == 0;
}

LevelSystem without_drive(LevelSystem s) {
  for (auto& p : s.pumps) p.rate_per_s = 0.0;
  s.extraction.gamma_load_per_s = 0.0;
  return s;
}

Outcome radiometry() {
  const auto t0 = std::chrono::steady_clock::now();
  const double hot = bose_occupation(1.8, 6000.0);
  const double cold = bose_occupation(0.2, 300.0);
  const double flux = planck_photon_flux(1.8, 6000.0).flux;
  const double secs = elapsed_since(t0);
  const bool ok = std::abs(hot - kBoseHot) < kBoseHotTol && std::abs(cold - kBoseCold) < kBoseColdTol &&
                  std::abs(flux / kFlux - 1.0) < kFluxRelTol && secs < kRadiometrySeconds;
  return {ok, "n_hot=" + num(hot) + " n_cold=" + num(cold) + " flux=" + num(flux) + " m^-2 s^-1"};
}

Outcome cross_validation() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  double worst_norm = 0.0;
  bool nonnegative = true;
  for (int k = 0; k < kCrossSystems; ++k) {
    const RateMatrix m = build_rate_matrix(testing::random_system(rng));
    const auto direct = steady_state_direct(m).state;
    const auto integrated = steady_state_integrated(m, kCrossIntegratedTol).state;
    for (std::size_t i = 0; i < m.dimension(); ++i) {
      worst = std::max(worst, std::abs(direct.populations[i] - integrated.populations[i]));
      nonnegative = nonnegative && direct.populations[i] >= 0.0 && integrated.populations[i] >= 0.0;
    }
    worst_norm = std::max({worst_norm, std::abs(direct.sum() - 1.0), std::abs(integrated.sum() - 1.0)});
  }
  const double secs = elapsed_since(t0);
  return {worst < kCrossTol && worst_norm < kNormTol && nonnegative && secs < kCrossSeconds,
          std::to_string(kCrossSystems) + " systems, max |dP|=" + num(worst) + ", max |sum-1|=" + num(worst_norm)};
}

Outcome detailed_balance() {
  double worst = 0.0;
  int systems = 0;
  for (const auto& name : {"model-b", "model-c-coupled", "model-c-uncoupled"}) {
    const LevelSystem s = without_drive(make_preset(name, 0.0, 0.0));
    const auto p = steady_state_direct(build_rate_matrix(s)).state.populations;
    const double kt = thermal_energy(s.baths.at(0).temperature_k);
    for (std::size_t i = 1; i < p.size(); ++i) {
      const double expect = std::exp(-(s.levels[i].energy_ev - s.levels[0].energy_ev) / kt);
      worst = std::max(worst, std::abs(p[i] / p[0] / expect - 1.0));
    }
    ++systems;
  }
  return {worst < kBoltzmannRelTol, std::to_string(systems) + " presets, max rel ratio error=" + num(worst)};
}

Outcome rate_scaling() {
  std::vector<LevelSystem> systems;
  for (const auto& info : preset_catalog()) systems.push_back(make_preset(info.name, 1e13, 1e12));
  std::mt19937_64 rng(99);
  for (int k = 0; k < 20; ++k) systems.push_back(testing::random_system(rng));
  double worst = 0.0;
  for (const auto& s : systems) {
    const RateMatrix m = build_rate_matrix(s);
    const auto base = steady_state_direct(m).state.populations;
    for (double c : {1e-3, 1e3}) {
      LevelSystem t = s;
      for (auto& tr : t.transitions) tr.gamma_per_s *= c;
      for (auto& p : t.pumps) p.rate_per_s *= c;
      t.extraction.gamma_load_per_s *= c;
      const auto scaled = steady_state_direct(build_rate_matrix(t)).state.populations;
      for (std::size_t i = 0; i < base.size(); ++i) worst = std::max(worst, std::abs(scaled[i] - base[i]));
    }
  }
  return {worst < kScalingTol, std::to_string(systems.size()) + " systems, c in {1e-3, 1e3}, max |dP|=" + num(worst)};
}

Outcome current_magnitude() {
  const IVCurve curve = iv_sweep(preset_model_b(1.0), 1e12, 1e6, 1e16, 200, default_thread_count());
  const double isc = curve.points.front().current;
  const bool ok = isc > kCurrentReference / kCurrentFactor && isc < kCurrentReference * kCurrentFactor;
  return {ok, "I_sc=" + num(isc * 1e6) + " uA at V=" + num(curve.points.front().voltage) + " V"};
}

Outcome saturation_shape(const PumpSweep& sweep) {
  const auto& pts = sweep.points;
  bool power_up = true;
  bool slope_down = true;
  bool eta_down = true;
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    power_up = power_up && pts[i].max_power >= pts[i - 1].max_power;
    eta_down = eta_down && pts[i].efficiency <= pts[i - 1].efficiency;
    const double slope = std::log(pts[i].max_power / pts[i - 1].max_power) /
                         std::log(pts[i].pump_rate / pts[i - 1].pump_rate);
    slope_down = slope_down && slope <= prev_slope + kSlopeSlack;
    prev_slope = slope;
  }
  const SaturationFit fit = fit_saturation(sweep);
  return {power_up && slope_down && eta_down && fit.rms_residual < kFitRmsMax,
          "P_max " + num(pts.front().max_power) + " -> " + num(pts.back().max_power) + " W, eta " +
              num(pts.front().efficiency) + " -> " + num(pts.back().efficiency) + ", fit a=" + num(fit.a) +
              " W b=" + num(fit.b) + " 1/s rms=" + num(fit.rms_residual)};
}

Outcome fit_oracle() {
  std::vector<double> w;
  for (double x = 0.1; x <= 1000.0 * 1.0001; x *= std::pow(10.0, 0.2)) w.push_back(x);
  std::vector<double> clean;
  for (double x : w) clean.push_back(saturation_model(kFitA, kFitB, x));
  const SaturationFit exact = fit_saturation(w, clean);
  const double exact_err = std::max(std::abs(exact.a / kFitA - 1.0), std::abs(exact.b / kFitB - 1.0));

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noisy;
  for (double p : clean) noisy.push_back(p * (1.0 + kFitNoise * gauss(rng)));
  const SaturationFit fit = fit_saturation(w, noisy);
  const double noisy_err = std::max(std::abs(fit.a / kFitA - 1.0), std::abs(fit.b / kFitB - 1.0));

  // Shrinking grid search on (ln a, ln b).
  double la = 0.0, lb = 0.0, half = 8.0;
  for (int round = 0; round < 30; ++round, half *= 0.3) {
    double best = std::numeric_limits<double>::infinity(), ba = la, bb = lb;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double ta = la + half * i / 20.0, tb = lb + half * j / 20.0;
        const double r = saturation_rms(std::exp(ta), std::exp(tb), w, noisy);
        if (r < best) best = r, ba = ta, bb = tb;
      }
    }
    la = ba;
    lb = bb;
  }
  const double oracle_err = std::max(std::abs(fit.a / std::exp(la) - 1.0), std::abs(fit.b / std::exp(lb) - 1.0));
  return {exact_err < kFitNoiselessTol && noisy_err < kFitNoisyTol && oracle_err < kFitOracleTol,
          "noiseless err=" + num(exact_err) + ", 1% noise err=" + num(noisy_err) + ", vs grid oracle " +
              num(oracle_err)};
}

Outcome coherence(const PumpSweep& coupled, const PumpSweep& uncoupled) {
  auto at = [](const PumpSweep& s, double w) {
    for (const auto& p : s.points) {
      if (std::abs(p.pump_rate / w - 1.0) < 1e-9) return p;
    }
    throw SweepError("pump rate " + num(w) + " not on the sweep grid");
  };
  const auto c12 = at(coupled, 1e12), u12 = at(uncoupled, 1e12);
  const auto c15 = at(coupled, 1e15), u15 = at(uncoupled, 1e15);
  const double low = c12.max_power / u12.max_power;
  const double high = c15.max_power / u15.max_power;
  const double deta = std::abs(c15.efficiency - u15.efficiency);
  const bool ok = low >= kLowRatioMin && low <= kLowRatioMax && high > kHighRatioMin &&
                  deta < kEfficiencyShare * (high - 1.0);
  return {ok, "ratio@1e12=" + num(low) + " ratio@1e15=" + num(high) + " |d eta|@1e15=" + num(deta)};
}

Outcome determinism(const fs::path& dir) {
  const fs::path a = dir / "determinism_a.csv";
  const fs::path b = dir / "determinism_b.csv";
  const fs::path iv = dir / "determinism_iv.csv";
  bool ok = true;

  ::setenv("QPV_THREADS", "1", 1);
  ok = ok && run_qpv({"pump-sweep", "--model", "model-c-coupled", "--points", "16", "--out", a.string()});
  ok = ok && run_qpv({"iv", "--model", "model-b", "--wp", "1e13", "--out", iv.string()});
  const std::string first = slurp(a);
  const std::string first_iv = slurp(iv);

  ::setenv("QPV_THREADS", "8", 1);
  ok = ok && run_qpv({"pump-sweep", "--model", "model-c-coupled", "--points", "16", "--out", b.string()});
  const bool threads_equal = ok && slurp(b) == first;

  fs::remove(a);
  fs::remove(iv);
  ok = ok && run_qpv({"replay", "--manifest", manifest_path_for(a).string()});
  ok = ok && run_qpv({"replay", "--manifest", manifest_path_for(iv).string()});
  const bool replay_equal = ok && slurp(a) == first && slurp(iv) == first_iv;
  ::unsetenv("QPV_THREADS");

  return {ok && threads_equal && replay_equal,
          std::string("threads 1 vs 8 ") + (threads_equal ? "identical" : "DIFFER") + ", manifest replay " +
              (replay_equal ? "identical" : "DIFFERS") + " (" + std::to_string(first.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(out_dir);
  std::printf("qpv %s acceptance, SIMD backend %s, %u worker thread(s), output in %s\n", kVersion,
              kernels::active().name, default_thread_count(), out_dir.string().c_str());

  // Curves for the figure scripts.
  bool csv_ok = true;
  for (const char* wp : {"1e12", "1e13", "1e15"}) {
    csv_ok = csv_ok && run_qpv({"iv", "--model", "model-b", "--wp", wp, "--gamma-min", "1e6", "--gamma-max", "1e16",
                            "--points", "200", "--out", (out_dir / ("iv_model_b_wp" + std::string(wp) + ".csv")).string()});
  }
  for (const char* model : {"model-b", "model-c-coupled", "model-c-uncoupled"}) {
    csv_ok = csv_ok && run_qpv({"pump-sweep", "--model", model, "--wp-min", "1e11", "--wp-max", "1e16", "--points",
                            "26", "--out", (out_dir / ("pump_sweep_" + std::string(model) + ".csv")).string()});
  }
  if (!csv_ok) std::printf("warning: some figure CSVs were not written\n");

  const unsigned threads = default_thread_count();
  const PumpSweep model_b = pump_sweep(preset_model_b(1.0), 1e11, 1e16, 26, threads);
  const PumpSweep coupled = pump_sweep(preset_model_c(1.0, true), 1e11, 1e16, 26, threads);
  const PumpSweep uncoupled = pump_sweep(preset_model_c(1.0, false), 1e11, 1e16, 26, threads);

  report("radiometry", radiometry);
  report("solver-cross-validation", cross_validation);
  report("detailed-balance", detailed_balance);
  report("rate-scaling", rate_scaling);
  report("current-magnitude", current_magnitude);
  report("saturation-shape", [&] { return saturation_shape(model_b); });
  report("fit-oracle", fit_oracle);
  report("coherence-enhancement", [&] { return coherence(coupled, uncoupled); });
  report("determinism", [&] { return determinism(out_dir); });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
