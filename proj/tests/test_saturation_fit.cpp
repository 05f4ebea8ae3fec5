#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qpv/errors.hpp"
#include "qpv/saturation_fit.hpp"

using namespace qpv;

namespace {

struct Data {
  std::vector<double> w;
  std::vector<double> p;
};

Data synthetic(double a, double b, double noise, std::uint64_t seed) {
  Data d;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double w = 0.1; w <= 1000.0 * 1.0001; w *= std::pow(10.0, 0.2)) {
    d.w.push_back(w);
    d.p.push_back(a * w / (w + b) * (1.0 + noise * gauss(rng)));
  }
  return d;
}

// Exhaustive search on a shrinking (ln a, ln b) grid for the least relative
// sum of squares.
std::pair<double, double> grid_search(const Data& d) {
  double la = 0.0;
  double lb = 0.0;
  double half = 8.0;
  for (int round = 0; round < 30; ++round) {
    double best = std::numeric_limits<double>::infinity();
    double ba = la;
    double bb = lb;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double ta = la + half * i / 20.0;
        const double tb = lb + half * j / 20.0;
        const double r = saturation_rms(std::exp(ta), std::exp(tb), d.w, d.p);
        if (r < best) {
          best = r;
          ba = ta;
          bb = tb;
        }
      }
    }
    la = ba;
    lb = bb;
    half *= 0.3;
  }
  return {std::exp(la), std::exp(lb)};
}

}  // namespace

TEST_CASE("model function") {
  CHECK(saturation_model(2.0, 3.0, 3.0) == 1.0);
  CHECK(saturation_model(2.0, 3.0, 0.0) == 0.0);
  const std::vector<double> w = {1.0, 2.0};
  const std::vector<double> p = {1.0, 4.0 / 3.0};
  CHECK(saturation_rms(2.0, 1.0, w, p) == doctest::Approx(0.0));
}

TEST_CASE("noiseless data is recovered") {
  const Data d = synthetic(1.37, 6.5, 0.0, 1);
  const SaturationFit fit = fit_saturation(d.w, d.p);
  CHECK(fit.converged);
  CHECK(std::abs(fit.a / 1.37 - 1.0) < 1e-6);
  CHECK(std::abs(fit.b / 6.5 - 1.0) < 1e-6);
  CHECK(fit.rms_residual < 1e-9);
}

TEST_CASE("noisy data agrees with the grid-search oracle") {
  for (std::uint64_t seed : {2u, 3u, 4u, 5u, 6u}) {
    INFO("seed " << seed);
    const Data d = synthetic(1.37, 6.5, 0.01, seed);
    const SaturationFit fit = fit_saturation(d.w, d.p);
    const auto [oa, ob] = grid_search(d);
    CHECK(fit.converged);
    CHECK(std::abs(fit.a / 1.37 - 1.0) < 0.05);
    CHECK(std::abs(fit.b / 6.5 - 1.0) < 0.05);
    CHECK(std::abs(fit.a / oa - 1.0) < 1e-4);
    CHECK(std::abs(fit.b / ob - 1.0) < 1e-4);
    CHECK(fit.rms_residual <= saturation_rms(oa, ob, d.w, d.p) * (1.0 + 1e-9));
  }
}

TEST_CASE("fit works in the data's own units") {
  Data d = synthetic(1.37, 6.5, 0.0, 1);
  for (double& w : d.w) w *= 1e12;
  for (double& p : d.p) p *= 1e-6;
  const SaturationFit fit = fit_saturation(d.w, d.p);
  CHECK(fit.a == doctest::Approx(1.37e-6).epsilon(1e-6));
  CHECK(fit.b == doctest::Approx(6.5e12).epsilon(1e-6));
}

TEST_CASE("fit preconditions") {
  const std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS(fit_saturation(two, two), FitError);
  const std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> flat = {5.0, 5.0, 5.0, 5.0};
  CHECK_THROWS_AS(fit_saturation(w, flat), FitError);
  const std::vector<double> negative = {1.0, -2.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_saturation(w, negative), FitError);
  const std::vector<double> short_p = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_saturation(w, short_p), FitError);
}

TEST_CASE("fit from a pump sweep") {
  PumpSweep sweep;
  for (double w : {1e11, 1e12, 1e13, 1e14, 1e15}) {
    PumpSweepPoint pt;
    pt.pump_rate = w;
    pt.max_power = saturation_model(2e-6, 5e12, w);
    sweep.points.push_back(pt);
  }
  const SaturationFit fit = fit_saturation(sweep);
  CHECK(fit.a == doctest::Approx(2e-6).epsilon(1e-6));
  CHECK(fit.b == doctest::Approx(5e12).epsilon(1e-6));
}
