#include "qpv/saturation_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpv/errors.hpp"

namespace qpv {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kStepTol = 1e-10;

struct Evaluation {
  double cost = 0.0;
  // J^T J and J^T r for the 2-parameter problem.
  double jtj[2][2] = {{0, 0}, {0, 0}};
  double jtr[2] = {0, 0};
};

Evaluation evaluate(double log_a, double log_b, std::span<const double> w, std::span<const double> p) {
  Evaluation e;
  const double a = std::exp(log_a);
  const double b = std::exp(log_b);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double ratio = a * w[i] / (w[i] + b) / p[i];
    const double r = ratio - 1.0;
    const double j0 = ratio;                    // d r / d ln a
    const double j1 = -ratio * b / (w[i] + b);  // d r / d ln b
    e.cost += r * r;
    e.jtj[0][0] += j0 * j0;
    e.jtj[0][1] += j0 * j1;
    e.jtj[1][1] += j1 * j1;
    e.jtr[0] += j0 * r;
    e.jtr[1] += j1 * r;
  }
  e.jtj[1][0] = e.jtj[0][1];
  return e;
}

}  // namespace

double saturation_model(double a, double b, double w) { return a * w / (w + b); }

double saturation_rms(double a, double b, std::span<const double> w, std::span<const double> p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = saturation_model(a, b, w[i]) / p[i] - 1.0;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(w.size()));
}

SaturationFit fit_saturation(std::span<const double> w, std::span<const double> p) {
  if (w.size() != p.size()) throw FitError("fit_saturation: W and P have different lengths");
  if (w.size() < 3) throw FitError("fit_saturation: need at least 3 points");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw FitError("fit_saturation: pump rates must be positive");
    if (!(p[i] > 0.0) || !std::isfinite(p[i])) throw FitError("fit_saturation: powers must be positive");
  }
  const auto [pmin, pmax] = std::minmax_element(p.begin(), p.end());
  if (*pmax - *pmin <= 1e-12 * *pmax) throw FitError("fit_saturation: data are constant, saturation is undetermined");

  std::vector<double> sorted_w(w.begin(), w.end());
  std::nth_element(sorted_w.begin(), sorted_w.begin() + static_cast<long>(sorted_w.size() / 2), sorted_w.end());
  double theta[2] = {std::log(*pmax), std::log(sorted_w[sorted_w.size() / 2])};

  SaturationFit fit;
  double lambda = 1e-3;
  Evaluation current = evaluate(theta[0], theta[1], w, p);
  for (fit.iterations = 1; fit.iterations <= kMaxIterations; ++fit.iterations) {
    bool accepted = false;
    double step[2] = {0, 0};
    while (lambda < 1e16) {
      const double a00 = current.jtj[0][0] * (1.0 + lambda);
      const double a11 = current.jtj[1][1] * (1.0 + lambda);
      const double a01 = current.jtj[0][1];
      const double det = a00 * a11 - a01 * a01;
      if (det > 0.0 && std::isfinite(det)) {
        step[0] = -(a11 * current.jtr[0] - a01 * current.jtr[1]) / det;
        step[1] = -(a00 * current.jtr[1] - a01 * current.jtr[0]) / det;
        const Evaluation trial = evaluate(theta[0] + step[0], theta[1] + step[1], w, p);
        if (std::isfinite(trial.cost) && trial.cost <= current.cost) {
          theta[0] += step[0];
          theta[1] += step[1];
          current = trial;
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    const double step_norm = std::hypot(step[0], step[1]);
    const double theta_norm = std::hypot(theta[0], theta[1]);
    if (!accepted || step_norm < kStepTol * std::max(theta_norm, 1.0)) {
      fit.converged = true;
      break;
    }
  }
  fit.iterations = std::min(fit.iterations, kMaxIterations);

  fit.a = std::exp(theta[0]);
  fit.b = std::exp(theta[1]);
  fit.rms_residual = saturation_rms(fit.a, fit.b, w, p);
  return fit;
}

SaturationFit fit_saturation(const PumpSweep& sweep) {
  std::vector<double> w;
  std::vector<double> p;
  for (const auto& pt : sweep.points) {
    w.push_back(pt.pump_rate);
    p.push_back(pt.max_power);
  }
  return fit_saturation(w, p);
}

}  // namespace qpv
