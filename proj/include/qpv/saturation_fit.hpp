#pragma once

#include <span>

#include "qpv/sweeps.hpp"

namespace qpv {

/// P(W) = a * W / (W + b), in the units of the data it was fitted to.
struct SaturationFit {
  double a = 0.0;
  double b = 0.0;
  double rms_residual = 0.0;  ///< sqrt(mean((model/data - 1)^2))
  int iterations = 0;
  bool converged = false;
};

double saturation_model(double a, double b, double w);

/// Relative RMS misfit of (a, b) against the data.
double saturation_rms(double a, double b, std::span<const double> w, std::span<const double> p);

/// Levenberg-Marquardt on (ln a, ln b) minimising relative residuals
/// model_i / p_i - 1. Starts from a = max(p), b = median(w); stops when the
/// relative parameter step drops below 1e-10 or after 200 iterations.
SaturationFit fit_saturation(std::span<const double> w, std::span<const double> p);

SaturationFit fit_saturation(const PumpSweep& sweep);

}  // namespace qpv
