#include "qpv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpv/errors.hpp"

namespace qpv {
namespace {

constexpr double kResidualAcceptance = 1e-10;

PopulationState clamped(std::span<const double> x, std::size_t n, double time) {
  PopulationState out;
  out.time_s = time;
  out.populations.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.populations[i] = std::clamp(x[i], 0.0, 1.0);
  return out;
}

std::vector<double> padded_state(const PopulationState& state, std::size_t stride) {
  std::vector<double> x(stride, 0.0);
  std::copy(state.populations.begin(), state.populations.end(), x.begin());
  return x;
}

double residual_inf(const RateMatrix& m, std::span<const double> p) {
  double r = 0.0;
  const std::size_t n = m.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m(i, j) * p[j];
    r = std::max(r, std::abs(row));
  }
  return r;
}

void require_matching(const RateMatrix& m, const PopulationState& s) {
  if (s.populations.size() != m.dimension()) {
    throw DomainError("population vector has " + std::to_string(s.populations.size()) +
                      " entries, rate matrix has dimension " + std::to_string(m.dimension()));
  }
}

}  // namespace

PopulationState PopulationState::uniform(std::size_t n) {
  PopulationState s;
  s.populations.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  return s;
}

double PopulationState::sum() const { return std::accumulate(populations.begin(), populations.end(), 0.0); }

PopulationState integrate_rk4(const RateMatrix& matrix, const PopulationState& initial, double dt,
                              std::uint64_t steps, const TraceObserver& observer, std::uint64_t observe_every,
                              const kernels::KernelTable& kernels) {
  require_matching(matrix, initial);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate_rk4: dt must be > 0");
  const double max_diag = matrix.max_abs_diagonal();
  if (dt * max_diag > kRk4StabilityGuard) {
    const double suggested = kRk4SteadyStepFraction / max_diag;
    throw StepSizeError("integrate_rk4: dt * max|M_ii| = " + std::to_string(dt * max_diag) +
                            " exceeds the stability guard 0.1; use dt <= " + std::to_string(suggested),
                        suggested);
  }
  if (observe_every == 0) observe_every = 1;

  const std::size_t n = matrix.dimension();
  const std::size_t stride = matrix.stride();
  const double* m = matrix.padded_columns().data();
  std::vector<double> x = padded_state(initial, stride);
  std::vector<double> work(5 * stride, 0.0);

  if (observer) observer(clamped(x, n, initial.time_s));
  for (std::uint64_t step = 1; step <= steps; ++step) {
    kernels.rk4_step(m, n, stride, dt, x.data(), work.data());
    if (observer && step % observe_every == 0) {
      observer(clamped(x, n, initial.time_s + static_cast<double>(step) * dt));
    }
  }
  return clamped(x, n, initial.time_s + static_cast<double>(steps) * dt);
}

SteadyStateReport steady_state_direct(const RateMatrix& matrix) {
  const std::size_t n = matrix.dimension();
  if (n == 0) throw DomainError("steady_state_direct: empty rate matrix");

  // Grassmann-Taksar-Heyman state reduction. Works on off-diagonal rates only
  // and never subtracts, so populations many decades below the largest keep
  // full relative precision. q[i][j] is the rate i -> j.
  std::vector<double> q(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return q[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double rate = matrix(j, i);
      if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw ModelError("steady_state_direct: off-diagonal entry M[" + std::to_string(j) + "][" +
                         std::to_string(i) + "] = " + std::to_string(rate) +
                         " is not a valid rate; the matrix is not a generator");
      }
      at(i, j) = rate;
    }
  }

  for (std::size_t k = n - 1; k >= 1; --k) {
    double out = 0.0;
    for (std::size_t j = 0; j < k; ++j) out += at(k, j);
    if (!(out > 0.0)) {
      throw DegeneracyError("steady_state_direct: level " + std::to_string(k) +
                            " has no path to the remaining levels; the rate matrix has a degenerate null space");
    }
    for (std::size_t i = 0; i < k; ++i) at(i, k) /= out;
    for (std::size_t i = 0; i < k; ++i) {
      const double via = at(i, k);
      if (via == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) at(i, j) += via * at(k, j);
      }
    }
  }

  std::vector<double> raw(n, 0.0);
  raw[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) v += raw[i] * at(i, k);
    raw[k] = v;
    total += v;
  }
  for (double& v : raw) {
    v /= total;
    if (!std::isfinite(v)) throw DegeneracyError("steady_state_direct: non-finite solution");
  }

  const double scale = matrix.max_abs_entry();
  SteadyStateReport report;
  report.method = SteadyStateMethod::Direct;
  report.state = clamped(raw, n, 0.0);
  report.residual = residual_inf(matrix, report.state.populations);
  report.iterations_or_steps = 1;
  if (report.residual > kResidualAcceptance * scale) {
    throw DegeneracyError("steady_state_direct: residual " + std::to_string(report.residual) +
                          " exceeds acceptance " + std::to_string(kResidualAcceptance * scale) +
                          "; columns of the rate matrix do not sum to zero");
  }
  return report;
}

SteadyStateReport steady_state_integrated(const RateMatrix& matrix, double tol, const IntegratedOptions& options) {
  if (!(tol > 0.0 && tol <= 1e-4)) {
    throw DomainError("steady_state_integrated: tol must lie in (0, 1e-4] (got " + std::to_string(tol) + ")");
  }
  const std::size_t n = matrix.dimension();
  if (n == 0) throw DomainError("steady_state_integrated: empty rate matrix");
  const kernels::KernelTable& k = options.kernels ? *options.kernels : kernels::active();

  PopulationState start = options.initial.value_or(PopulationState::uniform(n));
  require_matching(matrix, start);

  const std::size_t stride = matrix.stride();
  const double* m = matrix.padded_columns().data();
  std::vector<double> x = padded_state(start, stride);

  SteadyStateReport report;
  report.method = SteadyStateMethod::Integrated;

  const double max_diag = matrix.max_abs_diagonal();
  if (max_diag == 0.0) {
    report.state = clamped(x, n, 0.0);
    return report;
  }

  const double dt = kRk4SteadyStepFraction / max_diag;
  const double threshold = tol * matrix.max_abs_entry();
  const std::uint64_t interval = std::max<std::uint64_t>(options.check_interval, 1);
  std::vector<double> work(5 * stride, 0.0);

  int consecutive = 0;
  std::uint64_t step = 0;
  for (; step < options.max_steps; ++step) {
    const double rate = k.rk4_step(m, n, stride, dt, x.data(), work.data());
    if (step % interval != 0) continue;
    consecutive = rate < threshold ? consecutive + 1 : 0;
    if (consecutive >= options.required_consecutive) {
      ++step;
      break;
    }
  }

  const double final_residual = residual_inf(matrix, x);
  if (consecutive < options.required_consecutive) {
    throw ConvergenceError("steady_state_integrated: no convergence within " + std::to_string(options.max_steps) +
                               " steps (final residual " + std::to_string(final_residual) + " 1/s)",
                           final_residual);
  }
  report.state = clamped(x, n, static_cast<double>(step) * dt);
  report.residual = final_residual;
  report.iterations_or_steps = step;
  return report;
}

}  // namespace qpv
