#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qpv/kernels.hpp"
#include "qpv/rate_network.hpp"

namespace qpv {

struct PopulationState {
  std::vector<double> populations;
  double time_s = 0.0;

  static PopulationState uniform(std::size_t n);
  double sum() const;
};

enum class SteadyStateMethod { Direct, Integrated };

struct SteadyStateReport {
  PopulationState state;
  SteadyStateMethod method = SteadyStateMethod::Direct;
  double residual = 0.0;  ///< ||M P||_inf in 1/s
  std::uint64_t iterations_or_steps = 0;
};

/// Largest dt * max|M_ii| accepted by integrate_rk4.
inline constexpr double kRk4StabilityGuard = 0.1;
/// Step used by steady_state_integrated, as a fraction of 1/max|M_ii|.
inline constexpr double kRk4SteadyStepFraction = 0.05;

using TraceObserver = std::function<void(const PopulationState&)>;

/// Fixed-step classical RK4 for dP/dt = M P. The observer, if given, sees the
/// initial state and then every `observe_every`-th state.
PopulationState integrate_rk4(const RateMatrix& matrix, const PopulationState& initial, double dt,
                              std::uint64_t steps, const TraceObserver& observer = {},
                              std::uint64_t observe_every = 1,
                              const kernels::KernelTable& kernels = kernels::active());

/// Solves M P = 0 with sum(P) = 1 by state reduction (GTH), which keeps full
/// relative precision in every population. Throws DegeneracyError when the
/// null space is not one-dimensional.
SteadyStateReport steady_state_direct(const RateMatrix& matrix);

struct IntegratedOptions {
  std::uint64_t max_steps = 1'000'000'000;
  std::uint64_t check_interval = 16;
  int required_consecutive = 10;
  std::optional<PopulationState> initial;  ///< default: uniform
  const kernels::KernelTable* kernels = nullptr;  ///< default: kernels::active()
};

/// Integrates from the uniform state with dt = 0.05 / max|M_ii| until
/// ||dP/dt||_inf < tol * max|M| on 10 consecutive checks.
SteadyStateReport steady_state_integrated(const RateMatrix& matrix, double tol,
                                          const IntegratedOptions& options = {});

}  // namespace qpv
