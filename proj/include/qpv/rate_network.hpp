#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpv/radiometry.hpp"

namespace qpv {

struct EnergyLevel {
  std::string name;
  double energy_ev = 0.0;
};

/// Bath-assisted transition between two levels. Downward rate gamma*(n+1),
/// upward rate gamma*n, with n the bath occupation at the level spacing.
struct ThermalTransition {
  std::string lower;
  std::string upper;
  double gamma_per_s = 0.0;
  std::string bath;
};

/// Symmetric optical drive: lower->upper and upper->lower both at `rate_per_s`.
struct Pump {
  std::string lower;
  std::string upper;
  double rate_per_s = 0.0;
};

/// Load channel: source->sink at Gamma, plus source->recomb_target at chi*Gamma.
struct Extraction {
  std::string source;
  std::string sink;
  double gamma_load_per_s = 0.0;
  double chi = 0.0;
  std::string recomb_target;
};

struct LevelSystem {
  std::vector<EnergyLevel> levels;
  std::vector<Bath> baths;
  std::vector<ThermalTransition> transitions;
  std::vector<Pump> pumps;
  Extraction extraction;
  double voltage_temperature_k = 300.0;

  /// Human-readable modelling assumptions carried into run manifests.
  std::vector<std::string> assumptions;

  std::optional<std::size_t> find_level(std::string_view name) const;
  std::optional<std::size_t> find_bath(std::string_view name) const;

  /// Index of a level known to exist. Throws ModelError otherwise.
  std::size_t level_index(std::string_view name) const;
  double energy(std::string_view name) const { return levels[level_index(name)].energy_ev; }
  double bath_temperature(std::string_view name) const;
};

/// Every invariant violation in `system`, empty when valid.
std::vector<std::string> validate(const LevelSystem& system);

/// Throws ModelError listing all violations.
void require_valid(const LevelSystem& system);

/// Dense generator of dP/dt = M P. Stored column-major with each column
/// padded to a multiple of four doubles (zero-filled) so the SIMD kernels can
/// stream whole registers. Immutable once built.
class RateMatrix {
 public:
  static constexpr std::size_t kLaneWidth = 4;

  RateMatrix() = default;

  /// `row_major` holds n*n entries, M[i][j] at i*n + j.
  RateMatrix(std::size_t n, std::span<const double> row_major);

  std::size_t dimension() const noexcept { return n_; }
  std::size_t stride() const noexcept { return stride_; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return data_[col * stride_ + row]; }

  /// Padded column-major storage, stride() * dimension() doubles.
  std::span<const double> padded_columns() const noexcept { return data_; }

  double column_sum(std::size_t col) const;
  double max_abs_entry() const;
  double max_abs_diagonal() const;

  RateMatrix scaled(double factor) const;

  /// Bitwise equality of every entry.
  friend bool operator==(const RateMatrix& a, const RateMatrix& b);

  static std::size_t padded(std::size_t n) { return (n + kLaneWidth - 1) / kLaneWidth * kLaneWidth; }

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> data_;
};

/// Compile a validated LevelSystem to its rate matrix. Contributions are
/// accumulated in a fixed order (transitions, pumps, extraction) and each
/// diagonal entry is the negated sum of its column's off-diagonals.
RateMatrix build_rate_matrix(const LevelSystem& system);

/// Copy of `template_system` driven at total pump rate `pump_rate` with load
/// `gamma_load`. The total is split across pumps in proportion to their
/// template rates (equal shares if every template rate is zero).
LevelSystem at_operating_point(const LevelSystem& template_system, double pump_rate, double gamma_load);

/// Largest lower->upper energy gap over all pumps; 0 when unpumped.
double pump_band_gap(const LevelSystem& system);

}  // namespace qpv
