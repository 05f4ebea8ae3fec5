#include "qpv/rate_network.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "qpv/errors.hpp"

namespace qpv {
namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string fmt_double(double v) { return std::to_string(v); }

}  // namespace

ModelError::ModelError(std::vector<std::string> issues)
    : Error("invalid model: " + join(issues, "; ")), issues_(std::move(issues)) {}

std::optional<std::size_t> LevelSystem::find_level(std::string_view name) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> LevelSystem::find_bath(std::string_view name) const {
  for (std::size_t i = 0; i < baths.size(); ++i) {
    if (baths[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t LevelSystem::level_index(std::string_view name) const {
  if (auto idx = find_level(name)) return *idx;
  throw ModelError("unknown level '" + std::string(name) + "'");
}

double LevelSystem::bath_temperature(std::string_view name) const {
  if (auto idx = find_bath(name)) return baths[*idx].temperature_k;
  throw ModelError("unknown bath '" + std::string(name) + "'");
}

std::vector<std::string> validate(const LevelSystem& s) {
  std::vector<std::string> issues;

  if (s.levels.empty()) issues.emplace_back("system has no levels");

  std::set<std::string> seen;
  for (const auto& level : s.levels) {
    if (!seen.insert(level.name).second) issues.push_back("duplicate level name '" + level.name + "'");
    if (!std::isfinite(level.energy_ev)) issues.push_back("level '" + level.name + "' has non-finite energy");
  }
  std::set<std::string> bath_names;
  for (const auto& bath : s.baths) {
    if (!bath_names.insert(bath.name).second) issues.push_back("duplicate bath name '" + bath.name + "'");
    if (!(bath.temperature_k > 0.0) || !std::isfinite(bath.temperature_k)) {
      issues.push_back("bath '" + bath.name + "' temperature must be > 0");
    }
  }
  if (!(s.voltage_temperature_k > 0.0) || !std::isfinite(s.voltage_temperature_k)) {
    issues.emplace_back("voltage_temperature_k must be > 0");
  }

  auto has_level = [&](const std::string& n) { return s.find_level(n).has_value(); };

  for (std::size_t k = 0; k < s.transitions.size(); ++k) {
    const auto& t = s.transitions[k];
    const std::string tag = "transition #" + std::to_string(k) + " (" + t.lower + "->" + t.upper + ")";
    bool endpoints_ok = true;
    if (!has_level(t.lower)) {
      issues.push_back(tag + ": unknown level '" + t.lower + "'");
      endpoints_ok = false;
    }
    if (!has_level(t.upper)) {
      issues.push_back(tag + ": unknown level '" + t.upper + "'");
      endpoints_ok = false;
    }
    if (!s.find_bath(t.bath)) issues.push_back(tag + ": unknown bath '" + t.bath + "'");
    if (!(t.gamma_per_s > 0.0) || !std::isfinite(t.gamma_per_s)) {
      issues.push_back(tag + ": gamma must be > 0 (got " + fmt_double(t.gamma_per_s) + ")");
    }
    if (endpoints_ok && !(s.energy(t.upper) > s.energy(t.lower))) {
      issues.push_back(tag + ": upper level must lie above lower level");
    }
  }

  for (std::size_t k = 0; k < s.pumps.size(); ++k) {
    const auto& p = s.pumps[k];
    const std::string tag = "pump #" + std::to_string(k) + " (" + p.lower + "->" + p.upper + ")";
    if (!has_level(p.lower)) issues.push_back(tag + ": unknown level '" + p.lower + "'");
    if (!has_level(p.upper)) issues.push_back(tag + ": unknown level '" + p.upper + "'");
    if (p.lower == p.upper) issues.push_back(tag + ": pump must connect two distinct levels");
    if (!(p.rate_per_s >= 0.0) || !std::isfinite(p.rate_per_s)) {
      issues.push_back(tag + ": rate must be >= 0");
    }
  }

  const auto& x = s.extraction;
  for (const auto* name : {&x.source, &x.sink, &x.recomb_target}) {
    if (!has_level(*name)) issues.push_back("extraction: unknown level '" + *name + "'");
  }
  if (x.source == x.sink) issues.emplace_back("extraction: source and sink must differ");
  if (x.source == x.recomb_target) issues.emplace_back("extraction: recomb_target must differ from source");
  if (!(x.gamma_load_per_s >= 0.0) || !std::isfinite(x.gamma_load_per_s)) {
    issues.emplace_back("extraction: gamma_load must be >= 0");
  }
  if (!(x.chi >= 0.0) || !std::isfinite(x.chi)) issues.emplace_back("extraction: chi must be >= 0");

  if (!issues.empty()) return issues;

  // Connectivity over channels with a positive rate.
  const std::size_t n = s.levels.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  for (const auto& t : s.transitions) {
    if (t.gamma_per_s > 0.0) unite(s.level_index(t.lower), s.level_index(t.upper));
  }
  for (const auto& p : s.pumps) {
    if (p.rate_per_s > 0.0) unite(s.level_index(p.lower), s.level_index(p.upper));
  }
  if (x.gamma_load_per_s > 0.0) {
    unite(s.level_index(x.source), s.level_index(x.sink));
    if (x.chi > 0.0) unite(s.level_index(x.source), s.level_index(x.recomb_target));
  }
  const std::size_t root = find(0);
  std::vector<std::string> unreachable;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) != root) unreachable.push_back(s.levels[i].name);
  }
  if (!unreachable.empty()) {
    issues.push_back("network is disconnected; levels unreachable from '" + s.levels[0].name +
                     "': " + join(unreachable, ", "));
  }
  return issues;
}

void require_valid(const LevelSystem& system) {
  auto issues = validate(system);
  if (!issues.empty()) throw ModelError(std::move(issues));
}

RateMatrix::RateMatrix(std::size_t n, std::span<const double> row_major)
    : n_(n), stride_(padded(n)), data_(stride_ * n, 0.0) {
  if (row_major.size() != n * n) throw DomainError("RateMatrix: expected n*n entries");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) data_[j * stride_ + i] = row_major[i * n + j];
  }
}

double RateMatrix::column_sum(std::size_t col) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) sum += (*this)(i, col);
  return sum;
}

double RateMatrix::max_abs_entry() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double RateMatrix::max_abs_diagonal() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs((*this)(i, i)));
  return m;
}

RateMatrix RateMatrix::scaled(double factor) const {
  RateMatrix out = *this;
  for (double& v : out.data_) v *= factor;
  return out;
}

bool operator==(const RateMatrix& a, const RateMatrix& b) {
  if (a.n_ != b.n_) return false;
  for (std::size_t k = 0; k < a.data_.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(a.data_[k]) != std::bit_cast<std::uint64_t>(b.data_[k])) return false;
  }
  return true;
}

RateMatrix build_rate_matrix(const LevelSystem& s) {
  require_valid(s);
  const std::size_t n = s.levels.size();
  std::vector<double> m(n * n, 0.0);
  auto at = [&](std::size_t row, std::size_t col) -> double& { return m[row * n + col]; };

  for (const auto& t : s.transitions) {
    const std::size_t lo = s.level_index(t.lower);
    const std::size_t up = s.level_index(t.upper);
    const double occupation = bose_occupation(s.levels[up].energy_ev - s.levels[lo].energy_ev,
                                              s.bath_temperature(t.bath));
    at(up, lo) += t.gamma_per_s * occupation;
    at(lo, up) += t.gamma_per_s * (occupation + 1.0);
  }
  for (const auto& p : s.pumps) {
    const std::size_t lo = s.level_index(p.lower);
    const std::size_t up = s.level_index(p.upper);
    at(up, lo) += p.rate_per_s;
    at(lo, up) += p.rate_per_s;
  }
  const auto& x = s.extraction;
  const std::size_t src = s.level_index(x.source);
  at(s.level_index(x.sink), src) += x.gamma_load_per_s;
  at(s.level_index(x.recomb_target), src) += x.chi * x.gamma_load_per_s;

  for (std::size_t j = 0; j < n; ++j) {
    double out_flow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) out_flow += at(i, j);
    }
    at(j, j) = -out_flow;
  }
  return RateMatrix(n, m);
}

LevelSystem at_operating_point(const LevelSystem& tmpl, double pump_rate, double gamma_load) {
  if (!(pump_rate >= 0.0) || !std::isfinite(pump_rate)) throw DomainError("pump_rate must be >= 0");
  if (!(gamma_load >= 0.0) || !std::isfinite(gamma_load)) throw DomainError("gamma_load must be >= 0");
  LevelSystem out = tmpl;
  double total = 0.0;
  for (const auto& p : tmpl.pumps) total += p.rate_per_s;
  for (auto& p : out.pumps) {
    const double share = total > 0.0 ? p.rate_per_s / total : 1.0 / static_cast<double>(out.pumps.size());
    p.rate_per_s = pump_rate * share;
  }
  out.extraction.gamma_load_per_s = gamma_load;
  return out;
}

double pump_band_gap(const LevelSystem& s) {
  double gap = 0.0;
  for (const auto& p : s.pumps) gap = std::max(gap, std::abs(s.energy(p.upper) - s.energy(p.lower)));
  return gap;
}

}  // namespace qpv
