#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "qpv/rate_network.hpp"
#include "qpv/sweeps.hpp"

namespace qpv {

inline constexpr std::string_view kIvHeader =
    "gamma_per_s,voltage_v,current_a,power_w,power_uev_per_s,P_alpha,P_beta";
inline constexpr std::string_view kPumpSweepHeader =
    "wp_per_s,pmax_w,pmax_uev_per_s,v_mpp_v,gamma_mpp_per_s,efficiency";

/// Shortest scientific representation that round-trips exactly.
std::string format_number(double value);

/// I-V rows sorted by Gamma. P_alpha / P_beta are the extraction source and
/// sink populations. Throws EmissionError on empty input or if any row breaks
/// P = I V.
std::string iv_csv(const IVCurve& curve, const LevelSystem& system);

std::string pump_sweep_csv(const PumpSweep& sweep);

/// Writes `content` to `path`, throwing EmissionError when unwritable.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Streams a population time trace: time_s,P_<level>,...
class TraceWriter {
 public:
  TraceWriter(const std::filesystem::path& path, const LevelSystem& system);
  void write(double time_s, const std::vector<double>& populations);

 private:
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by name; throws DomainError naming the column if absent.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace qpv
