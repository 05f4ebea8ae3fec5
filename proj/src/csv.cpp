#include "qpv/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "qpv/errors.hpp"

namespace qpv {
namespace {

constexpr double kPowerIdentityTol = 1e-12;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void check_power_identity(const OperatingPoint& p) {
  const double iv = p.current * p.voltage;
  if (std::abs(p.power - iv) > kPowerIdentityTol * std::max(std::abs(p.power), std::abs(iv))) {
    throw EmissionError("emit_csv: row at gamma = " + format_number(p.gamma_load) + " violates P = I V");
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string iv_csv(const IVCurve& curve, const LevelSystem& system) {
  if (curve.points.empty()) throw EmissionError("emit_csv: I-V curve is empty");
  const std::size_t src = system.level_index(system.extraction.source);
  const std::size_t sink = system.level_index(system.extraction.sink);

  std::vector<const OperatingPoint*> rows;
  for (const auto& p : curve.points) rows.push_back(&p);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const OperatingPoint* a, const OperatingPoint* b) { return a->gamma_load < b->gamma_load; });

  std::string out(kIvHeader);
  out += '\n';
  for (const OperatingPoint* p : rows) {
    check_power_identity(*p);
    out += format_number(p->gamma_load) + ',' + format_number(p->voltage) + ',' + format_number(p->current) + ',' +
           format_number(p->power) + ',' + format_number(watts_to_uev_per_s(p->power)) + ',' +
           format_number(p->populations.populations.at(src)) + ',' +
           format_number(p->populations.populations.at(sink)) + '\n';
  }
  return out;
}

std::string pump_sweep_csv(const PumpSweep& sweep) {
  if (sweep.points.empty()) throw EmissionError("emit_csv: pump sweep is empty");
  std::vector<const PumpSweepPoint*> rows;
  for (const auto& p : sweep.points) rows.push_back(&p);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const PumpSweepPoint* a, const PumpSweepPoint* b) { return a->pump_rate < b->pump_rate; });

  std::string out(kPumpSweepHeader);
  out += '\n';
  for (const PumpSweepPoint* p : rows) {
    out += format_number(p->pump_rate) + ',' + format_number(p->max_power) + ',' +
           format_number(watts_to_uev_per_s(p->max_power)) + ',' + format_number(p->v_mpp) + ',' +
           format_number(p->gamma_mpp) + ',' + format_number(p->efficiency) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EmissionError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw EmissionError("write to '" + path.string() + "' failed");
}

TraceWriter::TraceWriter(const std::filesystem::path& path, const LevelSystem& system)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw EmissionError("cannot open '" + path.string() + "' for writing");
  out_ << "time_s";
  for (const auto& level : system.levels) out_ << ",P_" << level.name;
  out_ << '\n';
}

void TraceWriter::write(double time_s, const std::vector<double>& populations) {
  out_ << format_number(time_s);
  for (double p : populations) out_ << ',' << format_number(p);
  out_ << '\n';
  if (!out_) throw EmissionError("trace write failed");
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DomainError("csv: missing column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("csv '" + path.string() + "' is empty");
  table.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) + " fields");
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      const auto& f = fields[c];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw DomainError(path.string() + ":" + std::to_string(lineno) + ": column '" + table.header[c] +
                          "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw DomainError("csv '" + path.string() + "' has no data rows");
  return table;
}

}  // namespace qpv
