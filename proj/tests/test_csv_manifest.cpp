#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qpv/csv.hpp"
#include "qpv/errors.hpp"
#include "qpv/manifest.hpp"
#include "qpv/presets.hpp"

using namespace qpv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "qpv_test_csv") { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.0) == "0e+00");
  CHECK(format_number(1e12) == "1e+12");
  CHECK(format_number(1.5) == "1.5e+00");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> expo(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, expo(rng));
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("I-V CSV") {
  const LevelSystem tmpl = preset_model_b(1.0);
  const IVCurve curve = iv_sweep(tmpl, 1e12, 1e6, 1e16, 20, 1);
  const std::string csv = iv_csv(curve, tmpl);
  CHECK(first_line(csv) == kIvHeader);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(curve.points.size()) + 1);
  CHECK(csv == iv_csv(curve, tmpl));

  IVCurve empty;
  CHECK_THROWS_AS(iv_csv(empty, tmpl), EmissionError);

  IVCurve broken = curve;
  broken.points[3].power *= 1.01;
  CHECK_THROWS_AS(iv_csv(broken, tmpl), EmissionError);
}

TEST_CASE("I-V rows are ordered by load and parse back") {
  TempDir dir;
  const LevelSystem tmpl = preset_model_b(1.0);
  const IVCurve curve = iv_sweep(tmpl, 1e12, 1e6, 1e16, 30, 1);
  const fs::path file = dir.path / "iv.csv";
  const std::string text = iv_csv(curve, tmpl);
  write_text_file(file, text);
  CHECK(slurp(file) == text);
  const CsvTable t = read_csv(file);
  const std::size_t g = t.column("gamma_per_s");
  const std::size_t i = t.column("current_a");
  const std::size_t v = t.column("voltage_v");
  const std::size_t p = t.column("power_w");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (r > 0) CHECK(t.rows[r][g] > t.rows[r - 1][g]);
    CHECK(t.rows[r][p] == doctest::Approx(t.rows[r][i] * t.rows[r][v]).epsilon(1e-12));
  }
  CHECK_THROWS_WITH_AS(t.column("resistance"), doctest::Contains("resistance"), DomainError);
}

TEST_CASE("pump sweep CSV") {
  PumpSweep sweep;
  CHECK_THROWS_AS(pump_sweep_csv(sweep), EmissionError);
  sweep = pump_sweep(preset_model_b(1.0), 1e11, 1e13, 3, 1);
  const std::string csv = pump_sweep_csv(sweep);
  CHECK(first_line(csv) == kPumpSweepHeader);
  CHECK(csv == pump_sweep_csv(sweep));
}

TEST_CASE("trace writer") {
  TempDir dir;
  const LevelSystem s = preset_model_b(1e13);
  const fs::path file = dir.path / "trace.csv";
  {
    TraceWriter w(file, s);
    w.write(0.0, {0.25, 0.25, 0.25, 0.25});
    w.write(1e-12, {0.4, 0.1, 0.2, 0.3});
  }
  const CsvTable t = read_csv(file);
  CHECK(t.header == std::vector<std::string>{"time_s", "P_0", "P_1", "P_alpha", "P_beta"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][t.column("P_beta")] == 0.3);
}

TEST_CASE("unwritable output is an emission error") {
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", "a"), EmissionError);
}

TEST_CASE("malformed CSV input") {
  TempDir dir;
  const fs::path file = dir.path / "bad.csv";
  write_text_file(file, "a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(file), DomainError);
  write_text_file(file, "a,b\n1,x\n");
  CHECK_THROWS_AS(read_csv(file), DomainError);
  write_text_file(file, "a,b\n");
  CHECK_THROWS_AS(read_csv(file), DomainError);
  CHECK_THROWS_AS(read_csv(dir.path / "none.csv"), DomainError);
}

TEST_CASE("manifest round trip") {
  TempDir dir;
  RunManifest m;
  m.command_line = {"iv", "--model", "model-b", "--wp", "1e12"};
  m.model_source = "model-b";
  m.resolved_model = {{"levels", 4}};
  m.parameters = {{"wp_per_s", 1e12}};
  m.assumptions = {"voltage temperature = cold bath temperature"};
  m.timestamp = utc_timestamp();

  const fs::path out = dir.path / "iv.csv";
  CHECK(manifest_path_for(out) == dir.path / "iv.csv.manifest.json");
  write_manifest(m, manifest_path_for(out));
  const RunManifest back = read_manifest(manifest_path_for(out));
  CHECK(back.command_line == m.command_line);
  CHECK(back.model_source == m.model_source);
  CHECK(back.resolved_model == m.resolved_model);
  CHECK(back.parameters == m.parameters);
  CHECK(back.assumptions == m.assumptions);
  CHECK(back.version == kVersion);
  CHECK(back.timestamp == m.timestamp);
  CHECK(to_json(back).dump() == to_json(m).dump());

  CHECK(m.timestamp.size() == 20);
  CHECK(m.timestamp.back() == 'Z');

  write_text_file(dir.path / "bad.json", "{not json");
  CHECK_THROWS_AS(read_manifest(dir.path / "bad.json"), ConfigError);
  CHECK_THROWS_AS(read_manifest(dir.path / "absent.json"), ConfigError);
}
