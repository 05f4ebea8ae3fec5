#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>

#include "qpv/config.hpp"
#include "qpv/csv.hpp"
#include "qpv/dynamics.hpp"
#include "qpv/errors.hpp"
#include "qpv/kernels.hpp"
#include "qpv/manifest.hpp"
#include "qpv/observables.hpp"
#include "qpv/presets.hpp"
#include "qpv/radiometry.hpp"
#include "qpv/saturation_fit.hpp"
#include "qpv/sweeps.hpp"

namespace qpv::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kDefaultPumpRate = 1e13;
constexpr double kDefaultGamma = 1e12;

struct ResolvedModel {
  LevelSystem system;
  std::string source;
};

ResolvedModel resolve_model(const std::string& model, std::optional<double> wp, std::optional<double> gamma) {
  if (is_preset_name(model)) {
    return {make_preset(model, wp.value_or(kDefaultPumpRate), gamma.value_or(kDefaultGamma)), "preset:" + model};
  }
  if (!std::filesystem::exists(model)) {
    throw UsageError("--model: '" + model + "' is neither a preset nor an existing config file (see `qpv presets`)");
  }
  LevelSystem system = ingest_config(model);
  if (wp || gamma) {
    double total = 0.0;
    for (const auto& p : system.pumps) total += p.rate_per_s;
    system = at_operating_point(system, wp.value_or(total), gamma.value_or(system.extraction.gamma_load_per_s));
  }
  return {std::move(system), "config:" + model};
}

RunManifest base_manifest(const std::vector<std::string>& args, const ResolvedModel& model) {
  RunManifest m;
  m.command_line = args;
  m.model_source = model.source;
  m.resolved_model = config_json(model.system);
  m.assumptions = model.system.assumptions;
  m.timestamp = utc_timestamp();
  return m;
}

void emit(const std::filesystem::path& out_path, const std::string& content, const RunManifest& manifest,
          std::ostream& out) {
  write_text_file(out_path, content);
  write_manifest(manifest, manifest_path_for(out_path));
  out << "wrote " << out_path.string() << " (+ " << manifest_path_for(out_path).string() << ")\n";
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(6) << v;
  return s.str();
}

// --- flux -----------------------------------------------------------------

struct FluxArgs {
  double egap = 1.8;
  double temp = 6000.0;
  std::optional<double> pump_rate;
};

int cmd_flux(const FluxArgs& a, std::ostream& out) {
  const FluxResult flux = planck_photon_flux(a.egap, a.temp);
  out << "band_gap_ev      " << a.egap << "\n"
      << "temperature_k    " << a.temp << "\n"
      << "flux_per_m2_s    " << sci(flux.flux) << "\n"
      << "series_terms     " << flux.series_terms << "\n";
  if (a.pump_rate) {
    const double area = pump_rate_to_area(*a.pump_rate, a.egap, a.temp);
    out << "pump_rate_per_s  " << sci(*a.pump_rate) << "\n"
        << "area_m2          " << sci(area) << "  (" << sci(area * 1e12) << " um^2)\n";
  }
  out << "note: a " << sci(kQuotedPumpRate) << " 1/s pump is often quoted as a " << kQuotedArea_m2 * 1e12
      << " um^2 cell; at this flux that pump corresponds to "
      << sci(pump_rate_to_area(kQuotedPumpRate, a.egap, a.temp) * 1e12) << " um^2\n";
  return kExitOk;
}

// --- presets --------------------------------------------------------------

struct PresetArgs {
  std::string dump;
  double wp = kDefaultPumpRate;
  double gamma = kDefaultGamma;
};

int cmd_presets(const PresetArgs& a, std::ostream& out) {
  if (!a.dump.empty()) {
    if (!is_preset_name(a.dump)) throw UsageError("--dump: unknown preset '" + a.dump + "'");
    out << serialize_config(make_preset(a.dump, a.wp, a.gamma));
    return kExitOk;
  }
  for (const auto& p : preset_catalog()) {
    const LevelSystem s = make_preset(p.name, a.wp, a.gamma);
    out << p.name << ": " << p.description << "\n";
    out << "  levels:";
    for (const auto& l : s.levels) out << " " << l.name << "=" << l.energy_ev << "eV";
    out << "\n";
    for (const auto& t : s.transitions) {
      out << "  transition " << t.lower << "<->" << t.upper << " gamma=" << sci(t.gamma_per_s) << "/s bath=" << t.bath
          << " (" << s.bath_temperature(t.bath) << " K)\n";
    }
    for (const auto& pump : s.pumps) {
      out << "  pump " << pump.lower << "->" << pump.upper << " rate=" << sci(pump.rate_per_s) << "/s\n";
    }
    const auto& x = s.extraction;
    out << "  extraction " << x.source << "->" << x.sink << " Gamma=" << sci(x.gamma_load_per_s) << "/s chi=" << x.chi
        << " recomb->" << x.recomb_target << "\n";
    for (const auto& note : s.assumptions) out << "  assumption: " << note << "\n";
  }
  return kExitOk;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  std::optional<double> wp;
  std::optional<double> gamma;
  std::string trace;
  std::optional<double> dt;
  std::uint64_t steps = 10000;
  std::uint64_t every = 1;
  std::string method = "direct";
  double tol = 1e-12;
};

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const ResolvedModel model = resolve_model(a.model, a.wp, a.gamma);
  const RateMatrix matrix = build_rate_matrix(model.system);

  if (!a.trace.empty()) {
    const double dt = a.dt.value_or(kRk4SteadyStepFraction / std::max(matrix.max_abs_diagonal(), 1e-300));
    TraceWriter writer(a.trace, model.system);
    const PopulationState final_state =
        integrate_rk4(matrix, PopulationState::uniform(matrix.dimension()), dt, a.steps,
                      [&](const PopulationState& s) { writer.write(s.time_s, s.populations); }, a.every);
    RunManifest manifest = base_manifest(args, model);
    manifest.parameters = {{"command", "simulate"}, {"dt_s", dt}, {"steps", a.steps}, {"every", a.every},
                           {"simd_backend", kernels::active().name}};
    write_manifest(manifest, manifest_path_for(a.trace));
    out << "wrote " << a.trace << " (" << a.steps / a.every + 1 << " rows, dt = " << sci(dt) << " s)\n";
    out << "final population sum " << std::setprecision(17) << final_state.sum() << "\n";
    return kExitOk;
  }

  SteadyStateReport report;
  if (a.method == "direct") {
    report = steady_state_direct(matrix);
  } else if (a.method == "integrated") {
    report = steady_state_integrated(matrix, a.tol);
  } else {
    throw UsageError("--method must be 'direct' or 'integrated'");
  }
  out << "model      " << model.source << "\n"
      << "method     " << a.method << " (" << report.iterations_or_steps << " iterations/steps)\n"
      << "residual   " << sci(report.residual) << " 1/s\n";
  for (std::size_t i = 0; i < model.system.levels.size(); ++i) {
    out << "P_" << std::left << std::setw(9) << model.system.levels[i].name << std::right
        << std::setprecision(12) << report.state.populations[i] << "\n";
  }
  out << "current_a  " << sci(current(report.state, model.system)) << "\n";
  try {
    const double v = voltage(report.state, model.system);
    out << "voltage_v  " << sci(v) << "\n"
        << "power_w    " << sci(v * current(report.state, model.system)) << "\n";
  } catch (const UndefinedVoltageError& e) {
    out << "voltage_v  undefined (" << e.what() << ")\n";
  }
  return kExitOk;
}

// --- iv -------------------------------------------------------------------

struct IvArgs {
  std::string model;
  double wp = 1e12;
  double gamma_min = 1e6;
  double gamma_max = 1e16;
  std::size_t points = 200;
  std::string out;
};

int cmd_iv(const IvArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const ResolvedModel model = resolve_model(a.model, a.wp, std::nullopt);
  const IVCurve curve = iv_sweep(model.system, a.wp, a.gamma_min, a.gamma_max, a.points, default_thread_count());
  RunManifest manifest = base_manifest(args, model);
  manifest.parameters = {{"command", "iv"},          {"wp_per_s", a.wp},    {"gamma_min_per_s", a.gamma_min},
                         {"gamma_max_per_s", a.gamma_max}, {"points", a.points}};
  emit(a.out, iv_csv(curve, model.system), manifest, out);

  double best = 0.0;
  for (const auto& p : curve.points) best = std::max(best, p.power);
  out << curve.points.size() << " points, short-circuit current " << sci(curve.points.front().current)
      << " A, max power on grid " << sci(best) << " W\n";
  return kExitOk;
}

// --- pump-sweep -------------------------------------------------------------

struct PumpSweepArgs {
  std::string model;
  double wp_min = 1e11;
  double wp_max = 1e16;
  std::size_t points = 26;
  std::string out;
};

int cmd_pump_sweep(const PumpSweepArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const ResolvedModel model = resolve_model(a.model, std::nullopt, std::nullopt);
  const PumpSweep sweep = pump_sweep(model.system, a.wp_min, a.wp_max, a.points, default_thread_count());
  RunManifest manifest = base_manifest(args, model);
  manifest.parameters = {{"command", "pump-sweep"}, {"wp_min_per_s", a.wp_min}, {"wp_max_per_s", a.wp_max},
                         {"points", a.points},        {"band_gap_ev", sweep.band_gap_ev}};
  emit(a.out, pump_sweep_csv(sweep), manifest, out);
  std::size_t flagged = 0;
  for (const auto& p : sweep.points) flagged += p.multimodal ? 1 : 0;
  out << sweep.points.size() << " pump rates, band gap " << sweep.band_gap_ev << " eV";
  if (flagged) out << ", " << flagged << " multimodal P(Gamma) scans";
  out << "\n";
  return kExitOk;
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
  std::string in;
  std::string x_column = "wp_per_s";
  std::string y_column = "pmax_w";
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const CsvTable table = read_csv(a.in);
  const std::size_t xc = table.column(a.x_column);
  const std::size_t yc = table.column(a.y_column);
  std::vector<double> w;
  std::vector<double> p;
  for (const auto& row : table.rows) {
    w.push_back(row[xc]);
    p.push_back(row[yc]);
  }
  const SaturationFit fit = fit_saturation(w, p);
  out << std::setprecision(10) << "a = " << fit.a << "\n"
      << "b = " << fit.b << "\n"
      << "rms_residual = " << fit.rms_residual << "\n"
      << "iterations = " << fit.iterations << (fit.converged ? "" : " (not converged)") << "\n";
  return kExitOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool allow_replay);

int cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
  const RunManifest m = read_manifest(path);
  if (!m.command_line.empty() && m.command_line.front() == "replay") {
    throw UsageError("replay: manifest records another replay");
  }
  return dispatch(m.command_line, out, err, false);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool allow_replay) {
  CLI::App app{"qpv: photocell quantum heat engine simulator"};
  app.require_subcommand(1);

  FluxArgs flux;
  auto* flux_cmd = app.add_subcommand("flux", "Blackbody photon flux above a gap and pump-rate area equivalent");
  flux_cmd->add_option("--egap", flux.egap, "Band gap [eV]")->required();
  flux_cmd->add_option("--temp", flux.temp, "Blackbody temperature [K]")->required();
  flux_cmd->add_option("--pump-rate", flux.pump_rate, "Pump rate [1/s] to convert to an area");

  PresetArgs presets;
  auto* presets_cmd = app.add_subcommand("presets", "List built-in models, or dump one as a config file");
  presets_cmd->add_option("--dump", presets.dump, "Preset name to print as JSON config");
  presets_cmd->add_option("--wp", presets.wp, "Pump rate [1/s]");
  presets_cmd->add_option("--gamma", presets.gamma, "Load rate Gamma [1/s]");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Steady state or RK4 time trace of one model");
  sim_cmd->add_option("--model", sim.model, "Preset name or config path")->required();
  sim_cmd->add_option("--wp", sim.wp, "Total pump rate [1/s]");
  sim_cmd->add_option("--gamma", sim.gamma, "Load rate Gamma [1/s]");
  sim_cmd->add_option("--trace", sim.trace, "Write a time trace CSV instead of the steady state");
  sim_cmd->add_option("--dt", sim.dt, "RK4 step [s] (default 0.05/max|M_ii|)");
  sim_cmd->add_option("--steps", sim.steps, "RK4 steps for --trace");
  sim_cmd->add_option("--every", sim.every, "Write every n-th step");
  sim_cmd->add_option("--method", sim.method, "Steady-state method: direct|integrated");
  sim_cmd->add_option("--tol", sim.tol, "Integrated steady-state tolerance");

  IvArgs iv;
  auto* iv_cmd = app.add_subcommand("iv", "I-V / P-V curve from a log-spaced Gamma sweep");
  iv_cmd->add_option("--model", iv.model, "Preset name or config path")->required();
  iv_cmd->add_option("--wp", iv.wp, "Total pump rate [1/s]");
  iv_cmd->add_option("--gamma-min", iv.gamma_min, "Smallest load [1/s]");
  iv_cmd->add_option("--gamma-max", iv.gamma_max, "Largest load [1/s]");
  iv_cmd->add_option("--points", iv.points, "Number of loads");
  iv_cmd->add_option("--out", iv.out, "Output CSV")->required();

  PumpSweepArgs ps;
  auto* ps_cmd = app.add_subcommand("pump-sweep", "Maximum power and efficiency versus pump rate");
  ps_cmd->add_option("--model", ps.model, "Preset name or config path")->required();
  ps_cmd->add_option("--wp-min", ps.wp_min, "Smallest pump rate [1/s]");
  ps_cmd->add_option("--wp-max", ps.wp_max, "Largest pump rate [1/s]");
  ps_cmd->add_option("--points", ps.points, "Number of pump rates");
  ps_cmd->add_option("--out", ps.out, "Output CSV")->required();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit P = a W/(W + b) to a pump-sweep CSV");
  fit_cmd->add_option("--in", fit.in, "Pump-sweep CSV")->required();
  fit_cmd->add_option("--x", fit.x_column, "Pump-rate column");
  fit_cmd->add_option("--y", fit.y_column, "Power column");

  std::string manifest_path;
  CLI::App* replay_cmd = nullptr;
  if (allow_replay) {
    replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay_cmd->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  }

  std::vector<const char*> argv{"qpv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*flux_cmd) return cmd_flux(flux, out);
  if (*presets_cmd) return cmd_presets(presets, out);
  if (*sim_cmd) return cmd_simulate(sim, args, out);
  if (*iv_cmd) return cmd_iv(iv, args, out);
  if (*ps_cmd) return cmd_pump_sweep(ps, args, out);
  if (*fit_cmd) return cmd_fit(fit, out);
  if (replay_cmd && *replay_cmd) return cmd_replay(manifest_path, out, err);
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, true);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace qpv::cli
