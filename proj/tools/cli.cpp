#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "squeezebeam/config.hpp"
#include "squeezebeam/error.hpp"
#include "squeezebeam/experiment.hpp"
#include "squeezebeam/model.hpp"
#include "squeezebeam/svg_plot.hpp"
#include "squeezebeam/tables.hpp"

namespace squeezebeam::cli {

namespace fs = std::filesystem;

namespace {

// v_fock below this is dominated by round-off in N_g.
constexpr double kVFockFloor = 1e-6;

struct Options {
  std::string out_dir;
  bool plots = false;
  std::optional<std::size_t> workers;
  bool quiet = false;
  std::string config_path;
  std::string state_spec;
};

std::string describe_vfock(double v) {
  if (v < kVFockFloor) return "<= 1e-06 (floor)";
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::size_t resolve_workers(const Options& opt) {
  if (opt.workers) return *opt.workers;
  if (const char* env = std::getenv("SQUEEZEBEAM_WORKERS")) {
    std::size_t pos = 0;
    unsigned long n = 0;
    try {
      n = std::stoul(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || env[pos] != '\0' || n == 0)
      throw ValidationError(std::string("SQUEEZEBEAM_WORKERS must be a positive integer, got '") + env + "'");
    return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

fs::path output_directory(const Options& opt, const ConfigDocument& doc) {
  return opt.out_dir.empty() ? fs::path(doc.output.directory) : fs::path(opt.out_dir);
}

bool wants_plots(const Options& opt, const ConfigDocument& doc) {
  return opt.plots || doc.output.wants("svg");
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const ConfigDocument doc = load_config(opt.config_path);
  const fs::path dir = output_directory(opt, doc);
  Manifest manifest;
  manifest.command = "run";
  manifest.config = doc;

  ScenarioResult result;
  MinimumVFock best{std::nan(""), std::nan("")};
  std::vector<std::string> files;
  try {
    result = run_scenario(doc.scenario);
    const double exclude = doc.experiment.exclude_before.value_or(0.5 * result.leave_time);
    if (result.series.back().t >= exclude)
      best = min_vfock_over_time(result.series, exclude);
    else
      result.warnings.push_back("run ends inside the transient-exclusion window; min v_fock not reported");
    const TimePoint& last = result.series.back();
    manifest.summary = {
        {"min_vfock", best.value},
        {"t_min_s", best.t},
        {"final_N_g", last.stats.N_g},
        {"final_v", last.stats.v},
        {"final_attenuation", last.attenuation},
        {"max_flux_residual", result.trajectory.max_flux_residual()},
        {"min_commutator_residual", result.min_commutator_residual},
        {"kappa", result.kappa},
        {"delta_0", result.resonance.total},
        {"leave_time_s", result.leave_time},
    };
    manifest.warnings = result.warnings;

    ResultBundle bundle;
    const Table dens = densities_table(result, doc.scenario.grid);
    const Table series = timeseries_table(result);
    bundle.tables = {{"densities", dens}, {"timeseries", series}};
    if (wants_plots(opt, doc)) {
      bundle.plots = {{"densities.svg", emit_plot(dens, PlotKind::Densities)},
                      {"timeseries.svg", emit_plot(series, PlotKind::TimeSeries)}};
    }
    manifest.wall_time_s = elapsed(start);
    bundle.manifest = manifest;
    files = write_bundle(std::move(bundle), dir);
  } catch (const std::exception& e) {
    manifest.error = e.what();
    manifest.wall_time_s = elapsed(start);
    try {
      write_manifest(manifest, dir);
    } catch (const std::exception&) {
    }
    throw;
  }
  const TimePoint& last = result.series.back();

  if (!opt.quiet) {
    print_warnings(result.warnings, err);
    out << "scenario        " << result.label << '\n'
        << "min v_fock      ";
    if (std::isnan(best.value))
      out << "n/a\n";
    else
      out << describe_vfock(best.value) << " at t = " << best.t << " s\n";
    out
        << "final N_g       " << last.stats.N_g << '\n'
        << "attenuation     " << last.attenuation << '\n'
        << "flux residual   " << result.trajectory.max_flux_residual() << '\n'
        << "wrote " << files.size() << " files to " << dir.string() << '\n';
  }
  return kOk;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const ConfigDocument doc = load_config(opt.config_path);
  if (doc.experiment.mode == ExperimentMode::Run)
    throw ValidationError("experiment.mode must be \"sweep-delta\" or \"sweep-rabi\" for the sweep command");
  const std::size_t workers = resolve_workers(opt);
  const fs::path dir = output_directory(opt, doc);
  Manifest manifest;
  manifest.command = "sweep";
  manifest.config = doc;

  SweepResult result;
  try {
    result = sweep(doc.sweep_spec(), workers);
  } catch (const std::exception& e) {
    manifest.error = e.what();
    manifest.wall_time_s = elapsed(start);
    write_manifest(manifest, dir);
    throw;
  }

  for (const auto& r : result.records) {
    if (!r.error) continue;
    std::ostringstream os;
    os << std::setprecision(17) << "point " << r.value << " failed: " << *r.error;
    manifest.warnings.push_back(os.str());
  }
  if (result.argmin) {
    const SweepRecord& best = result.records[*result.argmin];
    manifest.summary = {{"argmin_value", best.value}, {"min_vfock", best.min_vfock}, {"t_min_s", best.t_min}};
  }
  manifest.summary.emplace_back("points", static_cast<double>(result.records.size()));

  ResultBundle bundle;
  const Table table = sweep_table(result);
  bundle.tables = {{"sweep", table}};
  if (wants_plots(opt, doc)) {
    PlotSpec spec{"Minimum v_fock over time", "", "min v_fock", "param_value", {"min_vfock"}, 1.0, true, false};
    spec.x_label = result.parameter == SweepParameter::DeltaOffset ? "delta - delta_0 (rad/s)"
                                                                   : "Omega23 (rad/s)";
    bundle.plots = {{"sweep.svg", render_svg(table, spec)}};
  }
  manifest.wall_time_s = elapsed(start);
  bundle.manifest = manifest;
  const auto files = write_bundle(std::move(bundle), dir);

  if (!opt.quiet) {
    print_warnings(manifest.warnings, err);
    out << std::setw(24) << std::left << "value" << "min v_fock\n";
    for (const auto& r : result.records) {
      out << std::setw(24) << std::left << r.value
          << (r.error ? std::string("failed") : describe_vfock(r.min_vfock)) << '\n';
    }
    if (result.argmin)
      out << "argmin " << result.records[*result.argmin].value << '\n';
    else
      out << "argmin undefined: every point failed\n";
    out << "wrote " << files.size() << " files to " << dir.string() << '\n';
  }
  return result.argmin ? kOk : kRuntime;
}

int cmd_moments(const Options& opt, std::ostream& out) {
  std::string text = opt.state_spec;
  if (!text.empty() && text.front() != '{') {
    std::ifstream in(text, std::ios::binary);
    if (!in) throw ValidationError("state spec is neither a JSON object nor a readable file: '" + text + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  const OpticalStateSpec spec = parse_optical_state(text);
  const OpticalMoments m = optical_moments(spec);
  out << std::setprecision(12) << "n_bar    " << m.n_bar << '\n' << "bdag2b2  " << m.bdag2b2 << '\n';
  if (m.n_bar > 0)
    out << "fano     " << fano(m) << '\n';
  else
    out << "fano     undefined (vacuum input)\n";
  return kOk;
}

int cmd_estimate(const Options& opt, std::ostream& out, std::ostream& err) {
  const ConfigDocument doc = load_config(opt.config_path);
  const Model model(doc.scenario.physical, doc.scenario.grid, doc.scenario.detector);
  const ResonanceTerms& r = model.resonance();
  PhysicalParams unit = model.params();
  unit.kappa = 1.0;

  if (!opt.quiet) print_warnings(model.warnings(), err);
  out << std::setprecision(6);
  out << "delta_0               " << r.total << " rad/s\n"
      << "  kinetic             " << r.kinetic << '\n'
      << "  condensate          " << r.condensate << '\n'
      << "  light shift         " << -r.light_shift << '\n'
      << "  trap                " << -r.trap << '\n'
      << "recoil velocity       " << model.recoil_velocity() << " m/s\n"
      << "condensate width      " << model.sigma() << " m\n"
      << "T_leave               " << model.leave_time() << " s\n"
      << "probe amplitude p_in  " << model.probe_amplitude() << '\n'
      << "kappa                 " << model.kappa()
      << (doc.scenario.physical.calibration.mode == KappaMode::MatchEstimate ? " (matched)" : " (fixed)")
      << '\n'
      << "optimal Omega23 estimate (kappa = 1):\n"
      << "  peak                " << optimal_pump_rabi_estimate(unit, model.phi0(), RabiInterpretation::Peak)
      << " rad/s\n"
      << "  integral-over-width "
      << optimal_pump_rabi_estimate(unit, model.phi0(), RabiInterpretation::IntegralOverWidth) << " rad/s\n"
      << "  traveling-wave      "
      << optimal_pump_rabi_estimate(unit, model.phi0(), RabiInterpretation::TravelingWave) << " rad/s\n"
      << "optimal Omega23 estimate (kappa = " << model.kappa() << ", "
      << (doc.scenario.physical.calibration.interpretation == RabiInterpretation::Peak ? "peak"
          : doc.scenario.physical.calibration.interpretation == RabiInterpretation::IntegralOverWidth
              ? "integral-over-width"
              : "traveling-wave")
      << ")  "
      << optimal_pump_rabi_estimate(model.params(), model.phi0(),
                                    doc.scenario.physical.calibration.interpretation)
      << " rad/s\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Atom-laser outcoupling simulator with quantized probe statistics", "squeezebeam"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--out", opt.out_dir, "Output directory (overrides output.directory)");
  app.add_flag("--plots", opt.plots, "Also write SVG plots");
  app.add_option("--workers", opt.workers, "Parallel sweep workers (fallback: SQUEEZEBEAM_WORKERS)")
      ->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", opt.quiet, "Suppress the summary on stdout");
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* run_cmd = app.add_subcommand("run", "Evolve one scenario and write densities and time series");
  run_cmd->add_option("config", opt.config_path, "Configuration file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep delta offset or Omega23 and reduce to min v_fock");
  sweep_cmd->add_option("config", opt.config_path, "Configuration file")->required();
  auto* moments_cmd = app.add_subcommand("moments", "Number moments of an optical input state");
  moments_cmd->add_option("state-spec", opt.state_spec, "JSON object or file, e.g. '{\"kind\":\"fock\",\"n\":3}'")
      ->required();
  auto* estimate_cmd = app.add_subcommand("estimate", "Resonance detuning, leave time and coupling estimates");
  estimate_cmd->add_option("config", opt.config_path, "Configuration file")->required();
  for (auto* sub : {run_cmd, sweep_cmd, moments_cmd, estimate_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    if (*run_cmd) return cmd_run(opt, out, err);
    if (*sweep_cmd) return cmd_sweep(opt, out, err);
    if (*moments_cmd) return cmd_moments(opt, out);
    return cmd_estimate(opt, out, err);
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) err << "error: " << issue << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace squeezebeam::cli
