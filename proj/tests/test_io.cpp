#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "json.hpp"
#include "squeezebeam/error.hpp"
#include "squeezebeam/experiment.hpp"
#include "squeezebeam/svg_plot.hpp"
#include "squeezebeam/tables.hpp"

namespace sb = squeezebeam;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSmallConfig = R"({
  "label": "io-test",
  "grid": {"n_x": 256},
  "evolution": {"dt": 2e-7, "t_final": 1e-3, "snapshot_stride": 100},
  "experiment": {"mode": "run", "exclude_before": 0}
})";

constexpr const char* kSmallSweep = R"({
  "label": "io-sweep",
  "grid": {"n_x": 256},
  "evolution": {"dt": 2e-7, "t_final": 1e-3, "snapshot_stride": 100},
  "experiment": {"mode": "sweep-delta", "values": [-800, 0], "exclude_before": 0}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("squeezebeam_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "squeezebeam");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sb::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const sb::ScenarioResult& small_result() {
  static const sb::ScenarioResult r = [] {
    sb::Scenario s;
    s.grid.n_x = 256;
    s.evolution.dt = 2e-7;
    s.evolution.t_final = 1e-3;
    s.evolution.snapshot_stride = 100;
    return sb::run_scenario(s);
  }();
  return r;
}

}  // namespace

TEST(Csv, HeaderAndNumberFormat) {
  sb::Table t{{"a", "b"}, {{0.1, 1.0 / 3.0}, {-2.5e-300, 7.0}}};
  EXPECT_EQ(sb::to_csv(t), "a,b\n0.10000000000000001,0.33333333333333331\n-2.5e-300,7\n");
}

TEST(Csv, RowsRoundTripExactly) {
  const sb::Table t = sb::timeseries_table(small_result());
  std::istringstream in(sb::to_csv(t));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t_s,N_g,v_fock,v,attenuation,flux_residual");
  for (const auto& row : t.rows) {
    ASSERT_TRUE(std::getline(in, line));
    std::istringstream cells(line);
    std::string cell;
    for (double expected : row) {
      ASSERT_TRUE(std::getline(cells, cell, ','));
      EXPECT_EQ(std::strtod(cell.c_str(), nullptr), expected);
    }
  }
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Tables, StandardColumns) {
  const sb::ScenarioResult& r = small_result();
  sb::Grid grid;
  grid.n_x = 256;
  const sb::Table d = sb::densities_table(r, grid);
  EXPECT_EQ(d.columns, (std::vector<std::string>{"x_m", "atom_density", "photon_density", "condensate_density"}));
  EXPECT_EQ(d.rows.size(), 256u);
  EXPECT_EQ(d.rows.front()[0], grid.x_min);
  EXPECT_EQ(sb::timeseries_table(r).rows.size(), r.series.size());
  EXPECT_EQ(d.column("photon_density"), 2u);
  EXPECT_THROW(d.column("nope"), sb::ValidationError);

  sb::SweepResult sr;
  sr.records = {{-1.0, 0.5, 1e-3, 0.1, 10.0, std::nullopt}};
  const sb::Table s = sb::sweep_table(sr);
  EXPECT_EQ(s.columns, (std::vector<std::string>{"param_value", "min_vfock", "t_min_s", "final_N_g", "attenuation"}));
  EXPECT_EQ(s.rows.at(0), (std::vector<double>{-1.0, 0.5, 1e-3, 0.1, 10.0}));
}

TEST(Manifest, FieldsAndNonFiniteSummary) {
  sb::Manifest m;
  m.command = "run";
  m.wall_time_s = 1.5;
  m.warnings = {"careful"};
  m.summary = {{"min_vfock", 0.25}, {"t_min_s", std::nan("")}};
  m.files = {"densities.csv"};
  const auto j = nlohmann::json::parse(sb::manifest_json(m));
  EXPECT_EQ(j["tool"], "squeezebeam");
  EXPECT_EQ(j["command"], "run");
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["summary"]["min_vfock"], 0.25);
  EXPECT_TRUE(j["summary"]["t_min_s"].is_null());
  EXPECT_EQ(j["warnings"][0], "careful");
  EXPECT_EQ(j["files"][0], "densities.csv");
  EXPECT_TRUE(j.contains("created_utc"));
  EXPECT_TRUE(j.contains("tool_version"));
}

TEST(Bundle, WritesFilesAndManifest) {
  TempDir dir("bundle");
  sb::ResultBundle b;
  b.manifest.command = "run";
  b.tables = {{"timeseries", sb::timeseries_table(small_result())}};
  b.plots = {{"timeseries.svg", sb::emit_plot(b.tables[0].second, sb::PlotKind::TimeSeries)}};
  const auto files = sb::write_bundle(b, dir.path() / "nested");
  EXPECT_EQ(files, (std::vector<std::string>{"timeseries.csv", "timeseries.svg", "manifest.json"}));
  for (const auto& f : files) EXPECT_TRUE(fs::exists(dir.path() / "nested" / f)) << f;
  EXPECT_EQ(slurp(dir.path() / "nested" / "timeseries.csv"), sb::to_csv(b.tables[0].second));
  for (const auto& e : fs::directory_iterator(dir.path() / "nested"))
    EXPECT_NE(e.path().extension(), ".tmp");
  const auto j = nlohmann::json::parse(slurp(dir.path() / "nested" / "manifest.json"));
  EXPECT_EQ(j["files"].size(), files.size());
}

TEST(Bundle, UnwritableDirectoryFails) {
  TempDir dir("bundle_fail");
  write_file(dir.path() / "blocker", "x");
  sb::ResultBundle b;
  b.tables = {{"t", sb::Table{{"a"}, {{1.0}}}}};
  EXPECT_THROW(sb::write_bundle(b, dir.path() / "blocker" / "sub"), sb::Error);
}

TEST(Svg, SelfContainedStructure) {
  const sb::Table t = sb::timeseries_table(small_result());
  const std::string svg = sb::emit_plot(t, sb::PlotKind::TimeSeries);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg.find("<script"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Svg, OneSeriesPerColumnAndEscapedText) {
  sb::Table t{{"x", "y1", "y2"}, {{0, 1, 2}, {1, 2, 3}, {2, 4, 1}}};
  sb::PlotSpec spec;
  spec.title = "a < b & c";
  spec.x_column = "x";
  spec.y_columns = {"y1", "y2"};
  const std::string svg = sb::render_svg(t, spec);
  std::size_t count = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_EQ(sb::render_svg(t, spec), svg);
}

TEST(Svg, EmptyTableIsAnError) {
  sb::Table t{{"x", "y"}, {}};
  sb::PlotSpec spec;
  spec.x_column = "x";
  spec.y_columns = {"y"};
  EXPECT_THROW(sb::render_svg(t, spec), sb::ValidationError);
}

TEST(Cli, MissingConfigIsValidationError) {
  const CliResult r = cli({"run", "/nonexistent/squeezebeam.json", "--quiet"});
  EXPECT_EQ(r.code, sb::cli::kValidation);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(Cli, BadConfigIsValidationError) {
  TempDir dir("cli_bad");
  const auto cfg = write_file(dir.path() / "c.json", R"({"physical": {"mass_kg": 1}, "experiment": {"mode": "run"}})");
  const CliResult r = cli({"run", cfg.string(), "--out", (dir.path() / "o").string()});
  EXPECT_EQ(r.code, sb::cli::kValidation);
  EXPECT_NE(r.err.find("did you mean \"physical.m\""), std::string::npos) << r.err;
}

TEST(Cli, UnknownSubcommandOrFlag) {
  EXPECT_EQ(cli({"frobnicate"}).code, sb::cli::kValidation);
  EXPECT_EQ(cli({"moments", "{}", "--workers", "0"}).code, sb::cli::kValidation);
  EXPECT_EQ(cli({}).code, sb::cli::kValidation);
}

TEST(Cli, Moments) {
  const CliResult r = cli({"moments", R"({"kind": "squeezed-coherent", "alpha": 0, "r": 0.5, "theta": 0})"});
  EXPECT_EQ(r.code, sb::cli::kOk);
  EXPECT_NE(r.out.find("n_bar    0.271540317408"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("fano"), std::string::npos);
  EXPECT_EQ(cli({"moments", R"({"kind": "fock", "n": 0})"}).code, sb::cli::kOk);
  EXPECT_EQ(cli({"moments", R"({"kind": "moments", "n_bar": 2, "bdag2b2": 0})"}).code, sb::cli::kValidation);
}

TEST(Cli, Estimate) {
  TempDir dir("cli_estimate");
  const auto cfg = write_file(dir.path() / "c.json", kSmallConfig);
  const CliResult r = cli({"estimate", cfg.string()});
  EXPECT_EQ(r.code, sb::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("delta_0"), std::string::npos);
  EXPECT_NE(r.out.find("traveling-wave"), std::string::npos);
}

TEST(Cli, RunWritesBundleAndIsReproducible) {
  TempDir dir("cli_run");
  const auto cfg = write_file(dir.path() / "c.json", kSmallConfig);
  const CliResult a = cli({"run", cfg.string(), "--out", (dir.path() / "a").string(), "--plots", "--quiet"});
  ASSERT_EQ(a.code, sb::cli::kOk) << a.err;
  EXPECT_TRUE(a.out.empty());
  for (const char* f : {"densities.csv", "timeseries.csv", "densities.svg", "timeseries.svg", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir.path() / "a" / f)) << f;
  const auto manifest = nlohmann::json::parse(slurp(dir.path() / "a" / "manifest.json"));
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_EQ(manifest["config"]["label"], "io-test");
  EXPECT_TRUE(manifest["summary"].contains("min_vfock"));

  const CliResult b = cli({"run", cfg.string(), "--out", (dir.path() / "b").string(), "--quiet"});
  ASSERT_EQ(b.code, sb::cli::kOk);
  for (const char* f : {"densities.csv", "timeseries.csv"})
    EXPECT_EQ(slurp(dir.path() / "a" / f), slurp(dir.path() / "b" / f)) << f;
  EXPECT_FALSE(fs::exists(dir.path() / "b" / "densities.svg"));
}

TEST(Cli, SweepWritesTableAndRejectsRunConfig) {
  TempDir dir("cli_sweep");
  const auto cfg = write_file(dir.path() / "c.json", kSmallSweep);
  const CliResult r = cli({"sweep", cfg.string(), "--out", (dir.path() / "s").string(), "--workers", "2"});
  ASSERT_EQ(r.code, sb::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("argmin"), std::string::npos);
  const std::string csv = slurp(dir.path() / "s" / "sweep.csv");
  EXPECT_EQ(csv.rfind("param_value,min_vfock,t_min_s,final_N_g,attenuation\n-800,", 0), 0u) << csv;

  const auto run_cfg = write_file(dir.path() / "r.json", kSmallConfig);
  EXPECT_EQ(cli({"sweep", run_cfg.string(), "--out", (dir.path() / "x").string()}).code, sb::cli::kValidation);
}

TEST(Cli, WorkerEnvironmentFallback) {
  TempDir dir("cli_env");
  const auto cfg = write_file(dir.path() / "c.json", kSmallSweep);
  ::setenv("SQUEEZEBEAM_WORKERS", "zero", 1);
  EXPECT_EQ(cli({"sweep", cfg.string(), "--out", (dir.path() / "a").string(), "--quiet"}).code,
            sb::cli::kValidation);
  ::setenv("SQUEEZEBEAM_WORKERS", "2", 1);
  EXPECT_EQ(cli({"sweep", cfg.string(), "--out", (dir.path() / "b").string(), "--quiet"}).code, sb::cli::kOk);
  ::unsetenv("SQUEEZEBEAM_WORKERS");
  EXPECT_EQ(slurp(dir.path() / "b" / "sweep.csv"),
            (cli({"sweep", cfg.string(), "--out", (dir.path() / "c").string(), "--quiet", "--workers", "1"}),
             slurp(dir.path() / "c" / "sweep.csv")));
}
