#include "squeezebeam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "squeezebeam/error.hpp"

namespace squeezebeam {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Reads one JSON object, recording problems instead of throwing so that a
// single pass reports every offending field.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<std::string>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {}

  ~ObjectReader() = default;
  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  std::string name(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    known_.emplace_back(key);
    const auto it = obj_.find(std::string(key));
    if (it == obj_.end()) return nullptr;
    return &*it;
  }

  void number(std::string_view key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_number())
        out = v->get<double>();
      else
        issues_.push_back(name(key) + " must be a number");
    }
  }

  void optional_number(std::string_view key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null())
        out.reset();
      else if (v->is_number())
        out = v->get<double>();
      else
        issues_.push_back(name(key) + " must be a number or null");
    }
  }

  void count(std::string_view key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (v->is_number_unsigned())
        out = v->get<std::size_t>();
      else
        issues_.push_back(name(key) + " must be a non-negative integer");
    }
  }

  void string(std::string_view key, std::string& out) {
    if (const json* v = find(key)) {
      if (v->is_string())
        out = v->get<std::string>();
      else
        issues_.push_back(name(key) + " must be a string");
    }
  }

  template <class E>
  void choice(std::string_view key, E& out, std::initializer_list<std::pair<std::string_view, E>> options) {
    const json* v = find(key);
    if (!v) return;
    if (v->is_string()) {
      const auto s = v->get<std::string>();
      for (const auto& [label, value] : options) {
        if (s == label) {
          out = value;
          return;
        }
      }
    }
    std::string allowed;
    for (const auto& [label, value] : options) {
      if (!allowed.empty()) allowed += ", ";
      allowed += "\"" + std::string(label) + "\"";
    }
    issues_.push_back(name(key) + " must be one of " + allowed);
  }

  // Returns the nested object, or nullptr (with an issue if of the wrong type).
  const json* object(std::string_view key) {
    const json* v = find(key);
    if (v && !v->is_object()) {
      issues_.push_back(name(key) + " must be an object");
      return nullptr;
    }
    return v;
  }

  void reject_unknown() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (std::find(known_.begin(), known_.end(), it.key()) != known_.end()) continue;
      std::string msg = "unknown key \"" + name(it.key()) + "\"";
      const std::string hint = suggest_key(it.key(), known_);
      if (!hint.empty()) msg += " (did you mean \"" + name(hint) + "\"?)";
      issues_.push_back(msg);
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::vector<std::string> known_;
};

void read_physical(const json& j, PhysicalParams& p, std::vector<std::string>& issues) {
  ObjectReader r(j, "physical", issues);
  r.number("m", p.m);
  r.number("omega_t", p.omega_t);
  r.number("g13", p.g13);
  r.number("N", p.N);
  r.number("Delta", p.Delta);
  r.number("Omega23", p.Omega23);
  r.choice("delta_mode", p.delta_mode,
           {{"offset", DetuningMode::Offset}, {"absolute", DetuningMode::Absolute}});
  r.number("delta", p.delta);
  r.number("lambda", p.lambda);
  r.optional_number("lambda_pump", p.lambda_pump);
  r.choice("geometry", p.geometry,
           {{"counter-propagating", Geometry::CounterPropagating},
            {"co-propagating", Geometry::CoPropagating}});
  r.number("kappa", p.kappa);
  r.number("c", p.c);
  if (const json* cal = r.object("calibration")) {
    ObjectReader rc(*cal, "physical.calibration", issues);
    rc.choice("mode", p.calibration.mode,
              {{"fixed", KappaMode::Fixed}, {"match-estimate", KappaMode::MatchEstimate}});
    rc.choice("interpretation", p.calibration.interpretation,
              {{"peak", RabiInterpretation::Peak},
               {"integral-over-width", RabiInterpretation::IntegralOverWidth},
               {"traveling-wave", RabiInterpretation::TravelingWave}});
    rc.number("target_Omega23", p.calibration.target_Omega23);
    rc.reject_unknown();
  }
  r.reject_unknown();
}

void read_grid(const json& j, Grid& g, std::vector<std::string>& issues) {
  ObjectReader r(j, "grid", issues);
  r.number("x_min", g.x_min);
  r.number("x_max", g.x_max);
  r.count("n_x", g.n_x);
  r.reject_unknown();
}

void read_detector(const json& j, DetectorSpec& d, std::vector<std::string>& issues) {
  ObjectReader r(j, "detector", issues);
  r.number("x1", d.x1);
  r.number("x2", d.x2);
  r.number("probe_window", d.probe_window);
  r.reject_unknown();
}

constexpr std::pair<std::string_view, GaugeKind> kGaugeNames[] = {
    {"light-shift", GaugeKind::LightShift},
    {"zero", GaugeKind::Zero},
    {"resonance", GaugeKind::Resonance},
    {"probe-carrier", GaugeKind::ProbeCarrier},
};

void read_evolution(const json& j, EvolutionConfig& e, std::vector<std::string>& issues) {
  ObjectReader r(j, "evolution", issues);
  r.number("dt", e.dt);
  r.number("t_final", e.t_final);
  if (const json* g = r.find("gauge")) {
    bool ok = false;
    if (g->is_number()) {
      e.gauge = Gauge::custom(g->get<double>());
      ok = true;
    } else if (g->is_string()) {
      for (const auto& [label, kind] : kGaugeNames) {
        if (g->get<std::string>() == label) {
          e.gauge = Gauge{kind, 0.0};
          ok = true;
        }
      }
    }
    if (!ok)
      issues.push_back(
          "evolution.gauge must be a number (rad/s) or one of \"light-shift\", \"zero\", "
          "\"resonance\", \"probe-carrier\"");
  }
  r.count("snapshot_stride", e.snapshot_stride);
  r.choice("derivative_scheme", e.derivative_scheme,
           {{"spectral", DerivativeScheme::Spectral}, {"fd4", DerivativeScheme::FiniteDifference4}});
  r.reject_unknown();
}

void read_complex(ObjectReader& r, std::string_view key, std::complex<double>& out,
                  std::vector<std::string>& issues) {
  const json* v = r.find(key);
  if (!v) return;
  if (v->is_number()) {
    out = {v->get<double>(), 0.0};
  } else if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  } else {
    issues.push_back(r.name(key) + " must be a number or a [re, im] pair");
  }
}

void read_optical(const json& j, OpticalStateSpec& spec, std::vector<std::string>& issues) {
  ObjectReader r(j, "optical_state", issues);
  std::string kind = "fock";
  r.string("kind", kind);
  if (kind == "fock") {
    FockState s;
    std::size_t n = 1;
    r.count("n", n);
    if (n > 1'000'000)
      issues.push_back("optical_state.n must be <= 1000000");
    else
      s.n = static_cast<unsigned>(n);
    spec = s;
  } else if (kind == "coherent") {
    CoherentState s{{1.0, 0.0}};
    read_complex(r, "alpha", s.alpha, issues);
    spec = s;
  } else if (kind == "squeezed-coherent") {
    SqueezedCoherentState s;
    read_complex(r, "alpha", s.alpha, issues);
    r.number("r", s.r);
    r.number("theta", s.theta);
    spec = s;
  } else if (kind == "moments") {
    DirectMoments s{1.0, 0.0};
    r.number("n_bar", s.n_bar);
    r.number("bdag2b2", s.bdag2b2);
    spec = s;
  } else {
    issues.push_back(
        "optical_state.kind must be one of \"fock\", \"coherent\", \"squeezed-coherent\", "
        "\"moments\"");
    return;
  }
  r.reject_unknown();
}

void read_experiment(const json& j, ExperimentSpec& e, std::vector<std::string>& issues) {
  ObjectReader r(j, "experiment", issues);
  r.choice("mode", e.mode,
           {{"run", ExperimentMode::Run},
            {"sweep-delta", ExperimentMode::SweepDelta},
            {"sweep-rabi", ExperimentMode::SweepRabi}});
  const json* values = r.find("values");
  const json* range = r.object("range");
  if (values && range) issues.push_back("experiment.values and experiment.range are exclusive");
  if (values) {
    if (!values->is_array()) {
      issues.push_back("experiment.values must be an array of numbers");
    } else {
      e.values.clear();
      for (const json& v : *values) {
        if (!v.is_number()) {
          issues.push_back("experiment.values must be an array of numbers");
          break;
        }
        e.values.push_back(v.get<double>());
      }
    }
  } else if (range) {
    ObjectReader rr(*range, "experiment.range", issues);
    double start = 0, stop = 0, step = 0;
    const bool complete = rr.find("start") && rr.find("stop") && rr.find("step");
    rr.number("start", start);
    rr.number("stop", stop);
    rr.number("step", step);
    rr.reject_unknown();
    if (!complete) {
      issues.push_back("experiment.range needs start, stop and step");
    } else if (!(step > 0) || !(stop >= start) || (stop - start) / step > 1e5) {
      issues.push_back("experiment.range must have step > 0, stop >= start and at most 1e5 points");
    } else {
      e.values.clear();
      const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
      for (std::size_t i = 0; i <= n; ++i) e.values.push_back(start + static_cast<double>(i) * step);
    }
  }
  r.optional_number("exclude_before", e.exclude_before);
  r.reject_unknown();

  if (e.mode == ExperimentMode::Run && !e.values.empty())
    issues.push_back("experiment.values is only meaningful for sweep modes");
  if (e.mode != ExperimentMode::Run && e.values.empty())
    issues.push_back("experiment.values (or experiment.range) is required for sweep modes");
}

void read_output(const json& j, OutputSpec& o, std::vector<std::string>& issues) {
  ObjectReader r(j, "output", issues);
  r.string("directory", o.directory);
  if (const json* f = r.find("formats")) {
    bool ok = f->is_array();
    std::vector<std::string> formats;
    if (ok) {
      for (const json& v : *f) {
        if (!v.is_string() || (v != "csv" && v != "svg")) {
          ok = false;
          break;
        }
        formats.push_back(v.get<std::string>());
      }
    }
    if (ok)
      o.formats = std::move(formats);
    else
      issues.push_back("output.formats must be an array drawn from \"csv\", \"svg\"");
  }
  r.reject_unknown();
}

void check_schema_version(const std::string& version, std::vector<std::string>& issues) {
  const std::string major = version.substr(0, version.find('.'));
  const std::string ours{kSchemaVersion.substr(0, kSchemaVersion.find('.'))};
  if (major != ours)
    issues.push_back("schema_version \"" + version + "\" is not supported (expected major version " +
                     ours + ")");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset to a 1-based line and column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << col << ": " << what;
    throw ValidationError(os.str());
  }
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json optical_json(const OpticalStateSpec& spec) {
  return std::visit(overloaded{
                        [](const FockState& s) { return json{{"kind", "fock"}, {"n", s.n}}; },
                        [](const CoherentState& s) {
                          return json{{"kind", "coherent"}, {"alpha", complex_json(s.alpha)}};
                        },
                        [](const SqueezedCoherentState& s) {
                          return json{{"kind", "squeezed-coherent"},
                                      {"alpha", complex_json(s.alpha)},
                                      {"r", s.r},
                                      {"theta", s.theta}};
                        },
                        [](const DirectMoments& s) {
                          return json{{"kind", "moments"}, {"n_bar", s.n_bar}, {"bdag2b2", s.bdag2b2}};
                        },
                    },
                    spec);
}

}  // namespace

bool OutputSpec::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

SweepSpec ConfigDocument::sweep_spec() const {
  SweepSpec s;
  s.base = scenario;
  s.parameter = experiment.mode == ExperimentMode::SweepRabi ? SweepParameter::Omega23
                                                             : SweepParameter::DeltaOffset;
  s.values = experiment.values;
  s.exclude_before = experiment.exclude_before;
  return s;
}

std::string suggest_key(std::string_view unknown, const std::vector<std::string>& known) {
  // Near-misses first, then shared prefixes, then looser edits.
  std::string best;
  std::size_t best_d = 3;
  for (const auto& k : known) {
    const std::size_t d = levenshtein(unknown, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (!best.empty()) return best;
  for (const auto& k : known) {
    const bool prefix = unknown.starts_with(k) || std::string_view(k).starts_with(unknown);
    if (prefix && k.size() > best.size()) best = k;
  }
  if (!best.empty()) return best;
  best_d = std::max<std::size_t>(2, unknown.size() / 3) + 1;
  for (const auto& k : known) {
    const std::size_t d = levenshtein(unknown, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

OpticalStateSpec parse_optical_state(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ValidationError("optical state must be a JSON object");
  std::vector<std::string> issues;
  OpticalStateSpec spec = FockState{1};
  read_optical(j, spec, issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  validate(spec);
  return spec;
}

ConfigDocument parse_config(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ValidationError("configuration must be a JSON object");

  ConfigDocument doc;
  std::vector<std::string> issues;
  ObjectReader r(j, "", issues);
  r.string("schema_version", doc.schema_version);
  check_schema_version(doc.schema_version, issues);
  r.string("label", doc.scenario.label);
  if (const json* v = r.object("physical")) read_physical(*v, doc.scenario.physical, issues);
  if (const json* v = r.object("grid")) read_grid(*v, doc.scenario.grid, issues);
  if (const json* v = r.object("detector")) read_detector(*v, doc.scenario.detector, issues);
  if (const json* v = r.object("evolution")) read_evolution(*v, doc.scenario.evolution, issues);
  if (const json* v = r.object("optical_state")) read_optical(*v, doc.scenario.optical_state, issues);
  if (const json* v = r.object("experiment"))
    read_experiment(*v, doc.experiment, issues);
  else if (!r.find("experiment"))
    issues.push_back("experiment block is required");
  if (const json* v = r.object("output")) read_output(*v, doc.output, issues);
  r.reject_unknown();

  try {
    doc.scenario.validate();
  } catch (const ValidationError& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }
  if (doc.experiment.mode != ExperimentMode::Run && !doc.experiment.values.empty()) {
    try {
      doc.sweep_spec().validate();
    } catch (const ValidationError& e) {
      // The scenario part was already reported above.
      for (const auto& issue : e.issues())
        if (std::find(issues.begin(), issues.end(), issue) == issues.end()) issues.push_back(issue);
    }
  }
  if (doc.experiment.exclude_before && !(*doc.experiment.exclude_before >= 0))
    issues.push_back("experiment.exclude_before must be >= 0");
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read configuration file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ValidationError& e) {
    std::vector<std::string> issues;
    for (const auto& issue : e.issues()) issues.push_back(path.string() + ": " + issue);
    throw ValidationError(std::move(issues));
  }
}

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::Run: return "run";
    case ExperimentMode::SweepDelta: return "sweep-delta";
    case ExperimentMode::SweepRabi: return "sweep-rabi";
  }
  return "run";
}

std::string_view to_string(GaugeKind kind) {
  for (const auto& [label, k] : kGaugeNames)
    if (k == kind) return label;
  return "custom";
}

std::string serialize_config(const ConfigDocument& doc) {
  const Scenario& s = doc.scenario;
  const PhysicalParams& p = s.physical;
  json physical{
      {"m", p.m},
      {"omega_t", p.omega_t},
      {"g13", p.g13},
      {"N", p.N},
      {"Delta", p.Delta},
      {"Omega23", p.Omega23},
      {"delta_mode", p.delta_mode == DetuningMode::Offset ? "offset" : "absolute"},
      {"delta", p.delta},
      {"lambda", p.lambda},
      {"lambda_pump", p.lambda_pump ? json(*p.lambda_pump) : json(nullptr)},
      {"geometry",
       p.geometry == Geometry::CounterPropagating ? "counter-propagating" : "co-propagating"},
      {"kappa", p.kappa},
      {"c", p.c},
  };
  const char* interp = "traveling-wave";
  if (p.calibration.interpretation == RabiInterpretation::Peak) interp = "peak";
  if (p.calibration.interpretation == RabiInterpretation::IntegralOverWidth)
    interp = "integral-over-width";
  physical["calibration"] = {
      {"mode", p.calibration.mode == KappaMode::Fixed ? "fixed" : "match-estimate"},
      {"interpretation", interp},
      {"target_Omega23", p.calibration.target_Omega23},
  };

  const EvolutionConfig& e = s.evolution;
  json gauge = e.gauge.kind == GaugeKind::Custom ? json(e.gauge.value) : json(to_string(e.gauge.kind));

  json experiment{{"mode", to_string(doc.experiment.mode)}};
  if (doc.experiment.mode != ExperimentMode::Run) experiment["values"] = doc.experiment.values;
  experiment["exclude_before"] =
      doc.experiment.exclude_before ? json(*doc.experiment.exclude_before) : json(nullptr);

  const json out{
      {"schema_version", doc.schema_version},
      {"label", s.label},
      {"physical", physical},
      {"grid", {{"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}, {"n_x", s.grid.n_x}}},
      {"detector",
       {{"x1", s.detector.x1}, {"x2", s.detector.x2}, {"probe_window", s.detector.probe_window}}},
      {"evolution",
       {{"dt", e.dt},
        {"t_final", e.t_final},
        {"gauge", gauge},
        {"snapshot_stride", e.snapshot_stride},
        {"derivative_scheme", e.derivative_scheme == DerivativeScheme::Spectral ? "spectral" : "fd4"}}},
      {"optical_state", optical_json(s.optical_state)},
      {"experiment", experiment},
      {"output", {{"directory", doc.output.directory}, {"formats", doc.output.formats}}},
  };
  return out.dump(2) + "\n";
}

}  // namespace squeezebeam
