#include "squeezebeam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "squeezebeam/error.hpp"

namespace squeezebeam {

void Scenario::validate() const {
  std::vector<std::string> issues;
  auto collect = [&](auto&& check) {
    try {
      check();
    } catch (const ValidationError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
  };
  collect([&] { physical.validate(); });
  collect([&] { grid.validate(); });
  collect([&] { detector.validate(grid); });
  collect([&] { evolution.validate(); });
  collect([&] { squeezebeam::validate(optical_state); });
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ScenarioResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const OpticalMoments moments = optical_moments(scenario.optical_state);
  if (!(moments.n_bar > 0))
    throw ValidationError("optical_state: vacuum input has no normalized statistics");
  const Model model(scenario.physical, scenario.grid, scenario.detector);

  ScenarioResult out;
  out.label = scenario.label;
  out.moments = moments;
  out.kappa = model.kappa();
  out.leave_time = model.leave_time();
  out.resonance = model.resonance();
  out.trajectory = evolve(model, scenario.evolution);
  if (!out.trajectory.ok())
    throw NumericalError("scenario '" + scenario.label + "': " + *out.trajectory.error);

  out.warnings = out.trajectory.warnings;
  bool warned_excess = false;
  out.min_commutator_residual = 1.0;
  std::size_t next_step = 0;
  const auto& steps = out.trajectory.steps;
  for (const ModePairState& snap : out.trajectory.snapshots) {
    TimePoint tp;
    tp.t = snap.t;
    const double N_g = detector_fraction(snap.g_tilde, scenario.detector);
    tp.stats = beam_statistics(N_g, moments);
    tp.attenuation = attenuation_factor(snap);
    tp.detector_current = detector_current(snap, model, scenario.detector.x1);
    // Steps with t up to this snapshot (with rounding slack).
    while (next_step < steps.size() && steps[next_step].t <= snap.t * (1 + 1e-12)) {
      tp.flux_residual = std::max(tp.flux_residual, steps[next_step].flux_residual);
      ++next_step;
    }
    out.min_commutator_residual =
        std::min(out.min_commutator_residual, commutator_residual(snap, model).min());
    if (!warned_excess) {
      const std::string w = detector_fraction_warning(N_g, snap.t);
      if (!w.empty()) {
        out.warnings.push_back(w);
        warned_excess = true;
      }
    }
    out.series.push_back(tp);
  }
  if (out.min_commutator_residual < -1e-8) {
    std::ostringstream os;
    os << "commutator residual reached " << out.min_commutator_residual;
    out.warnings.push_back(os.str());
  }

  out.final_densities = densities(out.trajectory.snapshots.back(), moments);
  out.condensate_density.resize(model.phi0().size());
  for (std::size_t j = 0; j < model.phi0().size(); ++j)
    out.condensate_density[j] = std::norm(model.phi0()[j]);
  return out;
}

MinimumVFock min_vfock_over_time(const std::vector<TimePoint>& series, double exclude_before) {
  if (series.empty()) throw ValidationError("cannot take the minimum of an empty time series");
  std::optional<MinimumVFock> best;
  for (const TimePoint& tp : series) {
    if (tp.t < exclude_before) continue;
    if (!best || tp.stats.v_fock < best->value) best = MinimumVFock{tp.stats.v_fock, tp.t};
  }
  if (!best) {
    std::ostringstream os;
    os << "no time points at or after the exclusion window t = " << exclude_before << " s";
    throw ValidationError(os.str());
  }
  return *best;
}

void SweepSpec::validate() const {
  base.validate();
  if (values.empty()) throw ValidationError("experiment.values must not be empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw ValidationError("experiment.values must be finite");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw ValidationError("experiment.values must be strictly increasing");
  }
  if (parameter == SweepParameter::DeltaOffset && base.physical.delta_mode != DetuningMode::Offset)
    throw ValidationError("delta sweeps require physical.delta_mode = \"offset\"");
  if (parameter == SweepParameter::Omega23 && !(values.front() > 0))
    throw ValidationError("experiment.values must be > 0 for an Omega23 sweep");
  if (exclude_before && !(*exclude_before >= 0))
    throw ValidationError("experiment.exclude_before must be >= 0");
}

Scenario sweep_point(const SweepSpec& spec, double value) {
  Scenario s = spec.base;
  std::ostringstream label;
  label.precision(17);
  switch (spec.parameter) {
    case SweepParameter::DeltaOffset:
      s.physical.delta = value;
      label << spec.base.label << "/delta=" << value;
      break;
    case SweepParameter::Omega23:
      s.physical.Omega23 = value;
      label << spec.base.label << "/Omega23=" << value;
      break;
  }
  s.label = label.str();
  return s;
}

SweepRecord reduce(const ScenarioResult& result, double value, std::optional<double> exclude_before) {
  SweepRecord r;
  r.value = value;
  const MinimumVFock m =
      min_vfock_over_time(result.series, exclude_before.value_or(0.5 * result.leave_time));
  r.min_vfock = m.value;
  r.t_min = m.t;
  r.final_N_g = result.series.back().stats.N_g;
  r.attenuation = result.series.back().attenuation;
  return r;
}

SweepResult sweep(const SweepSpec& spec, std::size_t workers) {
  spec.validate();
  const std::size_t n = spec.values.size();
  SweepResult result;
  result.parameter = spec.parameter;
  result.records.resize(n);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const double value = spec.values[i];
      try {
        result.records[i] = reduce(run_scenario(sweep_point(spec, value)), value, spec.exclude_before);
      } catch (const std::exception& e) {
        SweepRecord failed;
        failed.value = value;
        failed.min_vfock = std::nan("");
        failed.t_min = std::nan("");
        failed.final_N_g = std::nan("");
        failed.attenuation = std::nan("");
        failed.error = e.what();
        result.records[i] = std::move(failed);
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, n);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const SweepRecord& r = result.records[i];
    if (r.error) continue;
    if (!result.argmin || r.min_vfock < result.records[*result.argmin].min_vfock) result.argmin = i;
  }
  return result;
}

}  // namespace squeezebeam
