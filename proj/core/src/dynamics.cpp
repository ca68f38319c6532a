#include "squeezebeam/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "squeezebeam/error.hpp"

namespace squeezebeam {

namespace {

constexpr cdouble I{0.0, 1.0};
constexpr std::size_t kMaxSteps = 100'000'000;
constexpr std::size_t kMaxSnapshots = 200;
constexpr double kProbeErrorTolerance = 1e-8;

// P' = (i/c)(U P + S), P(x_0) = p_in, classical RK4 with step `stride * dx`.
// With stride 1 the half-step source is cubic-interpolated; with stride 2
// the intermediate node is used directly (step-doubling reference).
void integrate_probe(std::span<const cdouble> source, const Model& model, std::size_t stride,
                     std::span<cdouble> out) {
  const std::size_t n = source.size();
  const double h = model.grid().dx() * static_cast<double>(stride);
  const cdouble scale = I / model.params().c;
  const auto u = model.potential();
  const auto u_mid = model.potential_mid();

  auto f = [&](double pot, cdouble s, cdouble p) { return scale * (pot * p + s); };
  auto mid_source = [&](std::size_t j) -> cdouble {
    if (j == 0)
      return 0.3125 * source[0] + 0.9375 * source[1] - 0.3125 * source[2] + 0.0625 * source[3];
    if (j + 2 >= n)
      return 0.3125 * source[n - 1] + 0.9375 * source[n - 2] - 0.3125 * source[n - 3] +
             0.0625 * source[n - 4];
    return (-source[j - 1] + 9.0 * source[j] + 9.0 * source[j + 1] - source[j + 2]) / 16.0;
  };

  cdouble p = model.probe_amplitude();
  out[0] = p;
  for (std::size_t j = 0; j + stride < n; j += stride) {
    const std::size_t next = j + stride;
    double pot_mid;
    cdouble s_mid;
    if (stride == 1) {
      pot_mid = u_mid[j];
      s_mid = mid_source(j);
    } else {
      pot_mid = u[j + stride / 2];
      s_mid = source[j + stride / 2];
    }
    const cdouble k1 = f(u[j], source[j], p);
    const cdouble k2 = f(pot_mid, s_mid, p + 0.5 * h * k1);
    const cdouble k3 = f(pot_mid, s_mid, p + 0.5 * h * k2);
    const cdouble k4 = f(u[next], source[next], p + h * k3);
    p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    for (std::size_t k = j + 1; k <= next; ++k) out[k] = p;
  }
}

// The classical RK4 step for the linear equation P' = a(x) P + s(x) is affine
// in P: P_{j+1} = A_j P_j + sum_k c_{j,k} G_{b_j + k}, with the source
// s = (i/c) Omega_C G and its half-step value from a 4-point cubic stencil.
// Coefficients depend only on the model, so they are built once.
class ProbePropagator {
 public:
  explicit ProbePropagator(const Model& model) : p_in_(model.probe_amplitude()) {
    const std::size_t n = model.grid().n_x;
    const double h = model.grid().dx();
    const cdouble ic = I / model.params().c;
    const auto u = model.potential();
    const auto u_mid = model.potential_mid();
    const auto omega = model.coupling();
    steps_.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const cdouble a1 = ic * u[j], am = ic * u_mid[j], a4 = ic * u[j + 1];
      // Coefficients of P, s1, sm, s4 in each stage.
      const cdouble k1p = a1;
      const cdouble k2p = am * (1.0 + 0.5 * h * k1p), k2s1 = am * 0.5 * h;
      const cdouble k3p = am * (1.0 + 0.5 * h * k2p), k3s1 = am * 0.5 * h * k2s1,
                    k3sm = am * 0.5 * h + 1.0;
      const cdouble k4p = a4 * (1.0 + h * k3p), k4s1 = a4 * h * k3s1, k4sm = a4 * h * k3sm;
      Step& st = steps_[j];
      st.a = 1.0 + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      const cdouble w1 = h / 6.0 * (1.0 + 2.0 * k2s1 + 2.0 * k3s1 + k4s1);
      const cdouble wm = h / 6.0 * (2.0 + 2.0 * k3sm + k4sm);
      const cdouble w4 = h / 6.0;

      // Half-step interpolation stencil and the positions of nodes j, j+1 in it.
      double stencil[4];
      std::size_t here, next;
      if (j == 0) {
        st.base = 0;
        stencil[0] = 0.3125, stencil[1] = 0.9375, stencil[2] = -0.3125, stencil[3] = 0.0625;
        here = 0, next = 1;
      } else if (j + 2 >= n) {
        st.base = n - 4;
        stencil[0] = 0.0625, stencil[1] = -0.3125, stencil[2] = 0.9375, stencil[3] = 0.3125;
        here = 2, next = 3;
      } else {
        st.base = j - 1;
        stencil[0] = -0.0625, stencil[1] = 0.5625, stencil[2] = 0.5625, stencil[3] = -0.0625;
        here = 1, next = 2;
      }
      for (std::size_t k = 0; k < 4; ++k) {
        cdouble w = wm * stencil[k];
        if (k == here) w += w1;
        if (k == next) w += w4;
        st.c[k] = ic * w * omega[st.base + k];
      }
    }
  }

  void solve(std::span<const cdouble> g, std::span<cdouble> out) const {
    cdouble p = p_in_;
    out[0] = p;
    for (std::size_t j = 0; j < steps_.size(); ++j) {
      const Step& st = steps_[j];
      const cdouble* gb = g.data() + st.base;
      p = st.a * p + (st.c[0] * gb[0] + st.c[1] * gb[1] + st.c[2] * gb[2] + st.c[3] * gb[3]);
      out[j + 1] = p;
    }
  }

 private:
  struct Step {
    cdouble a;
    cdouble c[4];
    std::size_t base;
  };
  double p_in_;
  std::vector<Step> steps_;
};

// RK4 for the carrier-frame pair (G, P):
//   dG/dt = -i (T - Delta_a) G + i Omega_C P[G]
// where P[G] is the quasi-static probe. Delta_a = delta - atomic energy.
class CarrierStepper {
 public:
  CarrierStepper(const Model& model, KineticOperator& kinetic)
      : model_(model), kinetic_(kinetic), probe_solver_(model), detuning_(model.probe_detuning()) {
    const std::size_t n = model.grid().n_x;
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &stage_, &probe_, &work_}) v->resize(n);
  }

  // g, p in/out; p must be consistent with g on entry and is on exit.
  void step(std::vector<cdouble>& g, std::vector<cdouble>& p, double dt) {
    const std::size_t n = g.size();
    rhs(g, p, k1_);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = g[j] + 0.5 * dt * k1_[j];
    probe_solver_.solve(stage_, probe_);
    rhs(stage_, probe_, k2_);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = g[j] + 0.5 * dt * k2_[j];
    probe_solver_.solve(stage_, probe_);
    rhs(stage_, probe_, k3_);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = g[j] + dt * k3_[j];
    probe_solver_.solve(stage_, probe_);
    rhs(stage_, probe_, k4_);
    for (std::size_t j = 0; j < n; ++j)
      g[j] += dt / 6.0 * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    probe_solver_.solve(g, p);
  }

 private:
  void rhs(std::span<const cdouble> g, std::span<const cdouble> p, std::vector<cdouble>& out) {
    kinetic_.apply(g, work_);
    const auto omega = model_.coupling();
    for (std::size_t j = 0; j < g.size(); ++j)
      out[j] = -I * (work_[j] - detuning_ * g[j]) + I * (omega[j] * p[j]);
  }

  const Model& model_;
  KineticOperator& kinetic_;
  ProbePropagator probe_solver_;
  double detuning_;
  std::vector<cdouble> k1_, k2_, k3_, k4_, stage_, probe_, work_;
};

cdouble frame_phase(const Model& model, Gauge gauge, double t) {
  return std::polar(1.0, -model.carrier_frequency(gauge) * t);
}

double atom_norm(std::span<const cdouble> g, double dx) {
  double s = 0;
  for (const auto& z : g) s += std::norm(z);
  return s * dx;
}

bool touches_boundary(std::span<const cdouble> g) {
  constexpr std::size_t kEdge = 5;
  double peak = 0;
  for (const auto& z : g) peak = std::max(peak, std::norm(z));
  if (peak == 0 || g.size() < 2 * kEdge) return false;
  for (std::size_t j = 0; j < kEdge; ++j) {
    if (std::norm(g[j]) > 1e-6 * peak || std::norm(g[g.size() - 1 - j]) > 1e-6 * peak)
      return true;
  }
  return false;
}

}  // namespace

void EvolutionConfig::validate() const {
  std::vector<std::string> issues;
  if (!(std::isfinite(dt) && dt > 0)) issues.push_back("evolution.dt must be positive");
  if (!(std::isfinite(t_final) && t_final >= dt))
    issues.push_back("evolution.t_final must be at least evolution.dt");
  if (gauge.kind == GaugeKind::Custom && !std::isfinite(gauge.value))
    issues.push_back("evolution.gauge must be finite");
  if (issues.empty() && t_final / dt > static_cast<double>(kMaxSteps))
    issues.push_back("evolution.t_final / evolution.dt exceeds 1e8 steps");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::size_t EvolutionConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_final / dt));
}

std::size_t EvolutionConfig::effective_stride() const {
  if (snapshot_stride > 0) return snapshot_stride;
  const std::size_t steps = step_count();
  return std::max<std::size_t>(1, (steps + kMaxSnapshots - 1) / kMaxSnapshots);
}

double Trajectory::max_flux_residual() const noexcept {
  double r = 0;
  for (const auto& s : steps) r = std::max(r, s.flux_residual);
  return r;
}

KineticOperator make_kinetic(const Model& model, DerivativeScheme scheme) {
  return KineticOperator(model.grid(), model.hbar_over_m(), model.recoil_velocity(), scheme);
}

ComplexField atomic_rhs(const ModePairState& state, const Model& model, Gauge gauge,
                        KineticOperator& kinetic) {
  const std::size_t n = model.grid().n_x;
  if (state.g_tilde.size() != n || state.p_tilde.size() != n)
    throw ValidationError("atomic_rhs: fields do not match the model grid");
  ComplexField out(model.grid());
  kinetic.apply(state.g_tilde.values(), out.values());
  const double offset = model.atom_offset(gauge);
  const auto omega = model.coupling();
  for (std::size_t j = 0; j < n; ++j)
    out[j] = -I * (out[j] + offset * state.g_tilde[j]) + I * (omega[j] * state.p_tilde[j]);
  if (!out.all_finite()) throw NumericalError("atomic_rhs produced non-finite values");
  return out;
}

ComplexField solve_probe_envelope(const ComplexField& g_tilde, const Model& model, Gauge gauge,
                                  double t) {
  if (g_tilde.size() != model.grid().n_x)
    throw ValidationError("solve_probe_envelope: field does not match the model grid");
  if (!g_tilde.all_finite()) throw NumericalError("solve_probe_envelope: non-finite atomic field");
  // Undo the frame rotation of g, solve in the carrier frame, rotate back.
  const cdouble to_frame = frame_phase(model, gauge, t);
  std::vector<cdouble> g(g_tilde.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = g_tilde[j] / to_frame;
  ComplexField p(model.grid());
  ProbePropagator(model).solve(g, p.values());
  for (auto& z : p.values()) z *= to_frame;
  return p;
}

double probe_step_error(const ComplexField& g_tilde, const Model& model) {
  const std::size_t n = g_tilde.size();
  std::vector<cdouble> source(n);
  const auto omega = model.coupling();
  for (std::size_t j = 0; j < n; ++j) source[j] = omega[j] * g_tilde[j];
  std::vector<cdouble> fine(n), coarse(n);
  integrate_probe(source, model, 1, fine);
  integrate_probe(source, model, 2, coarse);
  const std::size_t last = 2 * ((n - 1) / 2);
  return std::abs(fine[last] - coarse[last]) / 15.0 / model.probe_amplitude();
}

ModePairState initial_state(const Model& model, Gauge gauge) {
  ModePairState s;
  s.t = 0.0;
  s.g_tilde = ComplexField(model.grid());
  s.p_tilde = solve_probe_envelope(s.g_tilde, model, gauge, 0.0);
  return s;
}

ModePairState rk4_time_step(const ModePairState& state, const Model& model,
                            const EvolutionConfig& config, KineticOperator& kinetic) {
  if (!state.g_tilde.all_finite() || !state.p_tilde.all_finite())
    throw NumericalError("rk4_time_step: non-finite input state");
  const Gauge gauge = config.gauge;
  const cdouble into_carrier = 1.0 / frame_phase(model, gauge, state.t);
  const std::size_t n = model.grid().n_x;
  std::vector<cdouble> g(n), p(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = state.g_tilde[j] * into_carrier;
  CarrierStepper stepper(model, kinetic);
  ProbePropagator(model).solve(g, p);
  stepper.step(g, p, config.dt);

  ModePairState next;
  next.t = state.t + config.dt;
  const cdouble out_phase = frame_phase(model, gauge, next.t);
  next.g_tilde = ComplexField(model.grid());
  next.p_tilde = ComplexField(model.grid());
  for (std::size_t j = 0; j < n; ++j) {
    next.g_tilde[j] = g[j] * out_phase;
    next.p_tilde[j] = p[j] * out_phase;
  }
  if (!next.g_tilde.all_finite()) throw NumericalError("rk4_time_step produced non-finite values");
  return next;
}

Trajectory evolve(const Model& model, const EvolutionConfig& config) {
  config.validate();
  const std::size_t steps = config.step_count();
  const std::size_t stride = config.effective_stride();
  const std::size_t n = model.grid().n_x;
  const double dx = model.grid().dx();
  const double dt = config.dt;
  const double c = model.params().c;
  const double inflow = model.probe_flux();

  Trajectory traj;
  traj.warnings = model.warnings();
  traj.steps.reserve(steps);

  KineticOperator kinetic = make_kinetic(model, config.derivative_scheme);
  CarrierStepper stepper(model, kinetic);

  std::vector<cdouble> g(n, cdouble{});
  std::vector<cdouble> p(n);
  ProbePropagator(model).solve(g, p);

  bool warned_boundary = false;
  bool warned_probe = false;
  auto snapshot = [&](double t) {
    const cdouble phase = frame_phase(model, config.gauge, t);
    ModePairState s;
    s.t = t;
    s.g_tilde = ComplexField(model.grid());
    s.p_tilde = ComplexField(model.grid());
    for (std::size_t j = 0; j < n; ++j) {
      s.g_tilde[j] = g[j] * phase;
      s.p_tilde[j] = p[j] * phase;
    }
    if (!warned_boundary && touches_boundary(g)) {
      std::ostringstream os;
      os << "atomic density reached the grid boundary at t = " << t << " s";
      traj.warnings.push_back(os.str());
      warned_boundary = true;
    }
    if (!warned_probe) {
      const double err = probe_step_error(ComplexField(model.grid(), g), model);
      if (err > kProbeErrorTolerance) {
        std::ostringstream os;
        os << "probe envelope step-size error estimate " << err << " exceeds "
           << kProbeErrorTolerance << " at t = " << t << " s";
        traj.warnings.push_back(os.str());
        warned_probe = true;
      }
    }
    traj.snapshots.push_back(std::move(s));
  };

  snapshot(0.0);
  double norm_prev = 0.0;
  double flux_prev = c * (std::norm(p.front()) - std::norm(p.back()));

  for (std::size_t step = 1; step <= steps; ++step) {
    stepper.step(g, p, dt);
    const double t = static_cast<double>(step) * dt;
    const double norm = atom_norm(g, dx);
    if (!std::isfinite(norm)) {
      std::ostringstream os;
      os << "non-finite atomic field at step " << step << " (t = " << t << " s)";
      traj.error = os.str();
      return traj;
    }
    const double flux = c * (std::norm(p.front()) - std::norm(p.back()));
    StepRecord rec;
    rec.t = t;
    rec.atom_norm = norm;
    rec.probe_left = std::norm(p.front());
    rec.probe_right = std::norm(p.back());
    rec.flux_residual = std::abs((norm - norm_prev) - 0.5 * dt * (flux + flux_prev)) /
                        (norm + dt * inflow);
    traj.steps.push_back(rec);
    norm_prev = norm;
    flux_prev = flux;

    if (step % stride == 0 || step == steps) snapshot(t);
  }
  return traj;
}

}  // namespace squeezebeam
