#include <benchmark/benchmark.h>

#include "squeezebeam/dynamics.hpp"
#include "squeezebeam/kinetic.hpp"
#include "squeezebeam/model.hpp"

namespace sb = squeezebeam;

namespace {

sb::Model model_for(std::size_t n_x) {
  sb::Grid grid;
  grid.n_x = n_x;
  return sb::Model(sb::PhysicalParams{}, grid);
}

// A state some way into the run, so the probe sees a populated beam. Grids
// stay at or below 4096 points, where dt = 1e-7 is stable.
sb::ModePairState warmed_state(const sb::Model& model, const sb::EvolutionConfig& cfg, sb::KineticOperator& kin) {
  sb::ModePairState s = sb::initial_state(model, cfg.gauge);
  for (int i = 0; i < 200; ++i) s = sb::rk4_time_step(s, model, cfg, kin);
  return s;
}

void BM_KineticApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sb::Model model = model_for(n);
  auto kin = sb::make_kinetic(model, static_cast<sb::DerivativeScheme>(state.range(1)));
  std::vector<sb::cdouble> f(n, sb::cdouble(1.0, 0.5));
  for (std::size_t j = 0; j < n; ++j) f[j] *= std::polar(1.0, 0.01 * static_cast<double>(j));
  std::vector<sb::cdouble> out(n);
  for (auto _ : state) {
    kin.apply(f, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_KineticApply)
    ->ArgsProduct({{1024, 2048, 4096},
                   {static_cast<int>(sb::DerivativeScheme::Spectral),
                    static_cast<int>(sb::DerivativeScheme::FiniteDifference4)}});

void BM_ProbeSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sb::Model model = model_for(n);
  sb::EvolutionConfig cfg;
  auto kin = sb::make_kinetic(model, cfg.derivative_scheme);
  const sb::ModePairState s = warmed_state(model, cfg, kin);
  for (auto _ : state) {
    auto p = sb::solve_probe_envelope(s.g_tilde, model, cfg.gauge, s.t);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ProbeSolve)->Arg(1024)->Arg(2048)->Arg(4096);

void BM_Rk4Step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sb::Model model = model_for(n);
  sb::EvolutionConfig cfg;
  auto kin = sb::make_kinetic(model, cfg.derivative_scheme);
  sb::ModePairState s = warmed_state(model, cfg, kin);
  for (auto _ : state) {
    s = sb::rk4_time_step(s, model, cfg, kin);
    benchmark::DoNotOptimize(s.g_tilde);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Rk4Step)->Arg(1024)->Arg(2048)->Arg(4096);

}  // namespace
