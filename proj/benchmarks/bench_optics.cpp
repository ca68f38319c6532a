#include <benchmark/benchmark.h>

#include "squeezebeam/optics.hpp"

namespace sb = squeezebeam;

namespace {

void BM_ClosedFormMoments(benchmark::State& state) {
  const sb::OpticalStateSpec spec = sb::SqueezedCoherentState{{1.5, 0.5}, 0.6, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(sb::optical_moments(spec));
}
BENCHMARK(BM_ClosedFormMoments);

void BM_TruncatedFockOracle(benchmark::State& state) {
  const sb::OpticalStateSpec spec = sb::SqueezedCoherentState{{1.5, 0.5}, 0.6, 0.3};
  const auto dim = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sb::truncated_fock_moments(spec, dim));
}
BENCHMARK(BM_TruncatedFockOracle)->Arg(60)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);

}  // namespace
