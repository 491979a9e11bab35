#include <benchmark/benchmark.h>

#include <fockbarrier/exact_evolution.hpp>
#include <fockbarrier/hamiltonians.hpp>
#include <fockbarrier/twa.hpp>
#include <fockbarrier/wigner.hpp>

namespace fb = fockbarrier;

namespace {

const fb::HamiltonianSpec kKerr = fb::HamiltonianSpec::kerr(0.5, 0.01, 200);

void BM_Diagonalise(benchmark::State& state) {
  const auto spec = fb::HamiltonianSpec::kerr(0.5, 0.01, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fb::make_propagator(spec));
}
BENCHMARK(BM_Diagonalise)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const auto prop = fb::make_propagator(kKerr);
  const auto s0 = fb::displaced_fock(fb::amplitude_from_phase(-3, 2.395), 1, 200);
  double t = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(fb::evolve(prop, s0, t += 0.01));
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMicrosecond);

void BM_WignerTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const fb::PhaseGrid grid(-20, 20, n, -20, 20, n);
  const auto s0 = fb::displaced_fock(fb::amplitude_from_phase(-3, 2.395), 1, 200);
  for (auto _ : state) benchmark::DoNotOptimize(fb::wigner_from_state(s0, grid, 0.0, "bench"));
}
BENCHMARK(BM_WignerTransform)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_Negativity(benchmark::State& state) {
  const fb::PhaseGrid grid(-20, 20, 801, -20, 20, 801);
  const auto w = fb::wigner_from_state(fb::displaced_fock(fb::amplitude_from_phase(-3, 2.395), 1, 200),
                                       grid, 0.0, "bench");
  for (auto _ : state) benchmark::DoNotOptimize(fb::negativity(w));
}
BENCHMARK(BM_Negativity)->Unit(benchmark::kMillisecond);

void BM_PropagateEnsemble(benchmark::State& state) {
  const auto sampler = fb::SamplerSpec::for_fock(1, fb::amplitude_from_phase(-3, 2.395), 10000);
  const auto ens = fb::sample_initial(sampler, kKerr, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fb::propagate(ens, 3.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ens.size()));
}
BENCHMARK(BM_PropagateEnsemble)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
