#include <benchmark/benchmark.h>

#include "willmore/backlund.hpp"
#include "willmore/gallery.hpp"
#include "willmore/parallel.hpp"
#include "willmore/sequence.hpp"

using namespace willmore;

namespace {

SurfaceChart make(const char* name, int res) {
  SurfaceSpec spec;
  spec.name = name;
  spec.resolution = res;
  return make_surface(spec);
}

void BM_SurfaceChart(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(make("clifford-torus-inverted", static_cast<int>(state.range(0))));
  set_thread_count(1);
}
BENCHMARK(BM_SurfaceChart)->ArgsProduct({{64, 128, 256}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_WillmoreEnergy(benchmark::State& state) {
  const SurfaceChart s = make("clifford-torus-inverted", static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(willmore_energy(s));
}
BENCHMARK(BM_WillmoreEnergy)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ForwardTransform(benchmark::State& state) {
  const SurfaceChart s = make("clifford-torus-inverted", static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(backlund_forward(s));
}
BENCHMARK(BM_ForwardTransform)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OneStep(benchmark::State& state) {
  const SurfaceChart s = make("clifford-torus-inverted", static_cast<int>(state.range(0)));
  const AffineFrame frame = choose_frame(s);
  for (auto _ : state) benchmark::DoNotOptimize(one_step(s, frame));
}
BENCHMARK(BM_OneStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Sequence(benchmark::State& state) {
  const SurfaceChart s = make("clifford-torus", static_cast<int>(state.range(0)));
  SequenceOptions o;
  o.max_steps = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_sequence(s, o));
}
BENCHMARK(BM_Sequence)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
