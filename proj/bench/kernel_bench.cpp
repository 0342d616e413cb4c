// Serial reference vs OpenMP kernels on the same inputs. Thread count for the
// parallel rows is the benchmark argument; 0 means the OpenMP default.

#include <benchmark/benchmark.h>

#include <vector>

#include "wavefuse/app/scene.hpp"
#include "wavefuse/fusion.hpp"
#include "wavefuse/reference.hpp"
#include "wavefuse/wavelet.hpp"

namespace {

using namespace wavefuse;

constexpr int kSide = 1024;

const app::Scene& scene() {
  static const app::Scene s = app::synth_scene(kSide, kSide, 3, 42);
  return s;
}

void set_pixels(benchmark::State& state) {
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kSide) * kSide);
}

template <WaveletKind Kind>
void BM_dwt2d_reference(benchmark::State& state) {
  const auto& pan = scene().pan;
  const std::vector<float> in(pan.samples().begin(), pan.samples().end());
  for (auto _ : state) {
    auto c = reference::dwt2d_forward(in, kSide, kSide, Kind);
    benchmark::DoNotOptimize(reference::dwt2d_inverse(c, kSide, kSide, Kind));
  }
  set_pixels(state);
}

template <WaveletKind Kind>
void BM_dwt2d_kernel(benchmark::State& state) {
  const Exec exec{static_cast<int>(state.range(0))};
  const auto& pan = scene().pan;
  for (auto _ : state) {
    const Plane c = dwt2d_forward(pan, Kind, exec);
    benchmark::DoNotOptimize(dwt2d_inverse(c, Kind, exec));
  }
  set_pixels(state);
}

void BM_fuse_reference(benchmark::State& state) {
  const FusionMethod method = DwtReplace{WaveletKind::Haar};
  for (auto _ : state) benchmark::DoNotOptimize(reference::fuse(scene().pan, scene().ms, method));
  set_pixels(state);
}

void BM_fuse_kernel(benchmark::State& state) {
  const FusionMethod method = DwtReplace{WaveletKind::Haar};
  const Exec exec{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(fuse(scene().pan, scene().ms, method, exec));
  set_pixels(state);
}

}  // namespace

BENCHMARK(BM_dwt2d_reference<WaveletKind::Haar>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dwt2d_kernel<WaveletKind::Haar>)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Arg(0)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dwt2d_reference<WaveletKind::Daubechies4>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dwt2d_kernel<WaveletKind::Daubechies4>)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Arg(0)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fuse_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fuse_kernel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
