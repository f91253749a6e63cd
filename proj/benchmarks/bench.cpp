#include <benchmark/benchmark.h>

#include "holosens/metrics.hpp"
#include "holosens/phase_retrieval.hpp"
#include "holosens/propagation.hpp"
#include "holosens/random.hpp"
#include "holosens/sensitivity.hpp"

using namespace holosens;

namespace {

ComplexField random_field(std::size_t m) {
  Rng rng(7);
  ComplexField f(m, 8e-6);
  for (Complex& z : f.data()) z = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return f;
}

Image random_image(std::size_t m) {
  Rng rng(11);
  std::vector<double> v(m * m);
  for (double& x : v) x = rng.uniform();
  return Image(m, m, std::move(v));
}

FmhConfig desk_fmh(std::size_t m) { return FmhConfig{633e-9, 8e-6, m, 0.1}; }

}  // namespace

static void BM_UnitaryDft(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ComplexField f = random_field(m);
  for (auto _ : state) benchmark::DoNotOptimize(unitary_dft2(f, Direction::Forward));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UnitaryDft)->Arg(16)->Arg(64)->Arg(256)->Arg(512);

static void BM_AsmPropagate(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ComplexField f = random_field(m);
  const Propagator psi(ForwardModel::Asm, desk_fmh(m));
  for (auto _ : state) benchmark::DoNotOptimize(psi.forward(f));
}
BENCHMARK(BM_AsmPropagate)->Arg(64)->Arg(256)->Arg(512);

static void BM_AsmTransfer(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(asm_transfer(desk_fmh(m), 1));
}
BENCHMARK(BM_AsmTransfer)->Arg(256);

// One GS iteration including metric evaluation.
static void BM_GsIteration(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Image target = random_image(m);
  GsConfig cfg;
  cfg.forward_model = state.range(1) == 0 ? ForwardModel::Fourier : ForwardModel::Asm;
  cfg.fmh = desk_fmh(m);
  cfg.iterations = 1;
  for (auto _ : state) benchmark::DoNotOptimize(gs_run(target, cfg));
}
BENCHMARK(BM_GsIteration)->Args({64, 0})->Args({64, 1})->Args({256, 0})->Args({256, 1});

static void BM_Ssim(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Grid a = random_image(m).grid();
  Grid b = a;
  for (double& v : b.data) v *= 0.9;
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

static void BM_SobolPoints(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sobol_points(8, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_SobolPoints)->Arg(1024)->Arg(8192);

static void BM_SobolIndices(benchmark::State& state) {
  FmhBounds bounds;
  for (int i = 0; i < 4; ++i) bounds.parameters.push_back({"x" + std::to_string(i), 0.0, 1.0, false});
  const SaltelliDesign design = saltelli_design(bounds, 1024, true);
  std::vector<double> y(design.row_count());
  for (std::size_t r = 0; r < y.size(); ++r)
    y[r] = design.scaled_at(r, 0) + 2.0 * design.scaled_at(r, 1) * design.scaled_at(r, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sobol_indices(design, y, 100, 1));
}
BENCHMARK(BM_SobolIndices);

BENCHMARK_MAIN();
