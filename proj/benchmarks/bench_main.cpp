#include <benchmark/benchmark.h>

#include <random>

#include "warpfock/harness.hpp"

using namespace warpfock;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

TestFunction bump_f() { return TestFunction::bump(v2(0.2, 1.6), v2(0.5, 0.8)); }
TestFunction bump_g() { return TestFunction::bump(v2(-0.1, -1.7), v2(0.6, 0.9)); }

void BM_OnShellSample(benchmark::State& st) {
  const GridPtr g = MassShellGrid::rapidity(1.0, 2, 3.0, static_cast<int>(st.range(0)));
  const TestFunction f = bump_f();
  for (auto _ : st) benchmark::DoNotOptimize(sample_onshell(f, g, +1));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_OnShellSample)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_WarpSpectralCreator(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const GridPtr g = MassShellGrid::rapidity(1.0, 2, 2.0, n);
  std::mt19937_64 rng(7);
  const FockState psi = random_state(g, 3, 2, 0, n, rng);
  const OpPtr a = creator(sample_onshell(bump_f(), g, +1).values);
  const Generator P = Generator::momentum(g);
  const ThetaMatrix th = ThetaMatrix::from_params(2, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(warp_spectral(a, th, P, psi));
}
BENCHMARK(BM_WarpSpectralCreator)->Arg(8)->Arg(16)->Arg(32);

void BM_DeformedField(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const GridPtr g = MassShellGrid::rapidity(1.0, 2, 2.0, n);
  std::mt19937_64 rng(11);
  const FockState psi = random_state(g, 3, 2, 0, n, rng);
  const DeformedFieldDescriptor d{SmearedFieldDescriptor::from_test_function(bump_f(), g),
                                  ThetaMatrix::from_params(2, 0.5), OneParticleUnitary::identity()};
  for (auto _ : st) benchmark::DoNotOptimize(deformed_field_apply(d, psi));
}
BENCHMARK(BM_DeformedField)->Arg(8)->Arg(16)->Arg(32);

void BM_CommutatorResidual(benchmark::State& st) {
  const GridPtr g = MassShellGrid::rapidity(1.0, 2, 6.0, static_cast<int>(st.range(0)));
  const ThetaMatrix th = ThetaMatrix::from_params(2, 0.5);
  const TestFunction f = bump_f(), h = bump_g();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        commutator_residual(f, h, th, OneParticleUnitary::identity(), g, v2(0.5, 0.15), v2(0.5, 0.15)));
}
BENCHMARK(BM_CommutatorResidual)->Arg(64)->Arg(256);

void BM_TwistedConvolution(benchmark::State& st) {
  MomentumLattice lat;
  lat.half = static_cast<int>(st.range(0));
  lat.spacing = 0.25;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  CVec a(lat.size()), b(lat.size());
  for (int64_t i = 0; i < lat.size(); ++i) {
    a(i) = cplx(nd(rng), nd(rng));
    b(i) = cplx(nd(rng), nd(rng));
  }
  const ThetaMatrix th = ThetaMatrix::from_params(2, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(twisted_convolution(a, b, th, lat));
}
BENCHMARK(BM_TwistedConvolution)->Arg(4)->Arg(8)->Arg(12);

}  // namespace
BENCHMARK_MAIN();
