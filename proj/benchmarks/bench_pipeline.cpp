#include <benchmark/benchmark.h>

#include "willmore/curvature.hpp"
#include "willmore/gaussmap4.hpp"
#include "willmore/generators.hpp"
#include "willmore/moebius.hpp"
#include "willmore/uniformize.hpp"

using namespace willmore;

static void BM_CurvatureBundleSphere(benchmark::State& state) {
  TriMesh m = icosphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_bundle(m).willmore);
  state.counters["faces"] = m.num_faces();
}
BENCHMARK(BM_CurvatureBundleSphere)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_CurvatureBundleTorus(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  TriMesh m = clifford_stereo(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_bundle(m).willmore);
  state.counters["faces"] = m.num_faces();
}
BENCHMARK(BM_CurvatureBundleTorus)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Liouville(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  TriMesh m = torus(2.0, 1.0, n, n);
  CurvatureBundle b = curvature_bundle(m);
  for (auto _ : state) benchmark::DoNotOptimize(solve_liouville(m, b).max_abs_u);
}
BENCHMARK(BM_Liouville)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Normalize(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  TriMesh m = clifford_stereo(n, n);
  CurvatureBundle b = curvature_bundle(m);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(m, b).certificate.lambda);
}
BENCHMARK(BM_Normalize)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GaussSplit(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  TriMesh m = perturbed_clifford(n, n, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(grassmann_split(m).phi_plus.size());
}
BENCHMARK(BM_GaussSplit)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
