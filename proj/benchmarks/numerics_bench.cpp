#include <benchmark/benchmark.h>

#include <random>

#include "quasicomb/detect.hpp"
#include "quasicomb/fourier.hpp"
#include "quasicomb/numerics.hpp"

using namespace quasicomb;

static void BM_PairGaussian(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto comb = CombDistribution::comb(Coset(Lattice::integer(d)));
  auto phi = TestFunction::gaussian(d, 0.5, std::vector<double>(d, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(pair(comb, phi));
}
BENCHMARK(BM_PairGaussian)->DenseRange(1, 3);

static void BM_PoissonCheck(benchmark::State& state) {
  Lattice l = Lattice::canonicalize(
      RMatrix::from_rows({{Real(2), Real(0)}, {Real::rational(1, 3), Real::rational(3, 2)}}));
  auto phi = TestFunction::gaussian(2, 1.0, {0.3, -0.2}, {0.1, 0.25});
  for (auto _ : state) benchmark::DoNotOptimize(poisson_check(l, phi, 1e-10));
}
BENCHMARK(BM_PoissonCheck);

static void BM_FourierWeightedComb(benchmark::State& state) {
  const Coset z2(Lattice::integer(2));
  CombDistribution f(2, {CombTerm{z2, {1, 0}, {0, 1}, WFunction::exponential({Real::rational(1, 3), Real(0)}, 1.0)}});
  for (auto _ : state) benchmark::DoNotOptimize(fourier(f));
}
BENCHMARK(BM_FourierWeightedComb);

static void BM_Reciprocal(benchmark::State& state) {
  const double ratio = static_cast<double>(state.range(0)) / 10.0;
  WFunction f(2, {WTerm{2.0, {Real(0), Real(0)}},
                  WTerm{ratio, {Real::numeric(0.7071), Real::numeric(0.3)}},
                  WTerm{ratio, {Real::numeric(-0.2), Real::numeric(1.414)}}});
  for (auto _ : state) benchmark::DoNotOptimize(w_reciprocal(f, 2.0, 1e-8));
}
BENCHMARK(BM_Reciprocal)->DenseRange(2, 8, 2);

static void BM_FitCosets(benchmark::State& state) {
  const long half = state.range(0);
  std::vector<std::vector<double>> pts;
  for (long a = -half; a <= half; ++a)
    for (long b = -half; b <= half; ++b)
      if ((a + 2 * b) % 3 == 0 || (a % 4 == 1 && b % 2 == 0)) pts.push_back({double(a), double(b)});
  auto cloud = PointCloud::from_points(pts, {}, {-double(half), -double(half)}, {double(half), double(half)});
  for (auto _ : state) benchmark::DoNotOptimize(fit_cosets(cloud, 6, 1e-6));
  state.SetItemsProcessed(static_cast<int64_t>(pts.size()) * state.iterations());
}
BENCHMARK(BM_FitCosets)->Arg(10)->Arg(25)->Arg(50);
