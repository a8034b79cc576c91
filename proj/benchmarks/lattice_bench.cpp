#include <benchmark/benchmark.h>

#include <random>

#include "quasicomb/coset_ring.hpp"
#include "quasicomb/lattice.hpp"

using namespace quasicomb;

namespace {

RMatrix random_basis(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  while (true) {
    std::vector<std::vector<Real>> rows(d, std::vector<Real>(d));
    for (auto& r : rows)
      for (auto& v : r) v = Real::rational(num(rng), den(rng));
    RMatrix m = RMatrix::from_rows(rows);
    try {
      Lattice::canonicalize(m);
      return m;
    } catch (const Error&) {
    }
  }
}

}  // namespace

static void BM_Canonicalize(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int d = static_cast<int>(state.range(0));
  std::vector<RMatrix> bases;
  for (int i = 0; i < 32; ++i) bases.push_back(random_basis(rng, d));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(Lattice::canonicalize(bases[i++ % bases.size()]));
}
BENCHMARK(BM_Canonicalize)->DenseRange(1, 4);

static void BM_DualIntersect(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const int d = static_cast<int>(state.range(0));
  Lattice a = Lattice::canonicalize(random_basis(rng, d));
  Lattice b = Lattice::canonicalize(random_basis(rng, d));
  for (auto _ : state) benchmark::DoNotOptimize(intersect(dual(a), dual(b)));
}
BENCHMARK(BM_DualIntersect)->DenseRange(1, 3);

static void BM_BallEnumeration(benchmark::State& state) {
  const double radius = static_cast<double>(state.range(0));
  Coset c(Lattice::integer(2), {Real::rational(1, 3), Real::rational(1, 2)});
  std::vector<double> center = {0.25, -0.5};
  std::size_t visited = 0;
  for (auto _ : state)
    for_each_in_ball(c, center, radius, [&](std::span<const double>) { ++visited; });
  state.SetItemsProcessed(static_cast<int64_t>(visited));
}
BENCHMARK(BM_BallEnumeration)->RangeMultiplier(4)->Range(4, 256);

static void BM_Normalize(benchmark::State& state) {
  auto z2 = CosetExpression::leaf(Coset(Lattice::integer(2)));
  std::vector<CosetExpression> removed;
  for (int k = 2; k < 2 + state.range(0); ++k)
    removed.push_back(CosetExpression::leaf(Coset(Lattice::diagonal({Real(k), Real(1)}))));
  auto expr = CosetExpression::difference(z2, removed);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(expr));
}
BENCHMARK(BM_Normalize)->DenseRange(1, 4);
