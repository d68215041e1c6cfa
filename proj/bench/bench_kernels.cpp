#include "stochlp/exact_exponential.hpp"
#include "stochlp/fptas.hpp"
#include "stochlp/generators.hpp"
#include "stochlp/symbolic.hpp"

#include <benchmark/benchmark.h>

using namespace stochlp;

static void BM_BagStaircase(benchmark::State& state) {
  Instance in = gen_diamond_ladder(1, DistSpec::uniform(1));
  Prepared p = prepare(in.graph, in.td);
  GridSpec grid{static_cast<int>(state.range(0)), 2.0};
  int bag = 0;
  for (int i = 0; i < p.ctx.bags(); ++i)
    if (p.ctx.bag_edges[i].size() > p.ctx.bag_edges[bag].size()) bag = i;
  for (auto _ : state) benchmark::DoNotOptimize(bag_staircase(p.ctx, bag, grid));
}
BENCHMARK(BM_BagStaircase)->Arg(4)->Arg(8);

static void BM_ApproxChain(benchmark::State& state) {
  Instance in = gen_chain(static_cast<int>(state.range(0)), DistSpec::uniform(1));
  ApproxOptions opt;
  opt.grid_m = 32;
  for (auto _ : state) benchmark::DoNotOptimize(approx_dag(in.graph, in.td, 1.0, opt).value);
}
BENCHMARK(BM_ApproxChain)->Arg(3)->Arg(6);

static void BM_SymbolicMultiply(benchmark::State& state) {
  using namespace stochlp::sym;
  Sum a = Sum::term({kZero, 0, 1}, {{0, 2, -1}, {1, 1, 0}}, 1);
  Sum b = Sum::term({kZero, 2, 1}, {{1, 0, 1}, {2, 1, -1}}, 3);
  Sum c = Sum::term({3, 0}, {{0, 1, 0}, {3, 0, -1}}, -2);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(multiply(a, b), c));
}
BENCHMARK(BM_SymbolicMultiply);

static void BM_SymbolicIntegrate(benchmark::State& state) {
  using namespace stochlp::sym;
  Sum s = multiply(Sum::term({kZero, 0, kX}, {{0, 3, -1}}, 1), Sum::guard({kZero, 1, kX}));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_out(s, 0));
}
BENCHMARK(BM_SymbolicIntegrate);

static void BM_ExactDiamondLadder(benchmark::State& state) {
  Instance in = gen_diamond_ladder(static_cast<int>(state.range(0)), DistSpec::exponential());
  for (auto _ : state) benchmark::DoNotOptimize(exact_exp(in.graph, in.td, 2).value);
}
BENCHMARK(BM_ExactDiamondLadder)->Arg(1)->Arg(2);

BENCHMARK_MAIN();
