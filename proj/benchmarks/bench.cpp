#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ifflow/hypersem.hpp"
#include "ifflow/relalg.hpp"
#include "ifflow/stateless.hpp"

namespace {

using namespace ifflow;

VarSet make_vars(int n) {
  VarSet vars;
  for (int i = 0; i < n; ++i) vars.insert("v" + std::to_string(i));
  return vars;
}

Relation random_relation(std::mt19937& rng, const VarSet& domain,
                         const VarSet& codomain, double density) {
  std::bernoulli_distribution flip(density);
  PairSet pairs;
  for (const auto& a : domain)
    for (const auto& b : codomain)
      if (flip(rng)) pairs.emplace(a, b);
  return Relation(std::move(pairs), domain, codomain);
}

void BM_Star(benchmark::State& state) {
  std::mt19937 rng(7);
  const VarSet vars = make_vars(static_cast<int>(state.range(0)));
  const Relation r = random_relation(rng, vars, vars, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(star(r, vars));
}
BENCHMARK(BM_Star)->Arg(6)->Arg(12)->Arg(24);

void BM_AlternatingPaths(benchmark::State& state) {
  std::mt19937 rng(11);
  const VarSet vars = make_vars(static_cast<int>(state.range(0)));
  const Relation first = random_relation(rng, vars, vars, 0.3);
  const Relation second = random_relation(rng, vars, vars, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(alternating_paths(first, second, vars, vars));
}
BENCHMARK(BM_AlternatingPaths)->Arg(6)->Arg(12)->Arg(24);

void BM_ComposeInterfaces(benchmark::State& state) {
  std::mt19937 rng(13);
  const int n = static_cast<int>(state.range(0));
  VarSet x1, y1, x2, y2;
  for (int i = 0; i < n; ++i) {
    x1.insert("a" + std::to_string(i));
    y1.insert("b" + std::to_string(i));
    y2.insert("c" + std::to_string(i));
  }
  x2 = y1;
  const VarSet z1 = set_union(x1, y1);
  const VarSet z2 = set_union(x2, y2);
  const StatelessInterface F = new_interface(
      x1, y1, random_relation(rng, z1, x1, 0.15),
      random_relation(rng, z1, y1, 0.15), Relation::empty(z1, y1));
  const StatelessInterface G = new_interface(
      x2, y2, random_relation(rng, z2, x2, 0.15),
      random_relation(rng, z2, y2, 0.15), Relation::empty(z2, y2));
  for (auto _ : state) benchmark::DoNotOptimize(compose_interfaces(F, G));
}
BENCHMARK(BM_ComposeInterfaces)->Arg(3)->Arg(6)->Arg(9);

void BM_SemanticsStrong(benchmark::State& state) {
  std::mt19937 rng(17);
  std::bernoulli_distribution flip(0.5);
  TraceSet T;
  T.variables = {"x", "y", "z"};
  const int traces = static_cast<int>(state.range(0));
  for (int i = 0; i < traces; ++i) {
    Trace trace;
    for (int t = 0; t < 4; ++t)
      trace.valuations.push_back(
          {{"x", flip(rng)}, {"y", flip(rng)}, {"z", flip(rng)}});
    T.traces.push_back(std::move(trace));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(check_strong(T, "x", "y", "z"));
}
BENCHMARK(BM_SemanticsStrong)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
