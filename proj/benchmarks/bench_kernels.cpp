// Copyright 2026 The qbu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Hot kernels: pairing sums, permanents, polynomial expansion, the Monte
// Carlo estimator, and double-cover counting.  Sizes stay in the exact-kernel
// regime the library guards actually allow.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "qbu/estimators.hpp"
#include "qbu/graphred.hpp"
#include "qbu/hilbert.hpp"
#include "qbu/matchperm.hpp"
#include "qbu/rng.hpp"
#include "qbu/sphere.hpp"

namespace {

using namespace qbu;

Dense<BigInt> random_int_matrix(int size, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Dense<BigInt> a(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) a(r, c) = static_cast<long long>(rng.next() % 5);
  return a;
}

ObservationSet random_set(int d, int copies, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ObservationSet obs(d);
  for (int i = 0; i < copies; ++i) {
    CVec v(d);
    for (int k = 0; k < d; ++k) v[k] = Complex(rng.normal(), rng.normal());
    obs.add(Observation::rank_one(v), 1);
  }
  return obs;
}

void BM_PairingSumMemo(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto a = random_int_matrix(size, 11);
  for (auto _ : state) benchmark::DoNotOptimize(pairing_sum(a));
}
BENCHMARK(BM_PairingSumMemo)->Arg(8)->Arg(12)->Arg(16);

void BM_PairingSumEnumerate(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto a = random_int_matrix(size, 11);
  for (auto _ : state) benchmark::DoNotOptimize(pairing_sum_enumerate(a));
}
BENCHMARK(BM_PairingSumEnumerate)->Arg(8)->Arg(10)->Arg(12);

void BM_PermanentRyser(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto a = random_int_matrix(size, 13);
  for (auto _ : state) benchmark::DoNotOptimize(permanent(a));
}
BENCHMARK(BM_PermanentRyser)->Arg(6)->Arg(8)->Arg(10);

void BM_PermanentBruteforce(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto a = random_int_matrix(size, 13);
  for (auto _ : state) benchmark::DoNotOptimize(permanent_bruteforce(a));
}
BENCHMARK(BM_PermanentBruteforce)->Arg(6)->Arg(8);

void BM_PnormExact(benchmark::State& state) {
  const int copies = static_cast<int>(state.range(0));
  const auto obs = random_set(3, copies, 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(pnorm_exact(obs, Convention::normalized).value);
}
BENCHMARK(BM_PnormExact)->Arg(2)->Arg(4)->Arg(6);

void BM_PnormMonteCarlo(benchmark::State& state) {
  const auto obs = random_set(3, 4, 17);
  const long long samples = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(pnorm_montecarlo(obs, samples, 19, 1).estimate);
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_PnormMonteCarlo)->Arg(10000)->Arg(100000);

void BM_ExtractBasePermanent(benchmark::State& state) {
  const int copies = static_cast<int>(state.range(0));
  const auto dm = gram_from_observations(random_set(3, copies, 23));
  ExtractOptions opts;
  opts.chebyshev_nodes = true;
  for (auto _ : state) benchmark::DoNotOptimize(extract_base_permanent(dm, opts));
}
BENCHMARK(BM_ExtractBasePermanent)->Arg(2)->Arg(3)->Arg(4);

void BM_DoubleCoverCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  WeightedDigraph g;
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) g.edges.push_back({u, v, Rat(1)});
  for (auto _ : state)
    benchmark::DoNotOptimize(count_double_cycle_covers_dfs(g));
}
BENCHMARK(BM_DoubleCoverCount)->Arg(2)->Arg(3)->Arg(4);

void BM_ChainExecution(benchmark::State& state) {
  WeightedDigraph g;
  g.n = 2;
  g.edges = {{0, 0, Rat(1)}, {0, 1, Rat(1)}, {1, 0, Rat(1)}, {1, 1, Rat(1)}};
  default_gadget();
  const auto plan = compile_dcc_to_qbu(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(execute_plan(plan).recovered);
}
BENCHMARK(BM_ChainExecution);

void BM_LikelihoodGradientSearch(benchmark::State& state) {
  const auto obs = random_set(3, 5, 29);
  for (auto _ : state)
    benchmark::DoNotOptimize(maximize_likelihood(obs, 4, 31).log_likelihood);
}
BENCHMARK(BM_LikelihoodGradientSearch);

}  // namespace

BENCHMARK_MAIN();
