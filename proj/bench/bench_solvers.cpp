// Copyright 2026 The qembed Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.


// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "qembed/experiment.hpp"
#include "qembed/qubo.hpp"
#include "qembed/rng.hpp"
#include "qembed/solver.hpp"

using namespace qembed;

namespace {

BuiltQubo model(int n, int k, SimilarityKind kind) {
    const auto g = generate_random_graph(n, 4.0, 7);
    return build_qubo_penalty(build_similarity(g, kind), k);
}

SaParams sa_params() {
    SaParams p;
    p.num_reads = 64;
    p.num_sweeps = 500;
    p.seed = 3;
    return p;
}

void BM_SaParallel(benchmark::State& state) {
    const auto m = model(static_cast<int>(state.range(0)), 3, SimilarityKind::Adjcy);
    for (auto _ : state) benchmark::DoNotOptimize(solve_sa(m.qubo, sa_params()));
    state.counters["vars"] = static_cast<double>(m.qubo.num_vars());
}

void BM_SaSerial(benchmark::State& state) {
    const auto m = model(static_cast<int>(state.range(0)), 3, SimilarityKind::Adjcy);
    for (auto _ : state) benchmark::DoNotOptimize(solve_sa_serial(m.qubo, sa_params()));
    state.counters["vars"] = static_cast<double>(m.qubo.num_vars());
}

// Random dense model; the penalty builds do not hit every size.
Qubo dense(std::size_t n) {
    Rng rng(n);
    Qubo q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.add_linear(i, uniform01(rng) - 0.5);
        for (std::size_t j = i + 1; j < n; ++j) q.add_quadratic(i, j, uniform01(rng) - 0.5);
    }
    return q;
}

void BM_ExactParallel(benchmark::State& state) {
    const auto q = dense(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_exact(q));
}

void BM_ExactSerial(benchmark::State& state) {
    const auto q = dense(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_exact_serial(q));
}

void BM_Sweep(benchmark::State& state) {
    ExperimentConfig c;
    c.node_counts = {10};
    c.dimensions = {2, 3};
    c.similarities = {SimilarityKind::Adjcy};
    c.methods = {Method::Penalty};
    c.graphs_per_cell = 2;
    c.repeats = 2;
    c.sa = sa_params();
    c.jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c));
}

}  // namespace

BENCHMARK(BM_SaParallel)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SaSerial)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
