#include <benchmark/benchmark.h>

#include "c2r/commsim.hpp"
#include "c2r/placement.hpp"
#include "c2r/profiler.hpp"
#include "c2r/routing.hpp"
#include "c2r/workload.hpp"

using namespace c2r;

namespace {

std::vector<RouterLogits> tokens(int count, int n, std::uint64_t seed = 1) {
    WorkloadSpec spec;
    spec.num_tokens = count;
    spec.num_experts = n;
    spec.seed = seed;
    return generate(spec);
}

TopTTable table_for(const std::vector<RouterLogits>& toks, int n, int k, int t) {
    CollaborationMatrix m(n);
    for (const auto& l : toks) accumulate(m, route_topk(l, k));
    return extract_top_t(m, t);
}

void BM_route_topk(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    auto toks = tokens(1024, n);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(route_topk(toks[i++ % toks.size()], k));
    }
}
BENCHMARK(BM_route_topk)->Args({8, 2})->Args({60, 4});

void BM_route_c2r(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    auto toks = tokens(1024, n);
    TopTTable t = table_for(toks, n, k, std::min(n - 1, 5));
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(route_c2r(toks[i++ % toks.size()], k, t));
    }
}
BENCHMARK(BM_route_c2r)->Args({8, 2})->Args({60, 4});

void BM_accumulate(benchmark::State& state) {
    auto toks = tokens(1024, 8);
    std::vector<RoutingDecision> decisions;
    for (const auto& l : toks) decisions.push_back(route_topk(l, 2));
    CollaborationMatrix m(8);
    size_t i = 0;
    for (auto _ : state) {
        accumulate(m, decisions[i++ % decisions.size()]);
    }
}
BENCHMARK(BM_accumulate);

void BM_account_dispatch_10k(benchmark::State& state) {
    auto toks = tokens(10000, 8);
    std::vector<RoutingDecision> decisions;
    for (const auto& l : toks) decisions.push_back(route_topk(l, 2));
    PlacementMap placement = place_identity(8, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(account_dispatch(decisions, placement));
    }
}
BENCHMARK(BM_account_dispatch_10k);

void BM_place_greedy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto toks = tokens(10000, n);
    CollaborationMatrix m(n);
    for (const auto& l : toks) accumulate(m, route_topk(l, 2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(place_greedy(m, 2));
    }
}
BENCHMARK(BM_place_greedy)->Arg(8)->Arg(60);

void BM_generate_10k(benchmark::State& state) {
    WorkloadSpec spec;
    spec.num_tokens = 10000;
    spec.num_experts = 8;
    spec.num_groups = 4;
    spec.cluster_strength = 10.0;
    spec.noise_scale = 0.1;
    for (auto _ : state) {
        spec.seed += 1;
        benchmark::DoNotOptimize(generate(spec));
    }
}
BENCHMARK(BM_generate_10k);

} // namespace

BENCHMARK_MAIN();
