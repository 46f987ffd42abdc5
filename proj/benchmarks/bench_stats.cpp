#include <benchmark/benchmark.h>

#include "rscan/distributions.hpp"
#include "rscan/rng.hpp"
#include "rscan/simulate.hpp"
#include "rscan/stats.hpp"

namespace {

using namespace rscan;

const GenotypeCounts kTable{55, 95, 50, 60, 90, 50};

void BM_catt_half(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(catt(kTable, 0.5).statistic);
    }
}
BENCHMARK(BM_catt_half);

void BM_pearson(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(pearson(kTable).statistic);
    }
}
BENCHMARK(BM_pearson);

void BM_max3(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(max3(kTable).statistic);
    }
}
BENCHMARK(BM_max3);

void BM_gms(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(gms(kTable).statistic);
    }
}
BENCHMARK(BM_gms);

void BM_min2(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(min2(kTable).statistic);
    }
}
BENCHMARK(BM_min2);

void BM_min2_pvalue(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(min2_pvalue(0.05));
    }
}
BENCHMARK(BM_min2_pvalue);

void BM_min2_joint_cdf(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(min2_joint_cdf({3.841, 5.991}));
    }
}
BENCHMARK(BM_min2_joint_cdf);

void BM_multinomial3(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const GenotypeDist g = hwe_genotype_dist(0.3);
    auto rng = substream(1, 2, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(multinomial3(rng, n, g));
    }
}
BENCHMARK(BM_multinomial3)->Arg(500)->Arg(2000);

void BM_simulate_and_rank_snp(benchmark::State& state) {
    const TrueSnpSpec spec{GeneticModel::MUL, 0.3, 0.2, 1.5, 0.8};
    const auto dists = snp_sampling_dists(spec, 0.1);
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rng = substream(9, 0, i++);
        const GenotypeCounts c =
            sample_counts(rng, 500, 500, dists.first, dists.second);
        double keys = 0.0;
        for (Method m : kScanMethods) keys += rank_key(c, m);
        benchmark::DoNotOptimize(keys);
    }
}
BENCHMARK(BM_simulate_and_rank_snp);

}  // namespace

BENCHMARK_MAIN();
