#include <benchmark/benchmark.h>

#include <vector>

#include "riskest/regression.hpp"
#include "riskest/rng.hpp"
#include "riskest/special_functions.hpp"
#include "riskest/stats.hpp"

namespace {

using namespace riskest;

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    rng::Engine engine(seed);
    std::vector<double> values(n);
    for (auto& v : values) {
        v = engine.normal(100.0, 15.0);
    }
    return values;
}

void BM_RegIncBeta(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::reg_inc_beta(x, 2.5, 14.0));
        x += 0.0003;
        if (x > 0.99) {
            x = 0.01;
        }
    }
}
BENCHMARK(BM_RegIncBeta);

void BM_TPValue(benchmark::State& state) {
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::t_pvalue(t, 166));
        t += 0.01;
        if (t > 5.0) {
            t = 0.1;
        }
    }
}
BENCHMARK(BM_TPValue);

void BM_Pearson(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto x = random_vector(n, 7);
    auto y = random_vector(n, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::pearson(x, y));
    }
}
BENCHMARK(BM_Pearson)->Arg(168)->Arg(10000);

void BM_Anova(benchmark::State& state) {
    auto per_group = static_cast<std::size_t>(state.range(0));
    stats::GroupedSample groups;
    groups["a"] = random_vector(per_group, 3);
    groups["b"] = random_vector(per_group, 5);
    groups["c"] = random_vector(per_group, 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::one_way_anova(groups));
    }
}
BENCHMARK(BM_Anova)->Arg(56)->Arg(2000);

void BM_Ols(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    rng::Engine engine(13);
    stats::DesignMatrix design;
    for (int j = 0; j < 8; ++j) {
        std::vector<double> column(n);
        for (auto& v : column) {
            v = engine.normal(0.0, 1.0);
        }
        design.add_column("x" + std::to_string(j), std::move(column));
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 3.0 + design.column(0)[i] - 2.0 * design.column(4)[i] +
               0.1 * engine.normal(0.0, 1.0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::ols(design, y));
    }
}
BENCHMARK(BM_Ols)->Arg(168)->Arg(2000);

} // namespace

BENCHMARK_MAIN();
