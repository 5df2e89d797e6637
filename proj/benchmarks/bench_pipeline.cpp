#include <benchmark/benchmark.h>

#include "riskest/generator.hpp"
#include "riskest/pipeline.hpp"

namespace {

using namespace riskest;

void BM_Generate(benchmark::State& state) {
    dataio::GeneratorConfig config;
    config.n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dataio::generate_synthetic(config));
    }
}
BENCHMARK(BM_Generate)->Arg(200)->Arg(1000);

void BM_KfoldSplit(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::kfold_split(n, 3, 42));
    }
}
BENCHMARK(BM_KfoldSplit)->Arg(168)->Arg(10000);

void BM_FitModel(benchmark::State& state) {
    auto synthetic = dataio::generate_synthetic({});
    std::vector<pipeline::DriverSpec> drivers = {
        {"fs", pipeline::Scale::ratio},
        {"mts", pipeline::Scale::ratio},
        {"lt", pipeline::Scale::nominal},
        {"ma", pipeline::Scale::nominal},
    };
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pipeline::fit_model(synthetic.dataset, drivers, pipeline::ModelKind::eemr));
    }
}
BENCHMARK(BM_FitModel);

void BM_CrossValidate(benchmark::State& state) {
    auto synthetic = dataio::generate_synthetic({});
    std::vector<pipeline::DriverSpec> drivers = {
        {"fs", pipeline::Scale::ratio},
        {"mts", pipeline::Scale::ratio},
        {"lt", pipeline::Scale::nominal},
        {"ma", pipeline::Scale::nominal},
    };
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::cross_validate(synthetic.dataset, drivers, {}));
    }
}
BENCHMARK(BM_CrossValidate);

} // namespace

BENCHMARK_MAIN();
