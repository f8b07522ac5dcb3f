#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "pnntrain/dataset.hpp"
#include "pnntrain/pipeline.hpp"
#include "pnntrain/pnn.hpp"
#include "pnntrain/rng.hpp"
#include "pnntrain/svm.hpp"

using namespace pnntrain;

namespace {

std::vector<Sample> gaussian_pair(int n_per_class, std::size_t dim,
                                  double separation, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Sample> out;
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < n_per_class; ++i) {
            std::vector<double> x(dim);
            for (auto& v : x) v = rng.normal(0.0, 1.0);
            x[0] += separation * c + 1.0;
            out.push_back(Sample{std::move(x), c});
        }
    }
    return out;
}

void bm_pnn_classify(benchmark::State& state) {
    const auto patterns =
        gaussian_pair(static_cast<int>(state.range(0)) / 2, 16, 4.0, 1);
    const PnnModel model = pnn_train(patterns, 0.7, 2);
    Rng rng(2);
    std::vector<double> x(16);
    for (auto& v : x) v = rng.normal(0.0, 1.0);
    x[0] += 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pnn_classify(model, x));
    }
}

void bm_solve_dual(benchmark::State& state) {
    const auto data =
        gaussian_pair(static_cast<int>(state.range(0)) / 2, 8, 3.0, 3);
    FeatureMatrix x;
    x.cols = 8;
    std::vector<int> y;
    for (const auto& s : data) {
        x.append_row(s.features.data());
        y.push_back(*s.label == 0 ? -1 : +1);
    }
    const KernelSpec kernel{KernelFamily::rbf, 0.125};
    const SolveOptions opts;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_dual(x, y, kernel, opts));
    }
}

void bm_svm_decision(benchmark::State& state) {
    const auto data = gaussian_pair(64, 8, 3.0, 5);
    FeatureMatrix x;
    x.cols = 8;
    std::vector<int> y;
    for (const auto& s : data) {
        x.append_row(s.features.data());
        y.push_back(*s.label == 0 ? -1 : +1);
    }
    const SvmBinaryModel model =
        solve_dual(x, y, KernelSpec{KernelFamily::rbf, 0.125}, SolveOptions{})
            .model;
    Rng rng(6);
    std::vector<double> probe(8);
    for (auto& v : probe) v = rng.normal(0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decision_value(model, probe));
    }
}

void bm_two_moons_pipeline(benchmark::State& state) {
    const auto pool = generate_two_moons(50, 0.1, 7);
    const SplitDataset split =
        split_semi_supervised(pool, LabeledRequest::per_class(5), 8);
    PipelineConfig config;
    config.sigma = 0.5;
    config.kernel = KernelSpec{KernelFamily::rbf, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(pnn_training_pipeline(split, config));
    }
}

}  // namespace

BENCHMARK(bm_pnn_classify)->Arg(64)->Arg(512);
BENCHMARK(bm_solve_dual)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_svm_decision);
BENCHMARK(bm_two_moons_pipeline)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
