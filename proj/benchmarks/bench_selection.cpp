#include <benchmark/benchmark.h>

#include "hsic/kernels.hpp"
#include "hsic/selection.hpp"

static void BM_CandidateScores(benchmark::State& state) {
    const auto data = hsic::zscore_normalize(hsic::synth_xor(state.range(0), 1));
    const hsic::DistanceDecomposition dist(data.features);
    const auto L = hsic::binary_label_matrix(data.labels, hsic::Diagonal::Zero);
    for (auto _ : state) benchmark::DoNotOptimize(hsic::candidate_scores(dist, L, hsic::sigma_policy(22)).data());
}
BENCHMARK(BM_CandidateScores)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_Bahsic(benchmark::State& state) {
    const auto data = hsic::synth_xor(state.range(0), 2);
    for (auto _ : state) benchmark::DoNotOptimize(hsic::bahsic(data, {}).ordering.data());
}
BENCHMARK(BM_Bahsic)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_Fohsic(benchmark::State& state) {
    const auto data = hsic::synth_xor(state.range(0), 3);
    for (auto _ : state) benchmark::DoNotOptimize(hsic::fohsic(data, {}).ordering.data());
}
BENCHMARK(BM_Fohsic)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_BahsicLinear(benchmark::State& state) {
    const auto data = hsic::synth_regression(state.range(0), 4);
    hsic::SelectionConfig config;
    config.data_kernel = hsic::DataKernel::linear();
    for (auto _ : state) benchmark::DoNotOptimize(hsic::bahsic(data, config).ordering.data());
}
BENCHMARK(BM_BahsicLinear)->Arg(400)->Unit(benchmark::kMillisecond);
