#include <benchmark/benchmark.h>

#include "hsic/estimator.hpp"
#include "hsic/kernels.hpp"
#include "hsic/rng.hpp"

namespace {

Eigen::MatrixXd gaussian_points(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
    hsic::Rng rng(seed);
    Eigen::MatrixXd x(m, d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.normal();
    return x;
}

hsic::Labels alternating(Eigen::Index m) {
    std::vector<int> s(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % 2 == 0 ? 1 : -1;
    return hsic::Labels::binary(std::move(s));
}

}  // namespace

static void BM_HsicUnbiased(benchmark::State& state) {
    const auto m = state.range(0);
    const auto K = hsic::gaussian_kernel_matrix(hsic::squared_distances(gaussian_points(m, 5, 1)), 0.1,
                                                hsic::Diagonal::Zero);
    const auto L = hsic::binary_label_matrix(alternating(m), hsic::Diagonal::Zero);
    for (auto _ : state) benchmark::DoNotOptimize(hsic::hsic_unbiased(K, L).value);
    state.SetComplexityN(m);
}
BENCHMARK(BM_HsicUnbiased)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

static void BM_HsicVariance(benchmark::State& state) {
    const auto m = state.range(0);
    const auto K = hsic::gaussian_kernel_matrix(hsic::squared_distances(gaussian_points(m, 5, 2)), 0.1,
                                                hsic::Diagonal::Zero);
    const auto L = hsic::binary_label_matrix(alternating(m), hsic::Diagonal::Zero);
    for (auto _ : state) benchmark::DoNotOptimize(hsic::hsic_variance(K, L));
}
BENCHMARK(BM_HsicVariance)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_PermutationTest(benchmark::State& state) {
    const Eigen::Index m = 100;
    const auto K = hsic::gaussian_kernel_matrix(hsic::squared_distances(gaussian_points(m, 5, 3)), 0.1,
                                                hsic::Diagonal::Zero);
    const auto labels = alternating(m);
    for (auto _ : state)
        benchmark::DoNotOptimize(hsic::permutation_test(K, {}, labels, static_cast<int>(state.range(0)), 7).p_value);
}
BENCHMARK(BM_PermutationTest)->Arg(199)->Arg(999)->Unit(benchmark::kMillisecond);
