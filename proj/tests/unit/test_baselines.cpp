#include "hsic/baselines.hpp"
#include "hsic/errors.hpp"
#include "hsic/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace {

hsic::Dataset make(const Eigen::MatrixXd& x, hsic::Labels labels) {
    hsic::Dataset data;
    data.features = x;
    data.labels = std::move(labels);
    for (Eigen::Index j = 0; j < x.cols(); ++j) data.feature_names.push_back("f" + std::to_string(j));
    return data;
}

}  // namespace

TEST_CASE("pearson_rank") {
    Eigen::MatrixXd x(3, 1);
    x << 1, 2, 3;
    const auto r = hsic::pearson_rank(make(x, hsic::Labels::real({1, 2, 4})));
    CHECK(r.scores[0] == doctest::Approx(0.9820).epsilon(1e-3));
    CHECK(r.scores[0] == doctest::Approx(std::abs(oracle::pearson({1, 2, 3}, {1, 2, 4}))).epsilon(1e-12));

    Eigen::MatrixXd same(4, 3);
    same << 1, -1, 5, -1, 1, 5, 1, -1, 5, -1, 1, 5;
    const auto s = hsic::pearson_rank(make(same, hsic::Labels::binary({1, -1, 1, -1})));
    CHECK(s.scores[0] == doctest::Approx(1.0));
    CHECK(s.scores[1] == doctest::Approx(1.0));
    CHECK(s.scores[2] == 0.0);

    Eigen::MatrixXd two(2, 1);
    two << 1, 2;
    CHECK_THROWS_AS(hsic::pearson_rank(make(two, hsic::Labels::real({1, 2}))), hsic::Error);
}

TEST_CASE("pearson_rank invariances") {
    const auto data = hsic::synth_regression(60, 4);
    const auto base = hsic::pearson_rank(data);

    auto affine = data;
    affine.features = (3.5 * data.features.array() + 2.0).matrix();
    const auto moved = hsic::pearson_rank(affine);
    for (std::size_t j = 0; j < base.scores.size(); ++j) CHECK(std::abs(moved.scores[j] - base.scores[j]) <= 1e-10);

    hsic::Rng rng(1);
    std::vector<Eigen::Index> order(60);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    rng.shuffle(std::span<Eigen::Index>(order));
    auto shuffled = data;
    for (Eigen::Index i = 0; i < 60; ++i) shuffled.features.row(i) = data.features.row(order[static_cast<std::size_t>(i)]);
    shuffled.labels = data.labels.reordered(order);
    const auto reordered = hsic::pearson_rank(shuffled);
    for (std::size_t j = 0; j < base.scores.size(); ++j) CHECK(std::abs(reordered.scores[j] - base.scores[j]) <= 1e-10);
}

TEST_CASE("pearson_rank on multiclass labels uses one-vs-rest indicators") {
    const auto data = hsic::synth_multiclass(200, 3);
    const auto r = hsic::pearson_rank(data);
    // Feature 1 separates class 3 from the rest.
    CHECK(r.rank_of(1) <= 2);
}

TEST_CASE("equal_frequency_bins") {
    Eigen::VectorXd v(6);
    v << 5, 1, 3, 3, 9, 0;
    const auto bins = hsic::equal_frequency_bins(v, 3);
    CHECK(bins == std::vector<int>{2, 0, 1, 1, 2, 0});
}

TEST_CASE("mutual_info_rank") {
    const Eigen::Index m = 400;
    hsic::Rng rng(2);
    std::vector<int> signs(m);
    Eigen::MatrixXd x(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
        signs[static_cast<std::size_t>(i)] = i % 2 == 0 ? 1 : -1;
        x(i, 0) = signs[static_cast<std::size_t>(i)];
        x(i, 1) = rng.normal();
    }
    const auto data = make(x, hsic::Labels::binary(signs));
    const auto mi = hsic::mutual_info_rank(data);
    CHECK(std::abs(mi.scores[0] - std::log(2.0)) <= 0.05);
    CHECK(mi.scores[1] >= 0.0);

    // The noise feature sits below the 95th percentile of its own permutation null.
    std::vector<double> null;
    for (int b = 0; b < 100; ++b) {
        std::vector<Eigen::Index> order(m);
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        rng.shuffle(std::span<Eigen::Index>(order));
        auto permuted = data;
        permuted.labels = data.labels.reordered(order);
        null.push_back(hsic::mutual_info_rank(permuted).scores[1]);
    }
    std::sort(null.begin(), null.end());
    CHECK(mi.scores[1] <= null[94]);

    Eigen::MatrixXd small(9, 1);
    small.setRandom();
    CHECK_THROWS_AS(hsic::mutual_info_rank(make(small, hsic::Labels::real(std::vector<double>(9, 1.0)))), hsic::Error);
}

TEST_CASE("mutual_info_rank invariances") {
    const auto data = hsic::synth_regression(120, 6);
    const auto base = hsic::mutual_info_rank(data);
    for (double s : base.scores) CHECK(s >= 0.0);

    auto monotone = data;
    monotone.features = data.features.array().unaryExpr([](double v) { return std::exp(v) + v * v * v; }).matrix();
    const auto moved = hsic::mutual_info_rank(monotone);
    for (std::size_t j = 0; j < base.scores.size(); ++j) CHECK(std::abs(moved.scores[j] - base.scores[j]) <= 1e-10);

    hsic::Rng rng(3);
    std::vector<Eigen::Index> order(120);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    rng.shuffle(std::span<Eigen::Index>(order));
    auto shuffled = data;
    for (Eigen::Index i = 0; i < 120; ++i) shuffled.features.row(i) = data.features.row(order[static_cast<std::size_t>(i)]);
    shuffled.labels = data.labels.reordered(order);
    const auto reordered = hsic::mutual_info_rank(shuffled);
    for (std::size_t j = 0; j < base.scores.size(); ++j) CHECK(std::abs(reordered.scores[j] - base.scores[j]) <= 1e-10);
}
