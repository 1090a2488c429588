#include "hsic/baselines.hpp"

#include "hsic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsic {

std::vector<Eigen::Index> ScoreVector::most_relevant_first() const {
    std::vector<Eigen::Index> order(scores.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    });
    return order;
}

Eigen::Index ScoreVector::rank_of(Eigen::Index feature) const {
    const auto order = most_relevant_first();
    const auto it = std::find(order.begin(), order.end(), feature);
    if (it == order.end()) throw Error(ErrorKind::Index, "feature " + std::to_string(feature) + " not scored");
    return static_cast<Eigen::Index>(it - order.begin()) + 1;
}

namespace {

double abs_correlation(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
    const Eigen::VectorXd xc = x.array() - x.mean();
    const Eigen::VectorXd yc = y.array() - y.mean();
    const double sxx = xc.squaredNorm();
    const double syy = yc.squaredNorm();
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::min(1.0, std::abs(xc.dot(yc)) / std::sqrt(sxx * syy));
}

}  // namespace

ScoreVector pearson_rank(const Dataset& data) {
    data.validate();
    if (data.samples() < 3) throw Error(ErrorKind::SampleSize, "Pearson ranking needs at least 3 samples");

    const Eigen::Map<const Eigen::VectorXd> y(data.labels.values().data(), data.labels.size());
    ScoreVector out;
    out.method_name = "pearson";
    out.scores.resize(static_cast<std::size_t>(data.dimensions()));

    if (data.labels.type() == LabelType::Multiclass) {
        std::vector<Eigen::VectorXd> indicators;
        for (int c = 0; c < data.labels.class_count(); ++c) {
            indicators.push_back((y.array() == static_cast<double>(c)).cast<double>().matrix());
        }
        for (Eigen::Index j = 0; j < data.dimensions(); ++j) {
            double best = 0.0;
            for (const auto& indicator : indicators) best = std::max(best, abs_correlation(data.features.col(j), indicator));
            out.scores[static_cast<std::size_t>(j)] = best;
        }
        return out;
    }

    for (Eigen::Index j = 0; j < data.dimensions(); ++j) {
        out.scores[static_cast<std::size_t>(j)] = abs_correlation(data.features.col(j), y);
    }
    return out;
}

std::vector<int> equal_frequency_bins(const Eigen::Ref<const Eigen::VectorXd>& values, int bins) {
    const auto m = static_cast<std::size_t>(values.size());
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values(static_cast<Eigen::Index>(a)) < values(static_cast<Eigen::Index>(b));
    });

    std::vector<int> out(m, 0);
    std::size_t group_start = 0;
    for (std::size_t p = 0; p < m; ++p) {
        if (p > 0 && values(static_cast<Eigen::Index>(order[p])) != values(static_cast<Eigen::Index>(order[p - 1]))) {
            group_start = p;
        }
        out[order[p]] = static_cast<int>(group_start * static_cast<std::size_t>(bins) / m);
    }
    return out;
}

namespace {

double plugin_mutual_information(const std::vector<int>& a, int a_levels, const std::vector<int>& b, int b_levels) {
    const double m = static_cast<double>(a.size());
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(a_levels, b_levels);
    for (std::size_t i = 0; i < a.size(); ++i) joint(a[i], b[i]) += 1.0;
    joint /= m;
    const Eigen::VectorXd pa = joint.rowwise().sum();
    const Eigen::VectorXd pb = joint.colwise().sum().transpose();
    double mi = 0.0;
    for (int i = 0; i < a_levels; ++i) {
        for (int j = 0; j < b_levels; ++j) {
            const double p = joint(i, j);
            if (p > 0.0) mi += p * std::log(p / (pa(i) * pb(j)));
        }
    }
    return std::max(0.0, mi);
}

}  // namespace

ScoreVector mutual_info_rank(const Dataset& data, std::optional<int> bins) {
    data.validate();
    const Eigen::Index m = data.samples();
    if (m < 10) throw Error(ErrorKind::SampleSize, "mutual-information ranking needs at least 10 samples");
    const int bin_count =
        bins.value_or(std::min(10, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))))));
    if (bin_count < 2) throw Error(ErrorKind::Parameter, "mutual-information ranking needs at least 2 bins");

    std::vector<int> label_codes;
    int label_levels = 0;
    const Eigen::Map<const Eigen::VectorXd> y(data.labels.values().data(), m);
    switch (data.labels.type()) {
        case LabelType::Binary:
            label_codes = data.labels.as_ints();
            for (int& c : label_codes) c = c > 0 ? 1 : 0;
            label_levels = 2;
            break;
        case LabelType::Multiclass:
            label_codes = data.labels.as_ints();
            label_levels = data.labels.class_count();
            break;
        case LabelType::Real:
            label_codes = equal_frequency_bins(y, bin_count);
            label_levels = bin_count;
            break;
    }

    ScoreVector out;
    out.method_name = "mi";
    out.scores.resize(static_cast<std::size_t>(data.dimensions()));
    for (Eigen::Index j = 0; j < data.dimensions(); ++j) {
        const auto codes = equal_frequency_bins(data.features.col(j), bin_count);
        out.scores[static_cast<std::size_t>(j)] = plugin_mutual_information(codes, bin_count, label_codes, label_levels);
    }
    return out;
}

}  // namespace hsic
