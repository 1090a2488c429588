#include "hsic/selection.hpp"

#include "hsic/errors.hpp"
#include "hsic/estimator.hpp"
#include "hsic/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsic {

std::string to_string(SelectionMethod method) {
    return method == SelectionMethod::Backward ? "bahsic" : "fohsic";
}

std::optional<SelectionMethod> parse_selection_method(std::string_view text) {
    if (text == "bahsic") return SelectionMethod::Backward;
    if (text == "fohsic") return SelectionMethod::Forward;
    return std::nullopt;
}

std::string to_string(DataKernel::Kind kind) {
    switch (kind) {
        case DataKernel::Kind::GaussianAdaptive: return "gaussian_adaptive";
        case DataKernel::Kind::GaussianFixed: return "gaussian_fixed";
        case DataKernel::Kind::Linear: return "linear";
    }
    return "gaussian_adaptive";
}

void SelectionConfig::validate(Eigen::Index dimensions) const {
    if (!(elimination_fraction > 0.0 && elimination_fraction <= 1.0)) {
        throw Error(ErrorKind::Parameter, "elimination fraction must lie in (0, 1]");
    }
    if (data_kernel.kind == DataKernel::Kind::GaussianFixed && !(data_kernel.sigma > 0.0)) {
        throw Error(ErrorKind::Parameter, "fixed Gaussian sigma must be positive");
    }
    if (target_count && (*target_count < 1 || *target_count > dimensions)) {
        throw Error(ErrorKind::Parameter, "target feature count must lie in [1, " + std::to_string(dimensions) + "]");
    }
}

Eigen::Index FeatureRanking::rank_of(Eigen::Index feature) const {
    const auto it = std::find(ordering.begin(), ordering.end(), feature);
    if (it == ordering.end()) throw Error(ErrorKind::Index, "feature " + std::to_string(feature) + " not ranked");
    return static_cast<Eigen::Index>(ordering.end() - it);
}

std::vector<Eigen::Index> FeatureRanking::most_relevant_first() const {
    return {ordering.rbegin(), ordering.rend()};
}

double width_for_dimension(Eigen::Index dimension) {
    return 1.0 / (2.0 * static_cast<double>(std::max<Eigen::Index>(1, dimension)));
}

double sigma_policy(Eigen::Index active_count) {
    return width_for_dimension(active_count - 1);
}

Eigen::Index batch_size(double fraction, Eigen::Index available) {
    // The slack keeps products such as 0.1 * 30 = 3.0000000000000004 at 3.
    const auto raw = static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(available) - 1e-9));
    return std::clamp<Eigen::Index>(raw, 1, std::max<Eigen::Index>(1, available));
}

namespace {

// Unbiased HSIC where K's off-diagonal entries come from `entry(i, k)`, i > k.
template <typename Entry>
double fused_hsic(const KernelMatrix& L, const Eigen::VectorXd& l1, double sum_l, Entry&& entry) {
    const auto& l = L.values();
    const Eigen::Index m = L.size();
    Eigen::VectorXd k1 = Eigen::VectorXd::Zero(m);
    double trace = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index i = k + 1; i < m; ++i) {
            const double v = entry(i, k);
            trace += v * l(i, k);
            k1(i) += v;
            k1(k) += v;
        }
    }
    return hsic_unbiased_from_sums(2.0 * trace, k1.sum(), sum_l, k1.dot(l1), m);
}

void require_label_kernel(const KernelMatrix& L, Eigen::Index m) {
    if (L.diagonal() != Diagonal::Zero) throw Error(ErrorKind::Convention, "label kernel must be zero-diagonal");
    if (L.size() != m) throw Error(ErrorKind::Shape, "label kernel size does not match sample count");
    if (m < 4) throw Error(ErrorKind::SampleSize, "HSIC needs at least 4 samples");
}

// Running kernel aggregate over an active feature set: squared distances for
// Gaussian kernels, inner products for the linear kernel.
class FeatureAggregate {
public:
    FeatureAggregate(const Eigen::MatrixXd& data, const DataKernel& kernel, bool start_full)
        : kernel_(kernel),
          distances_(start_full ? DistanceDecomposition(data) : DistanceDecomposition::empty(data)) {
        if (kernel_.kind == DataKernel::Kind::Linear) {
            gram_ = start_full ? linear_kernel_matrix(data, Diagonal::Full).values()
                               : Eigen::MatrixXd::Zero(data.rows(), data.rows());
        }
    }

    const DistanceDecomposition& distances() const { return distances_; }
    bool gaussian() const { return kernel_.kind != DataKernel::Kind::Linear; }

    // Scores every active (removal) or inactive (inclusion) feature.
    std::vector<CandidateScore> score(bool removal, const KernelMatrix& L, double sigma, std::size_t jobs) const {
        if (gaussian()) {
            return removal ? candidate_scores(distances_, L, sigma, jobs)
                           : inclusion_scores(distances_, L, sigma, jobs);
        }
        const auto candidates = candidates_for(removal);
        const Eigen::VectorXd l1 = L.values().rowwise().sum();
        const double sum_l = l1.sum();
        const double sign = removal ? -1.0 : 1.0;
        const auto& data = distances_.data();
        std::vector<CandidateScore> out(candidates.size());
        parallel_for(candidates.size(), jobs, [&](std::size_t c) {
            const auto column = data.col(candidates[c]);
            out[c] = {candidates[c], fused_hsic(L, l1, sum_l, [&](Eigen::Index i, Eigen::Index k) {
                          return gram_(i, k) + sign * column(i) * column(k);
                      })};
        });
        return out;
    }

    void remove(Eigen::Index feature) {
        if (!gaussian()) {
            const auto column = distances_.data().col(feature);
            gram_.noalias() -= column * column.transpose();
        }
        distances_.remove_feature(feature);
        if (!gaussian() && distances_.active().empty()) gram_.setZero();
    }

    void add(Eigen::Index feature) {
        if (!gaussian()) {
            const auto column = distances_.data().col(feature);
            gram_.noalias() += column * column.transpose();
        }
        distances_.add_feature(feature);
    }

private:
    std::vector<Eigen::Index> candidates_for(bool removal) const {
        std::vector<Eigen::Index> out;
        for (Eigen::Index j = 0; j < distances_.feature_count(); ++j) {
            if (distances_.is_active(j) == removal) out.push_back(j);
        }
        return out;
    }

    DataKernel kernel_;
    DistanceDecomposition distances_;
    Eigen::MatrixXd gram_;
};

std::vector<CandidateScore> gaussian_scores(const DistanceDecomposition& dist, const KernelMatrix& L, double sigma,
                                            std::size_t jobs, bool removal) {
    require_label_kernel(L, dist.sample_count());
    if (!(sigma > 0.0)) throw Error(ErrorKind::Parameter, "kernel parameter sigma must be positive");

    std::vector<Eigen::Index> candidates;
    for (Eigen::Index j = 0; j < dist.feature_count(); ++j) {
        if (dist.is_active(j) == removal) candidates.push_back(j);
    }
    const Eigen::VectorXd l1 = L.values().rowwise().sum();
    const double sum_l = l1.sum();
    const auto& total = dist.total();
    const auto& data = dist.data();
    const double sign = removal ? -1.0 : 1.0;

    std::vector<CandidateScore> out(candidates.size());
    parallel_for(candidates.size(), jobs, [&](std::size_t c) {
        const auto column = data.col(candidates[c]);
        out[c] = {candidates[c], fused_hsic(L, l1, sum_l, [&](Eigen::Index i, Eigen::Index k) {
                      const double diff = column(i) - column(k);
                      const double d2 = std::max(0.0, total(i, k) + sign * diff * diff);
                      return std::exp(-sigma * d2);
                  })};
    });
    return out;
}

// Stable order: higher score first, ties by ascending feature index.
std::vector<CandidateScore> by_descending_score(std::vector<CandidateScore> scores) {
    std::stable_sort(scores.begin(), scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.feature < b.feature;
    });
    return scores;
}

struct Prepared {
    Eigen::MatrixXd features;
    LabelKernel labels;
};

Prepared prepare(const Dataset& data, const SelectionConfig& config) {
    data.validate();
    if (data.samples() < 4) {
        throw Error(ErrorKind::SampleSize, "feature selection needs at least 4 samples, got " +
                                               std::to_string(data.samples()));
    }
    if (data.dimensions() < 1) throw Error(ErrorKind::Parameter, "dataset has no features");
    config.validate(data.dimensions());
    Eigen::MatrixXd features = config.normalize ? zscore_normalize(data).features : data.features;
    return {std::move(features), build_label_kernel(config.label_kernel, data.labels, Diagonal::Zero)};
}

FeatureRanking start_ranking(const SelectionConfig& config, const LabelKernel& labels) {
    FeatureRanking ranking;
    ranking.config = config;
    ranking.label_kernel = labels.variant;
    ranking.label_width = labels.width;
    if (labels.width && labels.width->fallback) {
        ranking.diagnostics.push_back("label kernel width fell back to 1.0 (zero median label distance)");
    }
    return ranking;
}

std::optional<double> round_sigma(const DataKernel& kernel, Eigen::Index dimension) {
    switch (kernel.kind) {
        case DataKernel::Kind::GaussianAdaptive: return width_for_dimension(dimension);
        case DataKernel::Kind::GaussianFixed: return kernel.sigma;
        case DataKernel::Kind::Linear: return std::nullopt;
    }
    return std::nullopt;
}

void finish(FeatureRanking& ranking) {
    if (ranking.config.target_count) ranking.selected = select_top(ranking, *ranking.config.target_count);
}

}  // namespace

std::vector<CandidateScore> candidate_scores(const DistanceDecomposition& dist, const KernelMatrix& L,
                                             double sigma, std::size_t jobs) {
    return gaussian_scores(dist, L, sigma, jobs, true);
}

std::vector<CandidateScore> inclusion_scores(const DistanceDecomposition& dist, const KernelMatrix& L,
                                             double sigma, std::size_t jobs) {
    return gaussian_scores(dist, L, sigma, jobs, false);
}

double subset_hsic(const Eigen::MatrixXd& features, std::span<const Eigen::Index> subset, const DataKernel& kernel,
                   double sigma, const KernelMatrix& L) {
    Eigen::MatrixXd columns(features.rows(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t c = 0; c < subset.size(); ++c) {
        if (subset[c] < 0 || subset[c] >= features.cols()) throw Error(ErrorKind::Index, "subset index out of range");
        columns.col(static_cast<Eigen::Index>(c)) = features.col(subset[c]);
    }
    const KernelMatrix K = kernel.kind == DataKernel::Kind::Linear
                               ? linear_kernel_matrix(columns, Diagonal::Zero)
                               : gaussian_kernel_matrix(squared_distances(columns), sigma, Diagonal::Zero);
    return hsic_unbiased(K, L).value;
}

FeatureRanking bahsic(const Dataset& data, const SelectionConfig& config) {
    const Prepared prepared = prepare(data, config);
    const KernelMatrix& L = prepared.labels.matrix;
    FeatureRanking ranking = start_ranking(config, prepared.labels);
    ranking.config.method = SelectionMethod::Backward;

    FeatureAggregate aggregate(prepared.features, config.data_kernel, true);
    while (!aggregate.distances().active().empty()) {
        const auto active = static_cast<Eigen::Index>(aggregate.distances().active().size());
        SelectionRound round;
        round.active_count = active;
        round.sigma = round_sigma(config.data_kernel, active - 1);
        round.scores = aggregate.score(true, L, round.sigma.value_or(1.0), config.jobs);

        // The largest HSIC(S \ {j}) marks the least relevant j; it goes first.
        const auto ranked = by_descending_score(round.scores);
        const Eigen::Index count = batch_size(config.elimination_fraction, active);
        for (Eigen::Index c = 0; c < count; ++c) {
            const Eigen::Index feature = ranked[static_cast<std::size_t>(c)].feature;
            round.moved.push_back(feature);
            ranking.ordering.push_back(feature);
            aggregate.remove(feature);
        }
        ranking.rounds.push_back(std::move(round));
    }
    finish(ranking);
    return ranking;
}

FeatureRanking fohsic(const Dataset& data, const SelectionConfig& config) {
    const Prepared prepared = prepare(data, config);
    const KernelMatrix& L = prepared.labels.matrix;
    FeatureRanking ranking = start_ranking(config, prepared.labels);
    ranking.config.method = SelectionMethod::Forward;

    const Eigen::Index d = prepared.features.cols();
    FeatureAggregate aggregate(prepared.features, config.data_kernel, false);
    std::vector<Eigen::Index> inclusion;
    while (static_cast<Eigen::Index>(inclusion.size()) < d) {
        const auto selected = static_cast<Eigen::Index>(inclusion.size());
        SelectionRound round;
        round.active_count = selected;
        round.sigma = round_sigma(config.data_kernel, selected + 1);
        round.scores = aggregate.score(false, L, round.sigma.value_or(1.0), config.jobs);

        const auto ranked = by_descending_score(round.scores);
        const Eigen::Index count = batch_size(config.elimination_fraction, d - selected);
        for (Eigen::Index c = 0; c < count; ++c) {
            const Eigen::Index feature = ranked[static_cast<std::size_t>(c)].feature;
            round.moved.push_back(feature);
            inclusion.push_back(feature);
            aggregate.add(feature);
        }
        ranking.rounds.push_back(std::move(round));
    }
    // First included = most relevant = last.
    ranking.ordering.assign(inclusion.rbegin(), inclusion.rend());
    finish(ranking);
    return ranking;
}

FeatureRanking select_features(const Dataset& data, const SelectionConfig& config) {
    return config.method == SelectionMethod::Backward ? bahsic(data, config) : fohsic(data, config);
}

std::vector<Eigen::Index> select_top(const FeatureRanking& ranking, Eigen::Index t) {
    const auto d = static_cast<Eigen::Index>(ranking.ordering.size());
    if (t < 1 || t > d) {
        throw Error(ErrorKind::Parameter, "t must lie in [1, " + std::to_string(d) + "], got " + std::to_string(t));
    }
    return {ranking.ordering.rbegin(), ranking.ordering.rbegin() + t};
}

}  // namespace hsic
