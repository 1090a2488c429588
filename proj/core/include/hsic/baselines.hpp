#pragma once

#include "hsic/data.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace hsic {

// Per-feature relevance scores from a univariate ranker. Higher is more
// relevant.
struct ScoreVector {
    std::vector<double> scores;
    bool higher_is_more_relevant = true;
    std::string method_name;

    // Feature indices by descending score, ties by ascending index.
    std::vector<Eigen::Index> most_relevant_first() const;
    // 1 = most relevant.
    Eigen::Index rank_of(Eigen::Index feature) const;
};

// |Pearson correlation| between each feature and the numeric label. For
// multiclass labels the score is the largest |correlation| with a
// one-vs-rest class indicator. Constant features score 0.
ScoreVector pearson_rank(const Dataset& data);

// Plug-in mutual information (nats) between each feature, discretised into
// equal-frequency bins, and the label. Class labels are used as-is; real
// labels get the same binning as the features. Default bin count is
// min(10, ceil(sqrt(m))).
ScoreVector mutual_info_rank(const Dataset& data, std::optional<int> bins = std::nullopt);

// Equal-frequency bin index per value; tied values share the bin of their
// first sorted position.
std::vector<int> equal_frequency_bins(const Eigen::Ref<const Eigen::VectorXd>& values, int bins);

}  // namespace hsic
