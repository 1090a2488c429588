#pragma once

#include "hsic/data.hpp"
#include "hsic/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hsic {

enum class SelectionMethod { Backward, Forward };

std::string to_string(SelectionMethod method);
std::optional<SelectionMethod> parse_selection_method(std::string_view text);

struct DataKernel {
    enum class Kind { GaussianAdaptive, GaussianFixed, Linear };

    Kind kind = Kind::GaussianAdaptive;
    double sigma = 1.0;  // GaussianFixed only

    static DataKernel gaussian_adaptive() { return {}; }
    static DataKernel gaussian_fixed(double sigma) { return {Kind::GaussianFixed, sigma}; }
    static DataKernel linear() { return {Kind::Linear, 0.0}; }
};

std::string to_string(DataKernel::Kind kind);

struct SelectionConfig {
    SelectionMethod method = SelectionMethod::Backward;
    DataKernel data_kernel;
    LabelKernelSpec label_kernel;  // Variant::Auto picks from the label type
    double elimination_fraction = 0.1;
    std::optional<Eigen::Index> target_count;
    bool normalize = true;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;  // 0 = all hardware threads

    void validate(Eigen::Index dimensions) const;
};

struct CandidateScore {
    Eigen::Index feature = 0;
    double score = 0.0;
};

// One elimination (or inclusion) round.
struct SelectionRound {
    Eigen::Index active_count = 0;      // |S| (backward) or |T| (forward) before the round
    std::optional<double> sigma;        // Gaussian data kernels only
    std::vector<CandidateScore> scores; // every candidate, ascending feature index
    std::vector<Eigen::Index> moved;    // eliminated / included, in the order appended
};

struct FeatureRanking {
    // All features; later elements are more relevant.
    std::vector<Eigen::Index> ordering;
    std::vector<SelectionRound> rounds;
    SelectionConfig config;
    LabelKernelSpec::Variant label_kernel = LabelKernelSpec::Variant::Auto;
    std::optional<WidthEstimate> label_width;
    std::vector<Eigen::Index> selected;  // top target_count, most relevant first
    std::vector<std::string> diagnostics;

    // 1 = most relevant.
    Eigen::Index rank_of(Eigen::Index feature) const;
    std::vector<Eigen::Index> most_relevant_first() const;
};

// Gaussian inverse width for a candidate set of `dimension` features:
// 1 / (2 max(1, dimension)).
double width_for_dimension(Eigen::Index dimension);

// Backward-elimination policy on the current active set: the candidate sets
// S \ {j} have |S| - 1 features, so sigma = 1 / (2 max(1, |S| - 1)).
double sigma_policy(Eigen::Index active_count);

// HSIC(sigma, S \ {j}) for every active j of `dist`, ascending feature
// index. L must be zero-diagonal.
std::vector<CandidateScore> candidate_scores(const DistanceDecomposition& dist, const KernelMatrix& L,
                                             double sigma, std::size_t jobs = 1);

// HSIC(sigma, T + {j}) for every inactive j of `dist`.
std::vector<CandidateScore> inclusion_scores(const DistanceDecomposition& dist, const KernelMatrix& L,
                                             double sigma, std::size_t jobs = 1);

// Unbiased HSIC of a feature subset computed from scratch.
double subset_hsic(const Eigen::MatrixXd& features, std::span<const Eigen::Index> subset,
                   const DataKernel& kernel, double sigma, const KernelMatrix& L);

// Number of features moved in a round over `available` candidates:
// max(1, ceil(fraction * available)), capped at `available`.
Eigen::Index batch_size(double fraction, Eigen::Index available);

FeatureRanking bahsic(const Dataset& data, const SelectionConfig& config);
FeatureRanking fohsic(const Dataset& data, const SelectionConfig& config);

// Dispatches on config.method.
FeatureRanking select_features(const Dataset& data, const SelectionConfig& config);

// The last t elements of the ordering, most relevant first.
std::vector<Eigen::Index> select_top(const FeatureRanking& ranking, Eigen::Index t);

}  // namespace hsic
