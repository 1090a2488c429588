#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hsic {

enum class LabelType { Binary, Multiclass, Real };

std::string to_string(LabelType type);
std::optional<LabelType> parse_label_type(std::string_view text);

// Typed label vector. Binary labels are stored as -1/+1, multiclass labels as
// class ids 0..c-1, real labels as-is.
class Labels {
public:
    Labels() = default;

    static Labels binary(std::vector<int> signs);
    static Labels multiclass(std::vector<int> class_ids);
    static Labels real(std::vector<double> values);

    LabelType type() const noexcept { return type_; }
    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(values_.size()); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](Eigen::Index i) const { return values_[static_cast<std::size_t>(i)]; }

    // Binary and multiclass labels as integers (-1/+1 or 0..c-1).
    std::vector<int> as_ints() const;

    // Number of distinct classes (2 for binary, 0 for real labels).
    int class_count() const noexcept { return class_count_; }

    // Same labels in a new sample order: result[i] = this[order[i]].
    Labels reordered(const std::vector<Eigen::Index>& order) const;

private:
    LabelType type_ = LabelType::Real;
    std::vector<double> values_;
    int class_count_ = 0;
};

struct Dataset {
    Eigen::MatrixXd features;  // m x d, one row per sample
    Labels labels;
    std::vector<std::string> feature_names;
    std::string provenance;

    Eigen::Index samples() const noexcept { return features.rows(); }
    Eigen::Index dimensions() const noexcept { return features.cols(); }

    // Throws Error if any invariant (finite values, name count, label
    // length) is violated.
    void validate() const;
};

// Reads a header-first, comma-separated file. The label type is inferred
// unless `label_type` is given: two distinct values -> Binary (ascending
// value order maps to -1, +1), at most 20 distinct integers -> Multiclass,
// otherwise Real. A single distinct value is typed Real.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 std::optional<LabelType> label_type = std::nullopt);

// Writes features followed by the label column, values in round-trip
// precision.
void save_csv(const Dataset& data, const std::filesystem::path& path,
              const std::string& label_column = "y");

// Column-wise z-scoring with the population standard deviation. Constant
// columns become zero.
Dataset zscore_normalize(const Dataset& data);

// Artificial datasets with 22 features; only features 0 and 1 carry signal.
inline constexpr Eigen::Index kSynthFeatureCount = 22;

Dataset synth_xor(Eigen::Index m, std::uint64_t seed);
Dataset synth_multiclass(Eigen::Index m, std::uint64_t seed);
Dataset synth_regression(Eigen::Index m, std::uint64_t seed);

// Noise-free regression target x1 * exp(-x1^2 - x2^2).
double regression_signal(double x1, double x2);

}  // namespace hsic
