#pragma once

#include "hsic/data.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hsic {

// Whether the diagonal of a kernel matrix holds k(x_i, x_i) or is forced to
// zero. The unbiased estimator requires ZeroDiagonal, the biased estimator
// and the MMD/KTA statistics require FullDiagonal.
enum class Diagonal { Zero, Full };

// Symmetric m x m kernel matrix tagged with its diagonal convention.
class KernelMatrix {
public:
    // Takes ownership of `values`. Throws Shape for non-square or asymmetric
    // input; zeroes the diagonal when the convention is Zero.
    KernelMatrix(Eigen::MatrixXd values, Diagonal diagonal);

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    Diagonal diagonal() const noexcept { return diagonal_; }
    Eigen::Index size() const noexcept { return values_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

    // Copy with the diagonal set to zero. A zeroed diagonal cannot be
    // restored, so there is no inverse.
    KernelMatrix with_zero_diagonal() const;

private:
    Eigen::MatrixXd values_;
    Diagonal diagonal_;
};

// Pairwise squared Euclidean distances between the rows of `data`, summed
// feature by feature in column order.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& data);

// Running total of per-feature squared distances over an active feature set.
// Per-feature matrices are recomputed from the stored columns on demand, so
// memory stays O(m^2 + m d).
//
// Not thread-safe for mutation; concurrent scoring only reads.
class DistanceDecomposition {
public:
    // All columns of `data` start active.
    explicit DistanceDecomposition(const Eigen::MatrixXd& data);

    // No columns active, total = 0.
    static DistanceDecomposition empty(const Eigen::MatrixXd& data);

    const Eigen::MatrixXd& total() const noexcept { return total_; }
    const std::vector<Eigen::Index>& active() const noexcept { return active_; }
    bool is_active(Eigen::Index feature) const;
    Eigen::Index feature_count() const noexcept { return data_.cols(); }
    Eigen::Index sample_count() const noexcept { return data_.rows(); }
    const Eigen::MatrixXd& data() const noexcept { return data_; }

    // ||x_i,j - x_k,j||^2 for one feature j.
    Eigen::MatrixXd feature_distances(Eigen::Index feature) const;

    // total - feature_distances(j) and total + feature_distances(j), clamped
    // at zero, without mutating the decomposition.
    Eigen::MatrixXd total_without(Eigen::Index feature) const;
    Eigen::MatrixXd total_with(Eigen::Index feature) const;

    void remove_feature(Eigen::Index feature);
    void add_feature(Eigen::Index feature);

private:
    DistanceDecomposition() = default;
    void check_range(Eigen::Index feature) const;

    Eigen::MatrixXd data_;
    Eigen::MatrixXd total_;
    std::vector<Eigen::Index> active_;
    std::vector<bool> is_active_;
};

// exp(-sigma * D_ij). sigma multiplies the squared distance.
KernelMatrix gaussian_kernel_matrix(const Eigen::MatrixXd& squared_dist, double sigma, Diagonal diagonal);
KernelMatrix gaussian_kernel_matrix(const DistanceDecomposition& dist, double sigma, Diagonal diagonal);

// Row inner products of an m x d matrix.
KernelMatrix linear_kernel_matrix(const Eigen::MatrixXd& data, Diagonal diagonal);

// Signed class weights rho(+1) = 1/m+, rho(-1) = -1/m-. They sum to zero.
Eigen::VectorXd signed_class_weights(const Labels& labels);

// rho rho^T.
KernelMatrix binary_label_matrix(const Labels& labels, Diagonal diagonal);

// m x c label embedding: 1/m_i in the sample's own class column i and
// 1/(m_j - m) in every other column j.
Eigen::MatrixXd multiclass_label_embedding(const Labels& labels);

// Y Y^T for the embedding above.
KernelMatrix multiclass_label_matrix(const Labels& labels, Diagonal diagonal);

struct WidthEstimate {
    double sigma = 1.0;            // inverse-width parameter exp(-sigma d^2)
    double median_distance = 0.0;  // median pairwise Euclidean distance
    bool fallback = false;         // true when the median was zero
};

// Median heuristic mapped to the inverse-width convention:
// sigma = 1 / (2 med^2), so the exponent at the median distance is -1/2.
// Returns sigma = 1 with fallback set when med = 0. Rows are points.
WidthEstimate median_heuristic(const Eigen::MatrixXd& points);
WidthEstimate median_heuristic(std::span<const double> values);

// Gaussian kernel on scalar labels. Without a fixed `sigma` the width comes
// from median_heuristic over the labels.
KernelMatrix regression_label_matrix(const Labels& labels, Diagonal diagonal,
                                     std::optional<double> sigma = std::nullopt);

struct LabelKernelSpec {
    enum class Variant { Auto, Binary, Multiclass, RegressionRBF, Precomputed };

    Variant variant = Variant::Auto;
    std::optional<double> sigma;                 // fixed width for RegressionRBF
    std::optional<Eigen::MatrixXd> precomputed;  // full matrix for Precomputed

    static LabelKernelSpec automatic() { return {}; }
};

std::string to_string(LabelKernelSpec::Variant variant);

struct LabelKernel {
    KernelMatrix matrix;
    LabelKernelSpec::Variant variant;
    std::optional<WidthEstimate> width;  // RegressionRBF only
};

// Builds the label kernel for `labels`. Auto chooses Binary, Multiclass or
// RegressionRBF from the label type.
LabelKernel build_label_kernel(const LabelKernelSpec& spec, const Labels& labels, Diagonal diagonal);

}  // namespace hsic
