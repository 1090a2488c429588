#include "hsic/kernels.hpp"

#include "hsic/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hsic {

namespace {

void apply_diagonal(Eigen::MatrixXd& values, Diagonal diagonal) {
    if (diagonal == Diagonal::Zero) values.diagonal().setZero();
}

void require_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::Parameter, "kernel parameter sigma must be positive and finite");
    }
}

}  // namespace

KernelMatrix::KernelMatrix(Eigen::MatrixXd values, Diagonal diagonal)
    : values_(std::move(values)), diagonal_(diagonal) {
    if (values_.rows() != values_.cols()) {
        throw Error(ErrorKind::Shape, "kernel matrix must be square, got " + std::to_string(values_.rows()) +
                                          "x" + std::to_string(values_.cols()));
    }
    if (values_.size() > 0) {
        const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
        const double asym = (values_ - values_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * scale) throw Error(ErrorKind::Shape, "kernel matrix is not symmetric");
    }
    apply_diagonal(values_, diagonal_);
}

KernelMatrix KernelMatrix::with_zero_diagonal() const {
    return KernelMatrix(values_, Diagonal::Zero);
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& data) {
    const Eigen::Index m = data.rows();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        const auto column = data.col(j);
        for (Eigen::Index k = 0; k < m; ++k) {
            for (Eigen::Index i = k + 1; i < m; ++i) {
                const double diff = column(i) - column(k);
                dist(i, k) += diff * diff;
            }
        }
    }
    dist.triangularView<Eigen::StrictlyUpper>() = dist.transpose();
    return dist;
}

DistanceDecomposition::DistanceDecomposition(const Eigen::MatrixXd& data)
    : data_(data), total_(squared_distances(data)), is_active_(static_cast<std::size_t>(data.cols()), true) {
    active_.reserve(static_cast<std::size_t>(data.cols()));
    for (Eigen::Index j = 0; j < data.cols(); ++j) active_.push_back(j);
}

DistanceDecomposition DistanceDecomposition::empty(const Eigen::MatrixXd& data) {
    DistanceDecomposition out;
    out.data_ = data;
    out.total_ = Eigen::MatrixXd::Zero(data.rows(), data.rows());
    out.is_active_.assign(static_cast<std::size_t>(data.cols()), false);
    return out;
}

void DistanceDecomposition::check_range(Eigen::Index feature) const {
    if (feature < 0 || feature >= data_.cols()) {
        throw Error(ErrorKind::Index, "feature " + std::to_string(feature) + " out of range [0, " +
                                          std::to_string(data_.cols()) + ")");
    }
}

bool DistanceDecomposition::is_active(Eigen::Index feature) const {
    check_range(feature);
    return is_active_[static_cast<std::size_t>(feature)];
}

Eigen::MatrixXd DistanceDecomposition::feature_distances(Eigen::Index feature) const {
    check_range(feature);
    const auto column = data_.col(feature);
    const Eigen::Index m = data_.rows();
    Eigen::MatrixXd dist(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double diff = column(i) - column(k);
            dist(i, k) = diff * diff;
        }
    }
    return dist;
}

Eigen::MatrixXd DistanceDecomposition::total_without(Eigen::Index feature) const {
    if (!is_active(feature)) {
        throw Error(ErrorKind::Index, "feature " + std::to_string(feature) + " is not active");
    }
    return (total_ - feature_distances(feature)).cwiseMax(0.0);
}

Eigen::MatrixXd DistanceDecomposition::total_with(Eigen::Index feature) const {
    if (is_active(feature)) {
        throw Error(ErrorKind::Index, "feature " + std::to_string(feature) + " is already active");
    }
    return total_ + feature_distances(feature);
}

void DistanceDecomposition::remove_feature(Eigen::Index feature) {
    total_ = total_without(feature);
    is_active_[static_cast<std::size_t>(feature)] = false;
    active_.erase(std::find(active_.begin(), active_.end(), feature));
    if (active_.empty()) total_.setZero();
}

void DistanceDecomposition::add_feature(Eigen::Index feature) {
    total_ = total_with(feature);
    is_active_[static_cast<std::size_t>(feature)] = true;
    active_.insert(std::upper_bound(active_.begin(), active_.end(), feature), feature);
}

KernelMatrix gaussian_kernel_matrix(const Eigen::MatrixXd& squared_dist, double sigma, Diagonal diagonal) {
    require_sigma(sigma);
    if (squared_dist.rows() != squared_dist.cols()) {
        throw Error(ErrorKind::Shape, "distance matrix must be square");
    }
    if ((squared_dist.array() < 0.0).any()) {
        throw Error(ErrorKind::Parameter, "squared distances must be non-negative");
    }
    Eigen::MatrixXd values = (-sigma * squared_dist.array()).exp().matrix();
    return KernelMatrix(std::move(values), diagonal);
}

KernelMatrix gaussian_kernel_matrix(const DistanceDecomposition& dist, double sigma, Diagonal diagonal) {
    return gaussian_kernel_matrix(dist.total(), sigma, diagonal);
}

KernelMatrix linear_kernel_matrix(const Eigen::MatrixXd& data, Diagonal diagonal) {
    if (data.rows() < 1) throw Error(ErrorKind::Parameter, "linear kernel needs at least one sample");
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(data.rows(), data.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(data);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return KernelMatrix(std::move(gram), diagonal);
}

Eigen::VectorXd signed_class_weights(const Labels& labels) {
    if (labels.type() != LabelType::Binary) {
        throw Error(ErrorKind::DegenerateLabels, "binary label kernel needs binary labels, got " +
                                                     to_string(labels.type()));
    }
    const auto& values = labels.values();
    const auto positives = std::count(values.begin(), values.end(), 1.0);
    const auto negatives = static_cast<std::ptrdiff_t>(values.size()) - positives;
    if (positives == 0 || negatives == 0) {
        throw Error(ErrorKind::DegenerateLabels, "binary labels contain a single class");
    }
    Eigen::VectorXd rho(labels.size());
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        rho(i) = labels[i] > 0 ? 1.0 / static_cast<double>(positives) : -1.0 / static_cast<double>(negatives);
    }
    return rho;
}

KernelMatrix binary_label_matrix(const Labels& labels, Diagonal diagonal) {
    const Eigen::VectorXd rho = signed_class_weights(labels);
    return KernelMatrix(rho * rho.transpose(), diagonal);
}

Eigen::MatrixXd multiclass_label_embedding(const Labels& labels) {
    if (labels.type() != LabelType::Multiclass && labels.type() != LabelType::Binary) {
        throw Error(ErrorKind::DegenerateLabels, "multiclass label kernel needs class labels");
    }
    // Binary labels are treated as classes {-1 -> 0, +1 -> 1}.
    std::vector<int> classes = labels.as_ints();
    if (labels.type() == LabelType::Binary) {
        for (int& c : classes) c = c > 0 ? 1 : 0;
    }
    const int c = labels.type() == LabelType::Binary ? 2 : labels.class_count();
    if (c < 2) throw Error(ErrorKind::DegenerateLabels, "multiclass labels need at least 2 classes");

    std::vector<double> counts(static_cast<std::size_t>(c), 0.0);
    for (int k : classes) counts[static_cast<std::size_t>(k)] += 1.0;
    for (int k = 0; k < c; ++k) {
        if (counts[static_cast<std::size_t>(k)] == 0.0) {
            throw Error(ErrorKind::DegenerateLabels, "class " + std::to_string(k) + " has no samples");
        }
    }

    const double m = static_cast<double>(labels.size());
    Eigen::MatrixXd embedding(labels.size(), c);
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        const int own = classes[static_cast<std::size_t>(i)];
        for (int k = 0; k < c; ++k) {
            const double mk = counts[static_cast<std::size_t>(k)];
            embedding(i, k) = k == own ? 1.0 / mk : 1.0 / (mk - m);
        }
    }
    return embedding;
}

KernelMatrix multiclass_label_matrix(const Labels& labels, Diagonal diagonal) {
    const Eigen::MatrixXd y = multiclass_label_embedding(labels);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(y.rows(), y.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(y);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return KernelMatrix(std::move(gram), diagonal);
}

namespace {

double median_of(std::vector<double>& values) {
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

WidthEstimate width_from_median(double med) {
    WidthEstimate out;
    out.median_distance = med;
    if (med > 0.0) {
        out.sigma = 1.0 / (2.0 * med * med);
    } else {
        out.sigma = 1.0;
        out.fallback = true;
    }
    return out;
}

}  // namespace

WidthEstimate median_heuristic(const Eigen::MatrixXd& points) {
    const Eigen::Index m = points.rows();
    if (m < 2) throw Error(ErrorKind::Parameter, "median heuristic needs at least 2 points");
    const Eigen::MatrixXd dist = squared_distances(points);
    std::vector<double> pairwise;
    pairwise.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index i = k + 1; i < m; ++i) pairwise.push_back(std::sqrt(dist(i, k)));
    }
    return width_from_median(median_of(pairwise));
}

WidthEstimate median_heuristic(std::span<const double> values) {
    const Eigen::Map<const Eigen::VectorXd> column(values.data(), static_cast<Eigen::Index>(values.size()));
    return median_heuristic(Eigen::MatrixXd(column));
}

KernelMatrix regression_label_matrix(const Labels& labels, Diagonal diagonal, std::optional<double> sigma) {
    if (labels.size() < 2) throw Error(ErrorKind::SampleSize, "regression label kernel needs at least 2 labels");
    const Eigen::Map<const Eigen::VectorXd> y(labels.values().data(), labels.size());
    const double width = sigma ? *sigma : median_heuristic(labels.values()).sigma;
    return gaussian_kernel_matrix(squared_distances(Eigen::MatrixXd(y)), width, diagonal);
}

std::string to_string(LabelKernelSpec::Variant variant) {
    switch (variant) {
        case LabelKernelSpec::Variant::Auto: return "auto";
        case LabelKernelSpec::Variant::Binary: return "binary";
        case LabelKernelSpec::Variant::Multiclass: return "multiclass";
        case LabelKernelSpec::Variant::RegressionRBF: return "regression_rbf";
        case LabelKernelSpec::Variant::Precomputed: return "precomputed";
    }
    return "auto";
}

LabelKernel build_label_kernel(const LabelKernelSpec& spec, const Labels& labels, Diagonal diagonal) {
    using Variant = LabelKernelSpec::Variant;
    Variant variant = spec.variant;
    if (variant == Variant::Auto) {
        switch (labels.type()) {
            case LabelType::Binary: variant = Variant::Binary; break;
            case LabelType::Multiclass: variant = Variant::Multiclass; break;
            case LabelType::Real: variant = Variant::RegressionRBF; break;
        }
    }

    switch (variant) {
        case Variant::Binary:
            return {binary_label_matrix(labels, diagonal), variant, std::nullopt};
        case Variant::Multiclass:
            return {multiclass_label_matrix(labels, diagonal), variant, std::nullopt};
        case Variant::RegressionRBF: {
            WidthEstimate width;
            if (spec.sigma) {
                require_sigma(*spec.sigma);
                width.sigma = *spec.sigma;
            } else {
                width = median_heuristic(labels.values());
            }
            return {regression_label_matrix(labels, diagonal, width.sigma), variant, width};
        }
        case Variant::Precomputed: {
            if (!spec.precomputed) throw Error(ErrorKind::Parameter, "precomputed label kernel has no matrix");
            if (spec.precomputed->rows() != labels.size()) {
                throw Error(ErrorKind::Shape, "precomputed label kernel size does not match label count");
            }
            return {KernelMatrix(*spec.precomputed, diagonal), variant, std::nullopt};
        }
        case Variant::Auto:
            break;
    }
    throw Error(ErrorKind::Parameter, "unresolved label kernel variant");
}

}  // namespace hsic
