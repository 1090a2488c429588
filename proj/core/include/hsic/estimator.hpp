#pragma once

#include "hsic/data.hpp"
#include "hsic/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

namespace hsic {

enum class EstimatorMethod { Unbiased, Biased, UStatOracle };

std::string to_string(EstimatorMethod method);

struct HsicEstimate {
    double value = 0.0;
    std::optional<double> variance;  // asymptotic variance, >= 0
    Eigen::Index sample_size = 0;
    std::optional<double> p_value;
    EstimatorMethod method = EstimatorMethod::Unbiased;
};

enum class TestMode { Asymptotic, Permutation };

std::string to_string(TestMode mode);

struct SignificanceResult {
    double statistic = 0.0;
    double p_value = 1.0;
    TestMode mode = TestMode::Permutation;
    std::optional<int> permutations;
    std::optional<std::uint64_t> seed;
};

// Default size guards for the enumeration-based routines.
inline constexpr Eigen::Index kUStatOracleMaxSize = 12;
inline constexpr Eigen::Index kVarianceMaxSize = 200;

/// Unbiased HSIC from zero-diagonal kernel matrices:
///
///   [tr(KL) + 1'K1 1'L1 / ((m-1)(m-2)) - 2/(m-2) 1'KL1] / (m(m-3))
///
/// O(m^2). Requires m >= 4.
HsicEstimate hsic_unbiased(const KernelMatrix& K, const KernelMatrix& L);

/// The same estimator from its four sufficient sums over zero-diagonal
/// matrices: tr(KL), 1'K1, 1'L1 and 1'KL1.
double hsic_unbiased_from_sums(double trace_kl, double sum_k, double sum_l, double kl_cross, Eigen::Index m);

/// Brute-force U-statistic form: averages the order-4 kernel h over every
/// ordered 4-tuple of distinct indices, where h itself averages over the 24
/// orderings of the tuple. O(m^4 * 4!), test use only; refuses m > max_size.
HsicEstimate hsic_ustat_oracle(const KernelMatrix& K, const KernelMatrix& L,
                               Eigen::Index max_size = kUStatOracleMaxSize);

/// Biased HSIC tr(KHLH) / (m-1)^2 from full-diagonal matrices, with
/// H = I - 11'/m applied as row/column mean removal.
HsicEstimate hsic_biased(const KernelMatrix& K, const KernelMatrix& L);

/// Asymptotic variance (16/m)(R - HSIC^2) of the unbiased estimator, where
/// R averages the squared per-sample means of h over triples avoiding the
/// sample. Direct enumeration over all 4-subsets, O(m^4). Negative values
/// from rounding clamp to zero. Refuses m > max_size; use permutation_test
/// for larger samples.
double hsic_variance(const KernelMatrix& K, const KernelMatrix& L,
                     Eigen::Index max_size = kVarianceMaxSize);

/// hsic_unbiased with the variance attached.
HsicEstimate hsic_with_variance(const KernelMatrix& K, const KernelMatrix& L,
                                Eigen::Index max_size = kVarianceMaxSize);

/// Upper-tail standard normal probability 1 - Phi(z).
double normal_upper_tail(double z);

/// One-sided p-value 1 - Phi(value / sqrt(variance)). Throws Unavailable
/// when the variance is missing or zero.
SignificanceResult asymptotic_p_value(const HsicEstimate& estimate);

/// Permutation test of the unbiased HSIC between K and the label kernel.
/// Each of the `permutations` label reorderings comes from its own seeded
/// stream, so the p-value (1 + #{permuted >= observed}) / (B + 1) does not
/// depend on `jobs`.
SignificanceResult permutation_test(const KernelMatrix& K, const LabelKernelSpec& label_spec,
                                    const Labels& labels, int permutations, std::uint64_t seed,
                                    std::size_t jobs = 1);

/// Biased MMD between the two classes of a binary labelling:
/// mean K over (+,+) + mean K over (-,-) - 2 mean K over (+,-).
double mmd_statistic(const KernelMatrix& K, const Labels& labels);

/// Unnormalised kernel target alignment tr(KL).
double kta_unnormalized(const KernelMatrix& K, const KernelMatrix& L);

}  // namespace hsic
