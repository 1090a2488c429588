#include "hsic/estimator.hpp"

#include "hsic/errors.hpp"
#include "hsic/parallel.hpp"
#include "hsic/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace hsic {

std::string to_string(EstimatorMethod method) {
    switch (method) {
        case EstimatorMethod::Unbiased: return "unbiased";
        case EstimatorMethod::Biased: return "biased";
        case EstimatorMethod::UStatOracle: return "ustat_oracle";
    }
    return "unbiased";
}

std::string to_string(TestMode mode) {
    return mode == TestMode::Asymptotic ? "asymptotic" : "permutation";
}

namespace {

void require_pair(const KernelMatrix& K, const KernelMatrix& L, Diagonal expected, Eigen::Index min_size,
                  const char* what) {
    if (K.size() != L.size()) {
        throw Error(ErrorKind::Shape, std::string(what) + ": kernel sizes differ (" + std::to_string(K.size()) +
                                          " vs " + std::to_string(L.size()) + ")");
    }
    if (K.diagonal() != expected || L.diagonal() != expected) {
        throw Error(ErrorKind::Convention, std::string(what) + " needs " +
                                               (expected == Diagonal::Zero ? "zero" : "full") +
                                               "-diagonal kernel matrices");
    }
    if (K.size() < min_size) {
        throw Error(ErrorKind::SampleSize, std::string(what) + " needs at least " + std::to_string(min_size) +
                                               " samples, got " + std::to_string(K.size()));
    }
}

}  // namespace

double hsic_unbiased_from_sums(double trace_kl, double sum_k, double sum_l, double kl_cross, Eigen::Index m) {
    const double md = static_cast<double>(m);
    return (trace_kl + sum_k * sum_l / ((md - 1.0) * (md - 2.0)) - 2.0 / (md - 2.0) * kl_cross) /
           (md * (md - 3.0));
}

HsicEstimate hsic_unbiased(const KernelMatrix& K, const KernelMatrix& L) {
    require_pair(K, L, Diagonal::Zero, 4, "hsic_unbiased");
    const auto& k = K.values();
    const auto& l = L.values();
    const Eigen::VectorXd k1 = k.rowwise().sum();
    const Eigen::VectorXd l1 = l.rowwise().sum();

    HsicEstimate out;
    out.value = hsic_unbiased_from_sums(k.cwiseProduct(l).sum(), k1.sum(), l1.sum(), k1.dot(l1), K.size());
    out.sample_size = K.size();
    out.method = EstimatorMethod::Unbiased;
    return out;
}

HsicEstimate hsic_ustat_oracle(const KernelMatrix& K, const KernelMatrix& L, Eigen::Index max_size) {
    require_pair(K, L, Diagonal::Zero, 4, "hsic_ustat_oracle");
    const Eigen::Index m = K.size();
    if (m > max_size) {
        throw Error(ErrorKind::Unavailable, "U-statistic oracle is limited to m <= " + std::to_string(max_size));
    }

    const auto& k = K.values();
    const auto& l = L.values();
    double total = 0.0;
    std::array<Eigen::Index, 4> tuple{};
    for (tuple[0] = 0; tuple[0] < m; ++tuple[0]) {
        for (tuple[1] = 0; tuple[1] < m; ++tuple[1]) {
            if (tuple[1] == tuple[0]) continue;
            for (tuple[2] = 0; tuple[2] < m; ++tuple[2]) {
                if (tuple[2] == tuple[0] || tuple[2] == tuple[1]) continue;
                for (tuple[3] = 0; tuple[3] < m; ++tuple[3]) {
                    if (tuple[3] == tuple[0] || tuple[3] == tuple[1] || tuple[3] == tuple[2]) continue;
                    std::array<int, 4> order{0, 1, 2, 3};
                    double h = 0.0;
                    do {
                        const auto s = tuple[static_cast<std::size_t>(order[0])];
                        const auto t = tuple[static_cast<std::size_t>(order[1])];
                        const auto u = tuple[static_cast<std::size_t>(order[2])];
                        const auto v = tuple[static_cast<std::size_t>(order[3])];
                        h += k(s, t) * l(s, t) + k(s, t) * l(u, v) - 2.0 * k(s, t) * l(s, u);
                    } while (std::next_permutation(order.begin(), order.end()));
                    total += h / 24.0;
                }
            }
        }
    }
    const double md = static_cast<double>(m);
    HsicEstimate out;
    out.value = total / (md * (md - 1.0) * (md - 2.0) * (md - 3.0));
    out.sample_size = m;
    out.method = EstimatorMethod::UStatOracle;
    return out;
}

HsicEstimate hsic_biased(const KernelMatrix& K, const KernelMatrix& L) {
    require_pair(K, L, Diagonal::Full, 2, "hsic_biased");
    const auto& k = K.values();
    const Eigen::Index m = K.size();
    const Eigen::VectorXd row_mean = k.rowwise().mean();
    const double grand_mean = row_mean.mean();

    // HKH_ij = K_ij - mean_i - mean_j + grand mean; tr(KHLH) = sum(HKH .* L).
    double trace = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            trace += (k(i, j) - row_mean(i) - row_mean(j) + grand_mean) * L(i, j);
        }
    }
    const double md1 = static_cast<double>(m - 1);
    HsicEstimate out;
    out.value = trace / (md1 * md1);
    out.sample_size = m;
    out.method = EstimatorMethod::Biased;
    return out;
}

double hsic_variance(const KernelMatrix& K, const KernelMatrix& L, Eigen::Index max_size) {
    require_pair(K, L, Diagonal::Zero, 4, "hsic_variance");
    const Eigen::Index m = K.size();
    if (m > max_size) {
        throw Error(ErrorKind::Unavailable, "exact variance is limited to m <= " + std::to_string(max_size) +
                                                "; use the permutation test for larger samples");
    }
    const auto& k = K.values();
    const auto& l = L.values();

    // h over the unordered set {a,b,c,d}, written out from the 24 orderings:
    //   24 h = 4 sum_p K_p L_p + 4 sum_p K_p L_comp(p)
    //          - 2 (sum_s rK_s rL_s - 2 sum_p K_p L_p)
    // where p runs over the 6 pairs and rK_s is the row sum of K inside the set.
    std::vector<double> per_sample(static_cast<std::size_t>(m), 0.0);
    double grand = 0.0;
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = a + 1; b < m; ++b) {
            const double kab = k(a, b), lab = l(a, b);
            for (Eigen::Index c = b + 1; c < m; ++c) {
                const double kac = k(a, c), lac = l(a, c), kbc = k(b, c), lbc = l(b, c);
                for (Eigen::Index d = c + 1; d < m; ++d) {
                    const double kad = k(a, d), lad = l(a, d);
                    const double kbd = k(b, d), lbd = l(b, d);
                    const double kcd = k(c, d), lcd = l(c, d);

                    const double matched =
                        kab * lab + kac * lac + kad * lad + kbc * lbc + kbd * lbd + kcd * lcd;
                    const double crossed =
                        kab * lcd + kcd * lab + kac * lbd + kbd * lac + kad * lbc + kbc * lad;
                    const double rka = kab + kac + kad, rla = lab + lac + lad;
                    const double rkb = kab + kbc + kbd, rlb = lab + lbc + lbd;
                    const double rkc = kac + kbc + kcd, rlc = lac + lbc + lcd;
                    const double rkd = kad + kbd + kcd, rld = lad + lbd + lcd;
                    const double triples = rka * rla + rkb * rlb + rkc * rlc + rkd * rld - 2.0 * matched;

                    const double h = (4.0 * matched + 4.0 * crossed - 2.0 * triples) / 24.0;
                    per_sample[static_cast<std::size_t>(a)] += h;
                    per_sample[static_cast<std::size_t>(b)] += h;
                    per_sample[static_cast<std::size_t>(c)] += h;
                    per_sample[static_cast<std::size_t>(d)] += h;
                    grand += h;
                }
            }
        }
    }

    const double md = static_cast<double>(m);
    const double subsets = md * (md - 1.0) * (md - 2.0) * (md - 3.0) / 24.0;
    const double subsets_with_i = (md - 1.0) * (md - 2.0) * (md - 3.0) / 6.0;
    const double hsic = grand / subsets;
    double r = 0.0;
    for (double s : per_sample) {
        const double mean_h = s / subsets_with_i;
        r += mean_h * mean_h;
    }
    r /= md;
    return std::max(0.0, 16.0 / md * (r - hsic * hsic));
}

HsicEstimate hsic_with_variance(const KernelMatrix& K, const KernelMatrix& L, Eigen::Index max_size) {
    HsicEstimate out = hsic_unbiased(K, L);
    out.variance = hsic_variance(K, L, max_size);
    return out;
}

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

SignificanceResult asymptotic_p_value(const HsicEstimate& estimate) {
    if (!estimate.variance) throw Error(ErrorKind::Unavailable, "estimate carries no variance");
    if (!(*estimate.variance > 0.0)) {
        throw Error(ErrorKind::Unavailable, "asymptotic variance is zero; p-value unavailable");
    }
    SignificanceResult out;
    out.statistic = estimate.value;
    out.p_value = std::clamp(normal_upper_tail(estimate.value / std::sqrt(*estimate.variance)), 0.0, 1.0);
    out.mode = TestMode::Asymptotic;
    return out;
}

SignificanceResult permutation_test(const KernelMatrix& K, const LabelKernelSpec& label_spec,
                                    const Labels& labels, int permutations, std::uint64_t seed,
                                    std::size_t jobs) {
    if (permutations < 19) {
        throw Error(ErrorKind::Parameter, "permutation test needs at least 19 permutations");
    }
    if (labels.size() != K.size()) throw Error(ErrorKind::Shape, "label count does not match kernel size");
    if (K.size() < 4) throw Error(ErrorKind::SampleSize, "permutation test needs at least 4 samples");

    const KernelMatrix k_zero = K.diagonal() == Diagonal::Zero ? K : K.with_zero_diagonal();
    const KernelMatrix l_zero = build_label_kernel(label_spec, labels, Diagonal::Zero).matrix;
    const auto& k = k_zero.values();
    const auto& l = l_zero.values();
    const Eigen::Index m = K.size();

    const Eigen::VectorXd k1 = k.rowwise().sum();
    const Eigen::VectorXd l1 = l.rowwise().sum();
    const double sum_k = k1.sum();
    const double sum_l = l1.sum();
    const double observed = hsic_unbiased_from_sums(k.cwiseProduct(l).sum(), sum_k, sum_l, k1.dot(l1), m);

    std::vector<double> permuted(static_cast<std::size_t>(permutations));
    parallel_for(permuted.size(), jobs, [&](std::size_t b) {
        Rng rng(seed, 1000 + b);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        rng.shuffle(std::span<Eigen::Index>(order));

        // L permuted to L(order[i], order[j]); its row sums are l1(order[i]).
        double trace = 0.0;
        double cross = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            const Eigen::Index pj = order[static_cast<std::size_t>(j)];
            for (Eigen::Index i = 0; i < m; ++i) {
                trace += k(i, j) * l(order[static_cast<std::size_t>(i)], pj);
            }
            cross += k1(j) * l1(pj);
        }
        permuted[b] = hsic_unbiased_from_sums(trace, sum_k, sum_l, cross, m);
    });

    const auto exceed = std::count_if(permuted.begin(), permuted.end(), [&](double v) { return v >= observed; });
    SignificanceResult out;
    out.statistic = observed;
    out.p_value = static_cast<double>(1 + exceed) / static_cast<double>(permutations + 1);
    out.mode = TestMode::Permutation;
    out.permutations = permutations;
    out.seed = seed;
    return out;
}

double mmd_statistic(const KernelMatrix& K, const Labels& labels) {
    if (K.diagonal() != Diagonal::Full) throw Error(ErrorKind::Convention, "mmd_statistic needs a full-diagonal kernel");
    if (labels.size() != K.size()) throw Error(ErrorKind::Shape, "label count does not match kernel size");
    if (labels.type() != LabelType::Binary) throw Error(ErrorKind::DegenerateLabels, "MMD needs binary labels");

    double pp = 0.0, nn = 0.0, pn = 0.0;
    double positives = 0.0, negatives = 0.0;
    const Eigen::Index m = K.size();
    for (Eigen::Index i = 0; i < m; ++i) {
        (labels[i] > 0 ? positives : negatives) += 1.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            const bool pi = labels[i] > 0, pj = labels[j] > 0;
            if (pi && pj) {
                pp += K(i, j);
            } else if (!pi && !pj) {
                nn += K(i, j);
            } else if (pi) {
                pn += K(i, j);
            }
        }
    }
    if (positives == 0.0 || negatives == 0.0) {
        throw Error(ErrorKind::DegenerateLabels, "MMD needs samples from both classes");
    }
    return pp / (positives * positives) + nn / (negatives * negatives) - 2.0 * pn / (positives * negatives);
}

double kta_unnormalized(const KernelMatrix& K, const KernelMatrix& L) {
    require_pair(K, L, Diagonal::Full, 1, "kta_unnormalized");
    return K.values().cwiseProduct(L.values()).sum();
}

}  // namespace hsic
