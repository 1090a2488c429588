#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace hsic {

// Seeded generator used by every stochastic routine in the library.
//
// Version "hsic-rng-v1": std::mt19937_64 (whose output sequence is fixed by
// the C++ standard) seeded with splitmix64(seed) ^ splitmix64(stream + c).
// Uniform and normal variates are derived from the raw 64-bit output by hand,
// never through <random> distributions, whose algorithms are
// implementation-defined. Given (seed, stream) the sequence is identical on
// every conforming platform.
//
// Stream ids in use:
//   synth_xor 1, synth_multiclass 2, synth_regression 3,
//   permutation_test (1000 + b) for permutation b,
//   benchmark datasets are seeded with derive_seed(seed, size, run).
class Rng {
public:
    static constexpr const char* kVersion = "hsic-rng-v1";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via the Marsaglia polar method.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n), rejection sampled (unbiased).
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Mixes several integers into one seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

}  // namespace hsic
