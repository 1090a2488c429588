#pragma once

#include "hsic/cli/report.hpp"
#include "hsic/data.hpp"
#include "hsic/errors.hpp"
#include "hsic/selection.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hsic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDataShape = 3;

inline constexpr std::uint64_t kDefaultSeed = 0;

// kDefaultSeed unless HSIC_SEED holds a decimal unsigned 64-bit integer.
std::uint64_t default_seed();

int exit_code_for(const Error& error);

struct HsicOptions {
    std::string data;
    std::string label_column = "y";
    std::optional<LabelType> label_type;
    TestMode mode = TestMode::Permutation;
    int permutations = 999;
    std::uint64_t seed = kDefaultSeed;
    std::string kernel = "gaussian";
    std::optional<double> sigma;
    bool normalize = true;
    std::size_t jobs = 1;
};

HsicReport compute_hsic(const HsicOptions& options);

struct SelectOptions {
    std::string data;
    std::string label_column = "y";
    std::optional<LabelType> label_type;
    SelectionMethod method = SelectionMethod::Backward;
    std::optional<Eigen::Index> num_features;
    std::string kernel = "gaussian";
    std::optional<double> sigma;
    double fraction = 0.1;
    bool normalize = true;
    std::uint64_t seed = kDefaultSeed;
    std::size_t jobs = 1;
};

struct SelectResult {
    Dataset data;
    FeatureRanking ranking;
};

SelectResult compute_selection(const SelectOptions& options);

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsic::cli
