#pragma once

#include "hsic/cli/bench.hpp"
#include "hsic/estimator.hpp"
#include "hsic/selection.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace hsic::cli {

// Bumped on any incompatible change to the documents below; see schema/.
inline constexpr const char* kSchemaVersion = "1.0";

struct HsicReport {
    std::string data_path;
    std::string label_column;
    LabelType label_type = LabelType::Real;
    Eigen::Index samples = 0;
    Eigen::Index dimensions = 0;
    std::string data_kernel;  // "gaussian" or "linear"
    std::optional<double> sigma;
    std::string sigma_source;  // "fixed", "median", "median_fallback"; empty for linear
    std::string label_kernel;
    bool normalized = true;
    double value = 0.0;
    TestMode mode = TestMode::Permutation;
    double p_value = 1.0;
    std::optional<double> variance;
    std::optional<int> permutations;
    std::optional<std::uint64_t> seed;
    std::string note;
};

nlohmann::ordered_json to_json(const HsicReport& report);
std::string to_text(const HsicReport& report);

nlohmann::ordered_json to_json(const FeatureRanking& ranking, const Dataset& data);
// Two columns: rank (1 = most relevant) and feature name.
std::string to_listing(const FeatureRanking& ranking, const Dataset& data);

nlohmann::ordered_json to_json(const BenchmarkReport& report);
// One row per (method, size): median rank or the failure marker.
std::string to_csv(const BenchmarkReport& report);

}  // namespace hsic::cli
