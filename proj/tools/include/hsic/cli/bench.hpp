#pragma once

#include "hsic/data.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hsic::cli {

enum class DatasetKind { Xor, Multiclass, Regression };
std::string to_string(DatasetKind kind);
std::optional<DatasetKind> parse_dataset_kind(std::string_view text);

Dataset generate(DatasetKind kind, Eigen::Index samples, std::uint64_t seed);

enum class BenchMethod { Bahsic, Fohsic, Pearson, MutualInfo };
std::string to_string(BenchMethod method);
std::optional<BenchMethod> parse_bench_method(std::string_view text);

struct BenchmarkConfig {
    DatasetKind dataset = DatasetKind::Xor;
    std::vector<Eigen::Index> sizes{40, 80, 120, 160, 200, 240, 280, 320, 360, 400};
    int runs = 10;
    std::vector<BenchMethod> methods{BenchMethod::Bahsic, BenchMethod::Fohsic, BenchMethod::Pearson,
                                     BenchMethod::MutualInfo};
    std::vector<Eigen::Index> relevant{0, 1};
    std::uint64_t seed = 0;
    std::size_t jobs = 0;

    void validate() const;
};

enum class CellStatus { Ok, Failed, Skipped };
std::string to_string(CellStatus status);

struct BenchmarkCell {
    BenchMethod method = BenchMethod::Bahsic;
    Eigen::Index size = 0;
    CellStatus status = CellStatus::Ok;
    std::optional<double> median_rank;  // pooled over runs x relevant features
    std::vector<Eigen::Index> ranks;    // run-major, relevant features in order
    std::string note;
};

struct BenchmarkReport {
    BenchmarkConfig config;
    Eigen::Index dimensions = 0;
    std::vector<std::vector<std::uint64_t>> dataset_seeds;  // [size][run]
    std::vector<BenchmarkCell> cells;                       // size-major, methods in config order

    const BenchmarkCell& cell(BenchMethod method, Eigen::Index size) const;
};

// Seed of the dataset generated for (size, run); independent of which
// methods run or in what order.
std::uint64_t dataset_seed(std::uint64_t seed, Eigen::Index size, int run);

double median(std::vector<double> values);

BenchmarkReport run_benchmark(const BenchmarkConfig& config);

}  // namespace hsic::cli
