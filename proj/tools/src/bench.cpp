#include "hsic/cli/bench.hpp"

#include "hsic/baselines.hpp"
#include "hsic/errors.hpp"
#include "hsic/parallel.hpp"
#include "hsic/rng.hpp"
#include "hsic/selection.hpp"

#include <algorithm>
#include <set>

namespace hsic::cli {

std::string to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::Xor: return "xor";
        case DatasetKind::Multiclass: return "multiclass";
        case DatasetKind::Regression: return "regression";
    }
    return "unknown";
}

std::optional<DatasetKind> parse_dataset_kind(std::string_view text) {
    if (text == "xor") return DatasetKind::Xor;
    if (text == "multiclass") return DatasetKind::Multiclass;
    if (text == "regression") return DatasetKind::Regression;
    return std::nullopt;
}

Dataset generate(DatasetKind kind, Eigen::Index samples, std::uint64_t seed) {
    switch (kind) {
        case DatasetKind::Xor: return synth_xor(samples, seed);
        case DatasetKind::Multiclass: return synth_multiclass(samples, seed);
        case DatasetKind::Regression: return synth_regression(samples, seed);
    }
    throw Error(ErrorKind::Parameter, "unknown dataset kind");
}

std::string to_string(BenchMethod method) {
    switch (method) {
        case BenchMethod::Bahsic: return "bahsic";
        case BenchMethod::Fohsic: return "fohsic";
        case BenchMethod::Pearson: return "pearson";
        case BenchMethod::MutualInfo: return "mi";
    }
    return "unknown";
}

std::optional<BenchMethod> parse_bench_method(std::string_view text) {
    if (text == "bahsic") return BenchMethod::Bahsic;
    if (text == "fohsic") return BenchMethod::Fohsic;
    if (text == "pearson") return BenchMethod::Pearson;
    if (text == "mi") return BenchMethod::MutualInfo;
    return std::nullopt;
}

std::string to_string(CellStatus status) {
    switch (status) {
        case CellStatus::Ok: return "ok";
        case CellStatus::Failed: return "failed";
        case CellStatus::Skipped: return "skipped";
    }
    return "unknown";
}

void BenchmarkConfig::validate() const {
    if (sizes.empty()) throw Error(ErrorKind::Parameter, "at least one sample size is required");
    if (runs < 1) throw Error(ErrorKind::Parameter, "runs must be at least 1");
    if (methods.empty()) throw Error(ErrorKind::Parameter, "at least one method is required");
    if (relevant.empty()) throw Error(ErrorKind::Parameter, "no relevant features given");
    if (std::set<BenchMethod>(methods.begin(), methods.end()).size() != methods.size())
        throw Error(ErrorKind::Parameter, "duplicate method");
    for (auto m : sizes)
        if (m < 4) throw Error(ErrorKind::SampleSize, "sample size " + std::to_string(m) + " is below 4");
}

const BenchmarkCell& BenchmarkReport::cell(BenchMethod method, Eigen::Index size) const {
    for (const auto& c : cells)
        if (c.method == method && c.size == size) return c;
    throw Error(ErrorKind::Index, "no cell for " + to_string(method) + " at size " + std::to_string(size));
}

std::uint64_t dataset_seed(std::uint64_t seed, Eigen::Index size, int run) {
    return derive_seed(seed, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(run));
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorKind::Parameter, "median of an empty set");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

struct MethodOutcome {
    CellStatus status = CellStatus::Ok;
    std::vector<Eigen::Index> ranks;
    std::string note;
};

MethodOutcome run_method(BenchMethod method, const Dataset& data, const std::vector<Eigen::Index>& relevant) {
    MethodOutcome out;
    try {
        if (method == BenchMethod::Bahsic || method == BenchMethod::Fohsic) {
            SelectionConfig config;
            config.method = method == BenchMethod::Bahsic ? SelectionMethod::Backward : SelectionMethod::Forward;
            const auto ranking = select_features(data, config);
            for (auto f : relevant) out.ranks.push_back(ranking.rank_of(f));
        } else {
            const auto scores = method == BenchMethod::Pearson ? pearson_rank(data) : mutual_info_rank(data);
            for (auto f : relevant) out.ranks.push_back(scores.rank_of(f));
        }
    } catch (const Error& e) {
        out.status = e.kind() == ErrorKind::Convention ? CellStatus::Skipped : CellStatus::Failed;
        out.note = e.what();
        out.ranks.clear();
    }
    return out;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    config.validate();
    BenchmarkReport report;
    report.config = config;

    const auto n_sizes = config.sizes.size();
    const auto n_runs = static_cast<std::size_t>(config.runs);
    const auto n_methods = config.methods.size();
    report.dataset_seeds.assign(n_sizes, std::vector<std::uint64_t>(n_runs));
    for (std::size_t s = 0; s < n_sizes; ++s)
        for (std::size_t r = 0; r < n_runs; ++r)
            report.dataset_seeds[s][r] = dataset_seed(config.seed, config.sizes[s], static_cast<int>(r));

    // One work item per (size, run, method); each writes only its own slot.
    std::vector<MethodOutcome> outcomes(n_sizes * n_runs * n_methods);
    std::vector<Eigen::Index> dims(n_sizes * n_runs, 0);
    parallel_for(n_sizes * n_runs * n_methods, config.jobs, [&](std::size_t item) {
        const auto method_index = item % n_methods;
        const auto run = (item / n_methods) % n_runs;
        const auto size_index = item / (n_methods * n_runs);
        try {
            const auto data =
                generate(config.dataset, config.sizes[size_index], report.dataset_seeds[size_index][run]);
            for (auto f : config.relevant)
                if (f >= data.dimensions()) throw Error(ErrorKind::Index, "relevant feature out of range");
            if (method_index == 0) dims[size_index * n_runs + run] = data.dimensions();
            outcomes[item] = run_method(config.methods[method_index], data, config.relevant);
        } catch (const Error& e) {
            outcomes[item] = {CellStatus::Failed, {}, e.what()};
        }
    });
    report.dimensions = *std::max_element(dims.begin(), dims.end());

    for (std::size_t s = 0; s < n_sizes; ++s) {
        for (std::size_t k = 0; k < n_methods; ++k) {
            BenchmarkCell cell;
            cell.method = config.methods[k];
            cell.size = config.sizes[s];
            std::vector<double> pooled;
            for (std::size_t r = 0; r < n_runs; ++r) {
                const auto& o = outcomes[(s * n_runs + r) * n_methods + k];
                if (o.status != CellStatus::Ok) {
                    cell.status = o.status;
                    cell.note = "run " + std::to_string(r) + ": " + o.note;
                    break;
                }
                for (auto rank : o.ranks) {
                    cell.ranks.push_back(rank);
                    pooled.push_back(static_cast<double>(rank));
                }
            }
            if (cell.status == CellStatus::Ok) {
                cell.median_rank = median(pooled);
            } else {
                cell.ranks.clear();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

}  // namespace hsic::cli
