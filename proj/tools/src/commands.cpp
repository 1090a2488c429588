#include "hsic/cli/commands.hpp"

#include "hsic/cli/bench.hpp"
#include "hsic/estimator.hpp"
#include "hsic/kernels.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace hsic::cli {

std::uint64_t default_seed() {
    const char* raw = std::getenv("HSIC_SEED");
    if (raw == nullptr || *raw == '\0') return kDefaultSeed;
    const std::string_view text(raw);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(ErrorKind::Input, "HSIC_SEED must be an unsigned 64-bit integer, got '" + std::string(text) + "'");
    return seed;
}

int exit_code_for(const Error& error) {
    return error.kind() == ErrorKind::SampleSize ? kExitDataShape : kExitUsage;
}

namespace {

Dataset load(const std::string& path, const std::string& label_column, std::optional<LabelType> type) {
    auto data = load_csv(path, label_column, type);
    if (data.samples() < 4) {
        throw Error(ErrorKind::SampleSize,
                    path + ": " + std::to_string(data.samples()) + " samples, at least 4 are required");
    }
    return data;
}

bool constant(const Labels& labels) {
    const auto& v = labels.values();
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
    out << contents;
    if (!out) throw Error(ErrorKind::Input, "failed writing " + path);
}

}  // namespace

HsicReport compute_hsic(const HsicOptions& options) {
    if (options.kernel != "gaussian" && options.kernel != "linear")
        throw Error(ErrorKind::Parameter, "unknown kernel '" + options.kernel + "'");
    if (options.sigma && !(*options.sigma > 0.0)) throw Error(ErrorKind::Parameter, "--sigma must be positive");

    auto data = load(options.data, options.label_column, options.label_type);
    data.validate();

    HsicReport report;
    report.data_path = options.data;
    report.label_column = options.label_column;
    report.label_type = data.labels.type();
    report.samples = data.samples();
    report.dimensions = data.dimensions();
    report.data_kernel = options.kernel;
    report.normalized = options.normalize;
    report.mode = options.mode;

    if (options.normalize) data = zscore_normalize(data);

    KernelMatrix K = [&] {
        if (options.kernel == "linear") return linear_kernel_matrix(data.features, Diagonal::Zero);
        if (options.sigma) {
            report.sigma = *options.sigma;
            report.sigma_source = "fixed";
        } else {
            const auto width = median_heuristic(data.features);
            report.sigma = width.sigma;
            report.sigma_source = width.fallback ? "median_fallback" : "median";
        }
        return gaussian_kernel_matrix(squared_distances(data.features), *report.sigma, Diagonal::Zero);
    }();

    if (options.mode == TestMode::Permutation) {
        report.permutations = options.permutations;
        report.seed = options.seed;
    }

    if (constant(data.labels)) {
        // A constant label kernel annihilates HSIC exactly; no test is needed.
        report.label_kernel = "constant";
        report.value = 0.0;
        report.p_value = 1.0;
        report.note = "constant labels";
        return report;
    }

    const LabelKernelSpec spec;
    const auto L = build_label_kernel(spec, data.labels, Diagonal::Zero);
    report.label_kernel = to_string(L.variant);

    if (options.mode == TestMode::Permutation) {
        const auto test = permutation_test(K, spec, data.labels, options.permutations, options.seed, options.jobs);
        report.value = test.statistic;
        report.p_value = test.p_value;
    } else {
        const auto estimate = hsic_with_variance(K, L.matrix);
        report.value = estimate.value;
        report.variance = estimate.variance;
        report.p_value = asymptotic_p_value(estimate).p_value;
    }
    return report;
}

SelectResult compute_selection(const SelectOptions& options) {
    auto data = load(options.data, options.label_column, options.label_type);

    SelectionConfig config;
    config.method = options.method;
    if (options.kernel == "linear") {
        if (options.sigma) throw Error(ErrorKind::Parameter, "--sigma applies to the gaussian kernel only");
        config.data_kernel = DataKernel::linear();
    } else if (options.kernel == "gaussian") {
        config.data_kernel = options.sigma ? DataKernel::gaussian_fixed(*options.sigma) : DataKernel::gaussian_adaptive();
    } else {
        throw Error(ErrorKind::Parameter, "unknown kernel '" + options.kernel + "'");
    }
    config.elimination_fraction = options.fraction;
    config.target_count = options.num_features;
    config.normalize = options.normalize;
    config.seed = options.seed;
    config.jobs = options.jobs;

    auto ranking = select_features(data, config);
    return {std::move(data), std::move(ranking)};
}

namespace {

void add_data_flags(CLI::App& cmd, std::string& data, std::string& label_column, std::string& label_type) {
    cmd.add_option("--data", data, "Input CSV file")->required();
    cmd.add_option("--label-col", label_column, "Name of the label column")->capture_default_str();
    cmd.add_option("--label-type", label_type, "Override label type inference")
        ->check(CLI::IsMember({"binary", "multiclass", "real"}));
}

std::optional<LabelType> label_type_from(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return parse_label_type(text);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel dependence measurement and HSIC feature selection"};
    app.name("hsic");
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    try {
        seed = default_seed();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    // hsic
    HsicOptions h;
    h.seed = seed;
    std::string h_label_type;
    std::string h_test = "permutation";
    bool h_json = false;
    bool h_no_normalize = false;
    auto* hsic_cmd = app.add_subcommand("hsic", "Measure HSIC between features and labels with a significance test");
    add_data_flags(*hsic_cmd, h.data, h.label_column, h_label_type);
    hsic_cmd->add_option("--test", h_test, "Significance test")
        ->check(CLI::IsMember({"permutation", "asymptotic"}))
        ->capture_default_str();
    hsic_cmd->add_option("--perms", h.permutations, "Permutations for the permutation test")
        ->check(CLI::Range(19, 1000000))
        ->capture_default_str();
    hsic_cmd->add_option("--seed", h.seed, "Permutation seed (default: $HSIC_SEED or 0)");
    hsic_cmd->add_option("--kernel", h.kernel, "Data kernel")
        ->check(CLI::IsMember({"gaussian", "linear"}))
        ->capture_default_str();
    hsic_cmd->add_option("--sigma", h.sigma, "Gaussian width in exp(-sigma*d^2); median heuristic if omitted");
    hsic_cmd->add_flag("--no-normalize", h_no_normalize, "Skip per-feature z-scoring");
    hsic_cmd->add_option("--jobs", h.jobs, "Worker threads (0 = all)")->capture_default_str();
    hsic_cmd->add_flag("--json", h_json, "Print a JSON document instead of text");

    // select
    SelectOptions s;
    s.seed = seed;
    std::string s_label_type;
    std::string s_method = "bahsic";
    std::string s_out;
    std::string s_listing;
    bool s_no_normalize = false;
    Eigen::Index s_num = 0;
    auto* select_cmd = app.add_subcommand("select", "Rank features with BAHSIC or FOHSIC");
    add_data_flags(*select_cmd, s.data, s.label_column, s_label_type);
    select_cmd->add_option("--method", s_method, "Selection method")
        ->check(CLI::IsMember({"bahsic", "fohsic"}))
        ->capture_default_str();
    auto* num_opt = select_cmd->add_option("--num-features", s_num, "Size of the selected subset")
                        ->check(CLI::PositiveNumber);
    select_cmd->add_option("--kernel", s.kernel, "Data kernel")
        ->check(CLI::IsMember({"gaussian", "linear"}))
        ->capture_default_str();
    select_cmd->add_option("--sigma", s.sigma, "Fixed Gaussian width; default 1/(2*dim) per round");
    select_cmd->add_option("--fraction", s.fraction, "Fraction of features moved per round")->capture_default_str();
    select_cmd->add_flag("--no-normalize", s_no_normalize, "Skip per-feature z-scoring");
    select_cmd->add_option("--seed", s.seed, "Recorded seed (default: $HSIC_SEED or 0)");
    select_cmd->add_option("--jobs", s.jobs, "Worker threads (0 = all)")->capture_default_str();
    select_cmd->add_option("--out", s_out, "Write the ranking JSON document here");
    select_cmd->add_option("--listing", s_listing, "Write the rank/feature listing here instead of stdout");

    // synth
    std::string y_dataset;
    Eigen::Index y_samples = 0;
    std::uint64_t y_seed = seed;
    std::string y_out;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset as CSV");
    synth_cmd->add_option("--dataset", y_dataset, "Dataset kind")
        ->required()
        ->check(CLI::IsMember({"xor", "multiclass", "regression"}));
    synth_cmd->add_option("--samples", y_samples, "Number of samples")->required();
    synth_cmd->add_option("--seed", y_seed, "Generator seed (default: $HSIC_SEED or 0)");
    synth_cmd->add_option("--out", y_out, "Output CSV path")->required();

    // bench
    BenchmarkConfig b;
    b.seed = seed;
    std::string b_dataset = "xor";
    std::vector<std::string> b_methods;
    std::string b_out;
    std::string b_csv;
    auto* bench_cmd = app.add_subcommand("bench", "Median rank of the relevant features across sample sizes");
    bench_cmd->add_option("--dataset", b_dataset, "Dataset kind")
        ->check(CLI::IsMember({"xor", "multiclass", "regression"}))
        ->capture_default_str();
    bench_cmd->add_option("--sizes", b.sizes, "Comma-separated sample sizes")->delimiter(',');
    bench_cmd->add_option("--runs", b.runs, "Runs per size")->capture_default_str();
    bench_cmd->add_option("--methods", b_methods, "Comma-separated subset of bahsic,fohsic,pearson,mi")
        ->delimiter(',');
    bench_cmd->add_option("--seed", b.seed, "Base seed (default: $HSIC_SEED or 0)");
    bench_cmd->add_option("--jobs", b.jobs, "Concurrent cells (0 = all)")->capture_default_str();
    bench_cmd->add_option("--out", b_out, "Write the benchmark JSON document here");
    bench_cmd->add_option("--csv", b_csv, "Write the median-rank table here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*hsic_cmd) {
            h.label_type = label_type_from(h_label_type);
            h.mode = h_test == "asymptotic" ? TestMode::Asymptotic : TestMode::Permutation;
            h.normalize = !h_no_normalize;
            const auto report = compute_hsic(h);
            if (h_json) {
                out << to_json(report).dump(2) << '\n';
            } else {
                out << to_text(report);
            }
        } else if (*select_cmd) {
            s.label_type = label_type_from(s_label_type);
            s.method = *parse_selection_method(s_method);
            if (*num_opt) s.num_features = s_num;
            s.normalize = !s_no_normalize;
            const auto result = compute_selection(s);
            if (!s_out.empty()) write_file(s_out, to_json(result.ranking, result.data).dump(2) + "\n");
            const auto listing = to_listing(result.ranking, result.data);
            if (s_listing.empty()) {
                out << listing;
            } else {
                write_file(s_listing, listing);
            }
            for (const auto& d : result.ranking.diagnostics) err << "note: " << d << '\n';
        } else if (*synth_cmd) {
            const auto data = generate(*parse_dataset_kind(y_dataset), y_samples, y_seed);
            save_csv(data, y_out, "y");
        } else if (*bench_cmd) {
            b.dataset = *parse_dataset_kind(b_dataset);
            if (!b_methods.empty()) {
                b.methods.clear();
                for (const auto& name : b_methods) {
                    const auto method = parse_bench_method(name);
                    if (!method) throw Error(ErrorKind::Input, "unknown method '" + name + "'");
                    b.methods.push_back(*method);
                }
            }
            const auto report = run_benchmark(b);
            if (!b_out.empty()) write_file(b_out, to_json(report).dump(2) + "\n");
            if (b_csv.empty()) {
                out << to_csv(report);
            } else {
                write_file(b_csv, to_csv(report));
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace hsic::cli
