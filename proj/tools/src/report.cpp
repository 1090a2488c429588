#include "hsic/cli/report.hpp"

#include <charconv>
#include <sstream>

namespace hsic::cli {

using json = nlohmann::ordered_json;

namespace {

std::string format_number(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return {buffer, result.ptr};
}

json optional_number(const std::optional<double>& value) { return value ? json(*value) : json(nullptr); }

}  // namespace

json to_json(const HsicReport& r) {
    json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "hsic";
    out["data"] = {{"path", r.data_path},
                   {"label_column", r.label_column},
                   {"label_type", to_string(r.label_type)},
                   {"samples", r.samples},
                   {"dimensions", r.dimensions}};
    out["kernel"] = {{"data", r.data_kernel},
                     {"sigma", optional_number(r.sigma)},
                     {"sigma_source", r.sigma_source.empty() ? json(nullptr) : json(r.sigma_source)},
                     {"label", r.label_kernel},
                     {"normalized", r.normalized}};
    out["hsic"] = r.value;
    out["test"] = {{"mode", to_string(r.mode)},
                   {"p_value", r.p_value},
                   {"variance", optional_number(r.variance)},
                   {"permutations", r.permutations ? json(*r.permutations) : json(nullptr)},
                   {"seed", r.seed ? json(*r.seed) : json(nullptr)}};
    out["note"] = r.note.empty() ? json(nullptr) : json(r.note);
    return out;
}

std::string to_text(const HsicReport& r) {
    std::ostringstream os;
    os << "hsic      " << format_number(r.value) << '\n';
    os << "samples   " << r.samples << '\n';
    os << "sigma     " << (r.sigma ? format_number(*r.sigma) + " (" + r.sigma_source + ")" : "n/a (linear)")
       << '\n';
    os << "p-value   " << format_number(r.p_value) << " (" << to_string(r.mode);
    if (r.permutations) os << ", B=" << *r.permutations << ", seed=" << *r.seed;
    os << ")\n";
    if (!r.note.empty()) os << "note      " << r.note << '\n';
    return os.str();
}

json to_json(const FeatureRanking& ranking, const Dataset& data) {
    const auto name = [&](Eigen::Index f) { return data.feature_names[static_cast<std::size_t>(f)]; };
    const auto& config = ranking.config;

    json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "ranking";

    json echo;
    echo["method"] = to_string(config.method);
    echo["data_kernel"] = to_string(config.data_kernel.kind);
    echo["data_sigma"] =
        config.data_kernel.kind == DataKernel::Kind::GaussianFixed ? json(config.data_kernel.sigma) : json(nullptr);
    echo["label_kernel"] = to_string(ranking.label_kernel);
    echo["label_sigma"] = ranking.label_width ? json(ranking.label_width->sigma) : json(nullptr);
    echo["elimination_fraction"] = config.elimination_fraction;
    echo["num_features"] = config.target_count ? json(*config.target_count) : json(nullptr);
    echo["normalize"] = config.normalize;
    echo["seed"] = config.seed;
    out["config"] = echo;

    out["data"] = {{"source", data.provenance},
                   {"samples", data.samples()},
                   {"dimensions", data.dimensions()},
                   {"label_type", to_string(data.labels.type())}};

    json ordering = json::array();
    Eigen::Index rank = 1;
    for (auto f : ranking.most_relevant_first()) ordering.push_back({{"rank", rank++}, {"feature", f}, {"name", name(f)}});
    out["ordering"] = ordering;

    json selected = json::array();
    for (auto f : ranking.selected) selected.push_back(f);
    out["selected"] = selected;

    json rounds = json::array();
    for (const auto& round : ranking.rounds) {
        json scores = json::array();
        for (const auto& s : round.scores) scores.push_back({{"feature", s.feature}, {"score", s.score}});
        json moved = json::array();
        for (auto f : round.moved) moved.push_back(f);
        rounds.push_back({{"active_count", round.active_count},
                          {"sigma", optional_number(round.sigma)},
                          {"scores", scores},
                          {"moved", moved}});
    }
    out["rounds"] = rounds;

    json diagnostics = json::array();
    for (const auto& d : ranking.diagnostics) diagnostics.push_back(d);
    out["diagnostics"] = diagnostics;
    return out;
}

std::string to_listing(const FeatureRanking& ranking, const Dataset& data) {
    std::ostringstream os;
    os << "rank\tfeature\n";
    Eigen::Index rank = 1;
    for (auto f : ranking.most_relevant_first())
        os << rank++ << '\t' << data.feature_names[static_cast<std::size_t>(f)] << '\n';
    return os.str();
}

json to_json(const BenchmarkReport& report) {
    const auto& config = report.config;
    json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "benchmark";
    json methods = json::array();
    for (auto m : config.methods) methods.push_back(to_string(m));
    out["config"] = {{"dataset", to_string(config.dataset)},
                     {"sizes", config.sizes},
                     {"runs", config.runs},
                     {"methods", methods},
                     {"relevant_features", config.relevant},
                     {"seed", config.seed}};
    out["dimensions"] = report.dimensions;

    json seeds = json::array();
    for (std::size_t s = 0; s < config.sizes.size(); ++s)
        seeds.push_back({{"size", config.sizes[s]}, {"dataset_seeds", report.dataset_seeds[s]}});
    out["seeds"] = seeds;

    json cells = json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"method", to_string(c.method)},
                         {"size", c.size},
                         {"status", to_string(c.status)},
                         {"median_rank", optional_number(c.median_rank)},
                         {"ranks", c.ranks},
                         {"note", c.note.empty() ? json(nullptr) : json(c.note)}});
    }
    out["cells"] = cells;
    return out;
}

std::string to_csv(const BenchmarkReport& report) {
    std::ostringstream os;
    os << "method,size,median_rank,status\n";
    for (const auto& c : report.cells) {
        os << to_string(c.method) << ',' << c.size << ',';
        if (c.median_rank) os << format_number(*c.median_rank);
        os << ',' << to_string(c.status) << '\n';
    }
    return os.str();
}

}  // namespace hsic::cli
