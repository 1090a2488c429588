#include "hsic/data.hpp"

#include "hsic/errors.hpp"
#include "hsic/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hsic {

std::string to_string(LabelType type) {
    switch (type) {
        case LabelType::Binary: return "binary";
        case LabelType::Multiclass: return "multiclass";
        case LabelType::Real: return "real";
    }
    return "real";
}

std::optional<LabelType> parse_label_type(std::string_view text) {
    if (text == "binary") return LabelType::Binary;
    if (text == "multiclass") return LabelType::Multiclass;
    if (text == "real") return LabelType::Real;
    return std::nullopt;
}

Labels Labels::binary(std::vector<int> signs) {
    Labels out;
    out.type_ = LabelType::Binary;
    out.class_count_ = 2;
    out.values_.reserve(signs.size());
    for (int s : signs) {
        if (s != 1 && s != -1) {
            throw Error(ErrorKind::Parameter, "binary labels must be -1 or +1, got " + std::to_string(s));
        }
        out.values_.push_back(static_cast<double>(s));
    }
    return out;
}

Labels Labels::multiclass(std::vector<int> class_ids) {
    Labels out;
    out.type_ = LabelType::Multiclass;
    int max_id = -1;
    out.values_.reserve(class_ids.size());
    for (int c : class_ids) {
        if (c < 0) throw Error(ErrorKind::Parameter, "class ids must be non-negative");
        max_id = std::max(max_id, c);
        out.values_.push_back(static_cast<double>(c));
    }
    out.class_count_ = max_id + 1;
    return out;
}

Labels Labels::real(std::vector<double> values) {
    Labels out;
    out.type_ = LabelType::Real;
    out.values_ = std::move(values);
    return out;
}

std::vector<int> Labels::as_ints() const {
    std::vector<int> out;
    out.reserve(values_.size());
    for (double v : values_) out.push_back(static_cast<int>(std::lround(v)));
    return out;
}

Labels Labels::reordered(const std::vector<Eigen::Index>& order) const {
    Labels out = *this;
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.values_[i] = values_[static_cast<std::size_t>(order[i])];
    }
    return out;
}

void Dataset::validate() const {
    if (features.rows() < 1) throw Error(ErrorKind::SampleSize, "dataset has no samples");
    if (labels.size() != features.rows()) {
        throw Error(ErrorKind::Shape, "label count " + std::to_string(labels.size()) +
                                          " does not match sample count " +
                                          std::to_string(features.rows()));
    }
    if (static_cast<Eigen::Index>(feature_names.size()) != features.cols()) {
        throw Error(ErrorKind::Shape, "feature name count does not match feature count");
    }
    if (!features.allFinite()) throw Error(ErrorKind::Input, "feature matrix has non-finite values");
    for (double v : labels.values()) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Input, "labels contain non-finite values");
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 1e9; }

Labels type_labels(const std::vector<double>& raw, std::optional<LabelType> forced) {
    const std::set<double> distinct(raw.begin(), raw.end());
    const bool all_int = std::all_of(distinct.begin(), distinct.end(), is_integer);

    LabelType type = LabelType::Real;
    if (forced) {
        type = *forced;
    } else if (distinct.size() == 2) {
        type = LabelType::Binary;
    } else if (distinct.size() > 2 && distinct.size() <= 20 && all_int) {
        type = LabelType::Multiclass;
    }

    switch (type) {
        case LabelType::Binary: {
            if (distinct.size() != 2) {
                throw Error(ErrorKind::Input, "binary labels need exactly two distinct values, found " +
                                                  std::to_string(distinct.size()));
            }
            const double low = *distinct.begin();
            std::vector<int> signs;
            signs.reserve(raw.size());
            for (double v : raw) signs.push_back(v == low ? -1 : 1);
            return Labels::binary(std::move(signs));
        }
        case LabelType::Multiclass: {
            if (!all_int) throw Error(ErrorKind::Input, "multiclass labels must be integers");
            std::map<double, int> ids;
            for (double v : distinct) ids.emplace(v, static_cast<int>(ids.size()));
            std::vector<int> classes;
            classes.reserve(raw.size());
            for (double v : raw) classes.push_back(ids.at(v));
            return Labels::multiclass(std::move(classes));
        }
        case LabelType::Real:
            break;
    }
    return Labels::real(raw);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 std::optional<LabelType> label_type) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Input, "cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw Error(ErrorKind::Input, path.string() + " is empty");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    std::vector<std::string> header;
    for (auto cell : split_commas(line)) header.emplace_back(cell);

    const auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end()) {
        throw Error(ErrorKind::Input, path.string() + ": no column named '" + label_column + "'");
    }
    const auto label_index = static_cast<std::size_t>(label_it - header.begin());

    Dataset data;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_index) data.feature_names.push_back(header[c]);
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::Input, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " cells, found " +
                                              std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(header.size() - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto value = parse_number(cells[c]);
            if (!value) {
                throw Error(ErrorKind::Input, path.string() + ": row " + std::to_string(line_no) +
                                                  ", column '" + header[c] + "': non-numeric value '" +
                                                  std::string(cells[c]) + "'");
            }
            if (c == label_index) {
                raw_labels.push_back(*value);
            } else {
                row.push_back(*value);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::Input, path.string() + " has a header but no data rows");

    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(header.size() - 1);
    data.features.resize(m, d);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            data.features(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    data.labels = type_labels(raw_labels, label_type);
    data.provenance = "csv:" + path.string();
    data.validate();
    return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path, const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + path.string());

    for (const auto& name : data.feature_names) out << name << ',';
    out << label_column << '\n';

    char buffer[64];
    auto write_number = [&](double v) {
        const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
        out.write(buffer, ptr - buffer);
    };
    for (Eigen::Index i = 0; i < data.samples(); ++i) {
        for (Eigen::Index j = 0; j < data.dimensions(); ++j) {
            write_number(data.features(i, j));
            out << ',';
        }
        write_number(data.labels[i]);
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Input, "failed writing " + path.string());
}

Dataset zscore_normalize(const Dataset& data) {
    if (data.samples() < 2) throw Error(ErrorKind::SampleSize, "z-scoring needs at least 2 samples");
    Dataset out = data;
    const double m = static_cast<double>(data.samples());
    for (Eigen::Index j = 0; j < data.dimensions(); ++j) {
        auto column = out.features.col(j);
        const double mean = column.sum() / m;
        column.array() -= mean;
        const double stddev = std::sqrt(column.squaredNorm() / m);
        // Relative guard: a column whose spread is pure rounding noise is constant.
        const double scale = std::max(1.0, std::abs(mean));
        if (stddev <= 1e-12 * scale) {
            column.setZero();
        } else {
            column /= stddev;
        }
    }
    return out;
}

namespace {

void require_samples(Eigen::Index m, Eigen::Index minimum, const char* generator) {
    if (m < minimum) {
        throw Error(ErrorKind::Parameter, std::string(generator) + " needs at least " +
                                              std::to_string(minimum) + " samples, got " +
                                              std::to_string(m));
    }
}

Dataset synth_frame(Eigen::Index m, std::string provenance) {
    Dataset data;
    data.features.resize(m, kSynthFeatureCount);
    for (Eigen::Index j = 0; j < kSynthFeatureCount; ++j) data.feature_names.push_back("x" + std::to_string(j));
    data.provenance = std::move(provenance);
    return data;
}

void fill_noise(Dataset& data, Rng& rng) {
    for (Eigen::Index i = 0; i < data.samples(); ++i) {
        for (Eigen::Index j = 2; j < kSynthFeatureCount; ++j) data.features(i, j) = rng.normal();
    }
}

}  // namespace

Dataset synth_xor(Eigen::Index m, std::uint64_t seed) {
    require_samples(m, 8, "synth_xor");
    if (m % 2 != 0) throw Error(ErrorKind::Parameter, "synth_xor needs an even sample count");

    Dataset data = synth_frame(m, "synth:xor:m=" + std::to_string(m) + ":seed=" + std::to_string(seed));
    Rng rng(seed, 1);
    std::vector<int> labels(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        // Even rows are class +1 with centers (2,2)/(-2,-2); odd rows are
        // class -1 with centers (2,-2)/(-2,2).
        const bool positive = i % 2 == 0;
        const double sx = (i / 2) % 2 == 0 ? 2.0 : -2.0;
        const double sy = positive ? sx : -sx;
        data.features(i, 0) = rng.normal(sx, 1.0);
        data.features(i, 1) = rng.normal(sy, 1.0);
        labels[static_cast<std::size_t>(i)] = positive ? 1 : -1;
    }
    fill_noise(data, rng);
    data.labels = Labels::binary(std::move(labels));
    return data;
}

Dataset synth_multiclass(Eigen::Index m, std::uint64_t seed) {
    require_samples(m, 8, "synth_multiclass");
    if (m % 4 != 0) throw Error(ErrorKind::Parameter, "synth_multiclass needs a sample count divisible by 4");

    static constexpr double kMeans[4][2] = {{-4.0, 0.0}, {0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}};
    Dataset data = synth_frame(m, "synth:multiclass:m=" + std::to_string(m) + ":seed=" + std::to_string(seed));
    Rng rng(seed, 2);
    std::vector<int> classes(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto c = static_cast<int>(i % 4);
        data.features(i, 0) = rng.normal(kMeans[c][0], 1.0);
        data.features(i, 1) = rng.normal(kMeans[c][1], 1.0);
        classes[static_cast<std::size_t>(i)] = c;
    }
    fill_noise(data, rng);
    data.labels = Labels::multiclass(std::move(classes));
    return data;
}

double regression_signal(double x1, double x2) {
    return x1 * std::exp(-x1 * x1 - x2 * x2);
}

Dataset synth_regression(Eigen::Index m, std::uint64_t seed) {
    require_samples(m, 8, "synth_regression");

    Dataset data = synth_frame(m, "synth:regression:m=" + std::to_string(m) + ":seed=" + std::to_string(seed));
    Rng rng(seed, 3);
    std::vector<double> y(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const double x1 = rng.uniform(-2.0, 2.0);
        const double x2 = rng.uniform(-2.0, 2.0);
        data.features(i, 0) = x1;
        data.features(i, 1) = x2;
        y[static_cast<std::size_t>(i)] = regression_signal(x1, x2) + rng.normal(0.0, 0.1);
    }
    fill_noise(data, rng);
    data.labels = Labels::real(std::move(y));
    return data;
}

}  // namespace hsic
