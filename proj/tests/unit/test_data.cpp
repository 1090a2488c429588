#include "hsic/baselines.hpp"
#include "hsic/data.hpp"
#include "hsic/errors.hpp"
#include "hsic/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("hsic_test_" + name);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("load_csv infers binary labels in ascending value order") {
    const auto data = hsic::load_csv(HSIC_TEST_DATA_DIR "/tiny_binary.csv", "y");
    CHECK(data.samples() == 3);
    CHECK(data.dimensions() == 2);
    CHECK(data.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(data.labels.type() == hsic::LabelType::Binary);
    CHECK(data.labels.values() == std::vector<double>{-1.0, 1.0, 1.0});
    CHECK(data.features(1, 0) == 3.5);
}

TEST_CASE("load_csv infers real labels and skips the label column wherever it is") {
    const auto data = hsic::load_csv(HSIC_TEST_DATA_DIR "/real_labels.csv", "y");
    CHECK(data.labels.type() == hsic::LabelType::Real);
    CHECK(data.feature_names == std::vector<std::string>{"f1", "f2"});
    CHECK(data.features(3, 1) == 0.0);
}

TEST_CASE("load_csv reports bad input precisely") {
    SUBCASE("missing column") {
        CHECK_THROWS_WITH_AS(hsic::load_csv(HSIC_TEST_DATA_DIR "/tiny_binary.csv", "label"),
                             doctest::Contains("no column named 'label'"), hsic::Error);
    }
    SUBCASE("non-numeric cell names row and column") {
        CHECK_THROWS_WITH_AS(hsic::load_csv(HSIC_TEST_DATA_DIR "/bad_cell.csv", "a"),
                             doctest::Contains("row 3, column 'y'"), hsic::Error);
    }
    SUBCASE("empty file") {
        const auto path = temp_file("empty.csv");
        std::ofstream(path).close();
        try {
            hsic::load_csv(path, "y");
            FAIL("expected an error");
        } catch (const hsic::Error& e) {
            CHECK(e.kind() == hsic::ErrorKind::Input);
        }
    }
}

TEST_CASE("multiclass inference and override") {
    const auto path = temp_file("multi.csv");
    {
        std::ofstream out(path);
        out << "x,y\n0.1,3\n0.2,5\n0.3,7\n0.4,5\n";
    }
    auto data = hsic::load_csv(path, "y");
    CHECK(data.labels.type() == hsic::LabelType::Multiclass);
    CHECK(data.labels.as_ints() == std::vector<int>{0, 1, 2, 1});
    CHECK(data.labels.class_count() == 3);

    data = hsic::load_csv(path, "y", hsic::LabelType::Real);
    CHECK(data.labels.type() == hsic::LabelType::Real);
    CHECK(data.labels.values() == std::vector<double>{3, 5, 7, 5});
}

TEST_CASE("csv round trip preserves values and label typing") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        for (const auto& original : {hsic::synth_xor(20, seed), hsic::synth_multiclass(20, seed),
                                     hsic::synth_regression(20, seed)}) {
            const auto path = temp_file("roundtrip.csv");
            hsic::save_csv(original, path);
            const auto back = hsic::load_csv(path, "y");
            CHECK(back.labels.type() == original.labels.type());
            CHECK((back.features - original.features).cwiseAbs().maxCoeff() <= 1e-12);
            for (Eigen::Index i = 0; i < original.samples(); ++i) {
                CHECK(std::abs(back.labels[i] - original.labels[i]) <= 1e-12);
            }
            CHECK(back.feature_names == original.feature_names);
        }
    }
}

TEST_CASE("zscore_normalize") {
    hsic::Dataset data;
    data.features.resize(2, 2);
    data.features << 1.0, 5.0, 3.0, 5.0;
    data.labels = hsic::Labels::binary({1, -1});
    data.feature_names = {"a", "b"};

    const auto z = hsic::zscore_normalize(data);
    CHECK(z.features(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(z.features(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z.features(0, 1) == 0.0);
    CHECK(z.features(1, 1) == 0.0);

    const auto random = hsic::zscore_normalize(hsic::synth_regression(50, 9));
    for (Eigen::Index j = 0; j < random.dimensions(); ++j) {
        const auto col = random.features.col(j);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().mean());
        CHECK(std::abs(mean) <= 1e-10);
        CHECK(std::abs(sd - 1.0) <= 1e-10);
    }
    const auto twice = hsic::zscore_normalize(random);
    CHECK((twice.features - random.features).cwiseAbs().maxCoeff() <= 1e-10);

    hsic::Dataset one = data;
    one.features.resize(1, 2);
    one.labels = hsic::Labels::binary({1});
    CHECK_THROWS_AS(hsic::zscore_normalize(one), hsic::Error);
}

TEST_CASE("synth_xor structure") {
    const auto data = hsic::synth_xor(400, 11);
    CHECK(data.dimensions() == 22);
    const auto& y = data.labels.values();
    CHECK(std::count(y.begin(), y.end(), 1.0) == 200);
    CHECK(std::count(y.begin(), y.end(), -1.0) == 200);

    // No first-order signal in either relevant coordinate.
    const Eigen::Map<const Eigen::VectorXd> labels(y.data(), 400);
    for (Eigen::Index j : {0, 1}) {
        const double r = std::abs((data.features.col(j).array() - data.features.col(j).mean())
                                      .matrix()
                                      .dot((labels.array() - labels.mean()).matrix())) /
                         std::sqrt((data.features.col(j).array() - data.features.col(j).mean()).square().sum() *
                                   (labels.array() - labels.mean()).square().sum());
        CHECK(r < 0.2);
    }
    // Quadrant product matches the label for most samples.
    int agree = 0;
    for (Eigen::Index i = 0; i < 400; ++i) {
        agree += (data.features(i, 0) * data.features(i, 1) > 0) == (y[static_cast<std::size_t>(i)] > 0);
    }
    CHECK(agree > 330);

    CHECK(hsic::synth_xor(40, 5).features == hsic::synth_xor(40, 5).features);
    CHECK(hsic::synth_xor(40, 5).features != hsic::synth_xor(40, 6).features);
    CHECK_THROWS_AS(hsic::synth_xor(41, 1), hsic::Error);
    CHECK_THROWS_AS(hsic::synth_xor(6, 1), hsic::Error);
}

TEST_CASE("synth_multiclass structure") {
    const auto data = hsic::synth_multiclass(400, 3);
    CHECK(data.dimensions() == 22);
    CHECK(data.labels.class_count() == 4);
    const double expected[4] = {0.0, 0.0, 0.0, 4.0};
    const double tolerance = 3.0 / std::sqrt(100.0);
    for (int c = 0; c < 4; ++c) {
        double sum = 0.0;
        int count = 0;
        for (Eigen::Index i = 0; i < 400; ++i) {
            if (data.labels[i] == c) {
                sum += data.features(i, 1);
                ++count;
            }
        }
        CHECK(count == 100);
        CHECK(std::abs(sum / count - expected[c]) <= tolerance);
    }
    CHECK(hsic::synth_multiclass(40, 5).features == hsic::synth_multiclass(40, 5).features);
    CHECK_THROWS_AS(hsic::synth_multiclass(42, 1), hsic::Error);
}

TEST_CASE("synth_regression signal") {
    CHECK(hsic::regression_signal(0.0, 1.3) == 0.0);
    CHECK(hsic::regression_signal(1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    const auto data = hsic::synth_regression(400, 2);
    CHECK(data.labels.type() == hsic::LabelType::Real);
    CHECK(data.features.leftCols(2).cwiseAbs().maxCoeff() <= 2.0);
    double sq = 0.0;
    for (Eigen::Index i = 0; i < 400; ++i) {
        const double r = data.labels[i] - hsic::regression_signal(data.features(i, 0), data.features(i, 1));
        sq += r * r;
    }
    CHECK(std::sqrt(sq / 400) == doctest::Approx(0.1).epsilon(0.15));
    CHECK(hsic::synth_regression(40, 5).labels.values() == hsic::synth_regression(40, 5).labels.values());
}

TEST_CASE("synthetic datasets are bit-stable across runs") {
    // Written once to disk and compared byte for byte on reload.
    const auto a = temp_file("stable_a.csv"), b = temp_file("stable_b.csv");
    hsic::save_csv(hsic::synth_xor(400, 123), a);
    hsic::save_csv(hsic::synth_xor(400, 123), b);
    CHECK(slurp(a) == slurp(b));
}
