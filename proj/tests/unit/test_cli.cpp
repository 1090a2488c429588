#include "hsic/cli/bench.hpp"
#include "hsic/cli/commands.hpp"
#include "hsic/rng.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int exit_code = -1;
    std::string out;
    std::string err;
};

class Scratch {
public:
    Scratch() {
        static int counter = 0;
        dir_ = fs::temp_directory_path() /
               ("hsic-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(dir_);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    fs::path operator/(const std::string& name) const { return dir_ / name; }

private:
    fs::path dir_;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome run_cli(const Scratch& scratch, const std::string& args, const std::string& env = "") {
    const auto out = scratch / "stdout.txt";
    const auto err = scratch / "stderr.txt";
    const std::string command = env + (env.empty() ? "" : " ") + "'" HSIC_EXECUTABLE "' " + args + " > '" +
                                out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(command.c_str());
    Outcome o;
    o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    return o;
}

std::string data_file(const std::string& name) { return std::string(HSIC_TEST_DATA_DIR) + "/" + name; }

// Checks that every key a schema object lists as required is present, recursively.
void check_required(const nlohmann::json& schema, const nlohmann::json& doc, const std::string& where) {
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            INFO(where << "." << key.get<std::string>());
            CHECK(doc.contains(key.get<std::string>()));
        }
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items())
            if (doc.contains(key)) check_required(sub, doc[key], where + "." + key);
    }
    if (schema.contains("items") && doc.is_array()) {
        for (const auto& item : doc) check_required(schema["items"], item, where + "[]");
    }
    if (schema.contains("const")) CHECK(doc == schema["const"]);
}

nlohmann::json load_schema(const std::string& name) {
    return nlohmann::json::parse(slurp(fs::path(HSIC_SCHEMA_DIR) / name));
}

// Feature 0 is the binary label written as +-1; the rest is Gaussian noise.
void write_feature_equals_label(const fs::path& path, int m, int noise) {
    hsic::Rng rng(99);
    std::ofstream out(path);
    out << "f0";
    for (int j = 1; j <= noise; ++j) out << ",f" << j;
    out << ",y\n";
    for (int i = 0; i < m; ++i) {
        const int y = i % 2 == 0 ? 1 : -1;
        out << y;
        for (int j = 1; j <= noise; ++j) out << ',' << rng.normal();
        out << ',' << y << '\n';
    }
}

}  // namespace

TEST_CASE("synth writes deterministic CSV") {
    Scratch scratch;
    const auto a = scratch / "a.csv";
    const auto b = scratch / "b.csv";
    REQUIRE(run_cli(scratch, "synth --dataset xor --samples 400 --seed 3 --out '" + a.string() + "'").exit_code == 0);
    REQUIRE(run_cli(scratch, "synth --dataset xor --samples 400 --seed 3 --out '" + b.string() + "'").exit_code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));

    std::istringstream lines(text);
    std::string line;
    int rows = 0;
    std::getline(lines, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 22);
    CHECK(line.substr(line.rfind(',') + 1) == "y");
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 22);
    }
    CHECK(rows == 400);

    const auto reg = scratch / "reg.csv";
    REQUIRE(run_cli(scratch, "synth --dataset regression --samples 40 --seed 1 --out '" + reg.string() + "'").exit_code == 0);
    CHECK(hsic::load_csv(reg, "y").labels.type() == hsic::LabelType::Real);

    const auto odd = run_cli(scratch, "synth --dataset xor --samples 41 --out '" + (scratch / "odd.csv").string() + "'");
    CHECK(odd.exit_code == 2);
    CHECK(odd.err.find("even") != std::string::npos);
}

TEST_CASE("hsic command") {
    Scratch scratch;
    const auto toy = scratch / "toy.csv";
    write_feature_equals_label(toy, 100, 3);

    SUBCASE("feature equal to label gives the minimal permutation p-value") {
        const auto o = run_cli(scratch, "hsic --data '" + toy.string() + "' --perms 199 --seed 7 --json");
        REQUIRE(o.exit_code == 0);
        const auto doc = nlohmann::json::parse(o.out);
        CHECK(doc["test"]["p_value"].get<double>() == doctest::Approx(1.0 / 200.0).epsilon(1e-15));
        CHECK(doc["test"]["permutations"] == 199);
        CHECK(doc["data"]["samples"] == 100);
        CHECK(doc["kernel"]["sigma"].get<double>() > 0.0);
        check_required(load_schema("hsic.schema.json"), doc, "$");
    }

    SUBCASE("repeat runs are identical") {
        const auto a = run_cli(scratch, "hsic --data '" + toy.string() + "' --label-col y --test permutation --perms 199 --seed 7");
        const auto b = run_cli(scratch, "hsic --data '" + toy.string() + "' --label-col y --test permutation --perms 199 --seed 7");
        REQUIRE(a.exit_code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.find("p-value") != std::string::npos);
        CHECK(a.out.find("samples   100") != std::string::npos);
    }

    SUBCASE("HSIC_SEED sets the default seed") {
        const auto o = run_cli(scratch, "hsic --data '" + toy.string() + "' --perms 19 --json", "HSIC_SEED=12345");
        REQUIRE(o.exit_code == 0);
        CHECK(nlohmann::json::parse(o.out)["test"]["seed"] == 12345);
        const auto flag = run_cli(scratch, "hsic --data '" + toy.string() + "' --perms 19 --seed 4 --json", "HSIC_SEED=12345");
        CHECK(nlohmann::json::parse(flag.out)["test"]["seed"] == 4);
        const auto bad = run_cli(scratch, "hsic --data '" + toy.string() + "'", "HSIC_SEED=abc");
        CHECK(bad.exit_code == 2);
        CHECK(bad.err.find("HSIC_SEED") != std::string::npos);
    }

    SUBCASE("asymptotic mode") {
        const auto o = run_cli(scratch, "hsic --data '" + toy.string() + "' --test asymptotic --json");
        REQUIRE(o.exit_code == 0);
        const auto doc = nlohmann::json::parse(o.out);
        CHECK(doc["test"]["mode"] == "asymptotic");
        CHECK(doc["test"]["variance"].get<double>() > 0.0);
        CHECK(doc["test"]["p_value"].get<double>() < 1e-6);
    }

    SUBCASE("constant labels report zero") {
        const auto o = run_cli(scratch, "hsic --data '" + data_file("constant_labels.csv") + "' --json");
        REQUIRE(o.exit_code == 0);
        const auto doc = nlohmann::json::parse(o.out);
        CHECK(doc["hsic"].get<double>() == 0.0);
        CHECK(doc["note"] == "constant labels");
    }
}

TEST_CASE("exit codes and messages") {
    Scratch scratch;
    const auto missing = run_cli(scratch, "hsic --data /nonexistent/data.csv");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("/nonexistent/data.csv") != std::string::npos);

    const auto bad = run_cli(scratch, "hsic --data '" + data_file("bad_cell.csv") + "'");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("bad_cell.csv") != std::string::npos);
    CHECK(bad.err.find("'y'") != std::string::npos);

    const auto no_col = run_cli(scratch, "hsic --data '" + data_file("tiny_binary.csv") + "' --label-col label");
    CHECK(no_col.exit_code == 2);
    CHECK(no_col.err.find("label") != std::string::npos);

    CHECK(run_cli(scratch, "hsic --data '" + data_file("three_rows.csv") + "'").exit_code == 3);
    CHECK(run_cli(scratch, "select --data '" + data_file("three_rows.csv") + "'").exit_code == 3);
    CHECK(run_cli(scratch, "hsic --data '" + data_file("tiny_binary.csv") + "'").exit_code == 3);

    CHECK(run_cli(scratch, "").exit_code == 2);
    CHECK(run_cli(scratch, "frobnicate").exit_code == 2);
    CHECK(run_cli(scratch, "hsic --data x.csv --test bogus").exit_code == 2);
    CHECK(run_cli(scratch, "bench --methods bahsic,relief --sizes 40 --runs 1").exit_code == 2);
    CHECK(run_cli(scratch, "--help").exit_code == 0);
}

TEST_CASE("select command") {
    Scratch scratch;
    const auto toy = scratch / "toy.csv";
    write_feature_equals_label(toy, 100, 4);
    const auto a = scratch / "a.json";
    const auto b = scratch / "b.json";

    const auto o = run_cli(scratch, "select --data '" + toy.string() + "' --method bahsic --out '" + a.string() + "'");
    REQUIRE(o.exit_code == 0);
    CHECK(o.out.rfind("rank\tfeature\n1\tf0\n", 0) == 0);
    REQUIRE(run_cli(scratch, "select --data '" + toy.string() + "' --method bahsic --out '" + b.string() + "'").exit_code == 0);
    CHECK(slurp(a) == slurp(b));

    const auto doc = nlohmann::json::parse(slurp(a));
    check_required(load_schema("ranking.schema.json"), doc, "$");
    CHECK(doc["ordering"][0]["feature"] == 0);
    CHECK(doc["ordering"].size() == 5);
    CHECK(doc["config"]["method"] == "bahsic");
    CHECK(doc["rounds"][0]["sigma"].get<double>() == doctest::Approx(1.0 / 8.0));

    const auto all = run_cli(scratch, "select --data '" + toy.string() + "' --method fohsic --num-features 5 --out '" +
                                          a.string() + "'");
    REQUIRE(all.exit_code == 0);
    const auto fo = nlohmann::json::parse(slurp(a));
    CHECK(fo["selected"].size() == 5);
    CHECK(fo["selected"][0] == 0);

    const auto listing = scratch / "listing.txt";
    REQUIRE(run_cli(scratch, "select --data '" + toy.string() + "' --kernel linear --listing '" + listing.string() + "'")
                .exit_code == 0);
    CHECK(slurp(listing).rfind("rank\tfeature\n1\tf0\n", 0) == 0);

    CHECK(run_cli(scratch, "select --data '" + toy.string() + "' --num-features 6").exit_code == 2);
    CHECK(run_cli(scratch, "select --data '" + toy.string() + "' --fraction 0").exit_code == 2);
}

TEST_CASE("bench command") {
    Scratch scratch;
    const auto a = scratch / "a.json";
    const auto b = scratch / "b.json";
    const auto o = run_cli(scratch, "bench --dataset multiclass --sizes 40,80 --runs 2 --methods pearson,bahsic --seed 5 --out '" +
                                        a.string() + "'");
    REQUIRE(o.exit_code == 0);
    CHECK(o.out.rfind("method,size,median_rank,status\n", 0) == 0);
    REQUIRE(run_cli(scratch, "bench --dataset multiclass --sizes 80,40 --runs 2 --methods bahsic,pearson --seed 5 --jobs 3 --out '" +
                                 b.string() + "'")
                .exit_code == 0);
    const auto first = nlohmann::json::parse(slurp(a));
    const auto second = nlohmann::json::parse(slurp(b));
    check_required(load_schema("benchmark.schema.json"), first, "$");
    CHECK(first["cells"].size() == 4);
    for (const auto& cell : first["cells"]) {
        bool found = false;
        for (const auto& other : second["cells"]) {
            if (other["method"] == cell["method"] && other["size"] == cell["size"]) {
                found = true;
                CHECK(other["ranks"] == cell["ranks"]);
                CHECK(other["median_rank"] == cell["median_rank"]);
            }
        }
        CHECK(found);
        CHECK(cell["ranks"].size() == 4);
    }
}

TEST_CASE("pooled median") {
    CHECK(hsic::cli::median({3, 1, 2}) == 2.0);
    CHECK(hsic::cli::median({1, 1, 4, 4}) == 2.5);
    CHECK_THROWS_AS(hsic::cli::median({}), hsic::Error);
}
