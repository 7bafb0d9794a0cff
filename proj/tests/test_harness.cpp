#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "trigibbs/cli.hpp"
#include "trigibbs/config.hpp"
#include "trigibbs/errors.hpp"
#include "trigibbs/harness.hpp"
#include "trigibbs/ratefn.hpp"

using namespace trigibbs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(static_cast<bool>(in));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_count(const std::string& path) {
    if (!fs::exists(path)) return 0;
    std::ifstream in(path);
    int k = 0;
    std::string line;
    while (std::getline(in, line)) ++k;
    return k;
}

std::string hex16(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::path("harness_test_out") / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int rc = cli_dispatch(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("config round trip is lossless, including awkward doubles") {
    ExperimentConfig cfg;
    cfg.preset = "fig_density";
    cfg.seed = 987654321012345ULL;
    cfg.output_dir = "some/dir";
    cfg.grid_c = {0.1, 1.0 / 3.0, 1e-7};
    cfg.grid_eta = {0.25};
    cfg.grid_n = {3, 400};
    cfg.grid_zeta = {0.0, 1.0};
    cfg.grid_b = {0.3};
    cfg.chains = 5;
    cfg.sweeps = 123;
    cfg.thin = 2;
    cfg.burnin = 77;
    cfg.max_steps = 1000000;
    cfg.tolerance = {{"maxcut_low", 0.5}, {"zscore", 3.0}};

    ExperimentConfig back = parse_config(serialize_config(cfg));
    CHECK(back == cfg);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(serialize_config(back) == serialize_config(cfg));
    CHECK(parse_config("") == ExperimentConfig{});
}

TEST_CASE("config file parsing: sections, comments, lists") {
    std::string text =
        "# experiment description\n"
        "[experiment]\n"
        "preset = fig_density\n"
        "seed = 42\n"
        "[grid]\n"
        "c = 0.1, 0.5\n"
        "eta = 0.25\n"
        "n = 3, 6\n"
        "[mcmc]\n"
        "chains = 3\n"
        "[tolerance]\n"
        "maxcut_low = 0.5\n";
    ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.preset == "fig_density");
    CHECK(cfg.seed == 42);
    CHECK(cfg.grid_c == std::vector<double>{0.1, 0.5});
    CHECK(cfg.grid_eta == std::vector<double>{0.25});
    CHECK(cfg.grid_n == std::vector<int>{3, 6});
    CHECK(cfg.chains == 3);
    CHECK(cfg.tolerance.at("maxcut_low") == 0.5);
}

TEST_CASE("config parse errors") {
    CHECK_THROWS_AS(parse_config("[bogus]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\ncolor = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mcmc]\nchains = frog\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nc = 0.1; 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\njust a line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("preset = early\n"), ConfigError);
    CHECK_THROWS_AS(load_config("no/such/file.ini"), ConfigError);
}

TEST_CASE("config validation accepts the boundary and rejects beyond it") {
    ExperimentConfig cfg;
    cfg.grid_eta = {0.0, 0.999};
    cfg.grid_zeta = {0.0, 1.0};
    validate_config(cfg);  // must not throw

    ExperimentConfig bad = cfg;
    bad.grid_eta = {1.0};
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = cfg;
    bad.grid_n = {0};
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = cfg;
    bad.chains = 0;
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = cfg;
    bad.thin = 0;
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = cfg;
    bad.preset = "fig_unknown";
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = cfg;
    bad.burnin = 10;
    bad.max_steps = 5;
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = cfg;
    bad.grid_n = {400};
    bad.max_steps = 1000;  // below the default schedule for n=400
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad.max_steps = 0;  // uncapped is fine
    validate_config(bad);
}

TEST_CASE("config hash is sensitive to every field") {
    ExperimentConfig cfg;
    std::uint64_t h0 = config_hash(cfg);
    ExperimentConfig c1 = cfg;
    c1.seed = 2;
    CHECK(config_hash(c1) != h0);
    ExperimentConfig c2 = cfg;
    c2.grid_c = {0.1};
    CHECK(config_hash(c2) != h0);
    ExperimentConfig c3 = cfg;
    c3.tolerance["x"] = 1.0;
    CHECK(config_hash(c3) != h0);
}

TEST_CASE("output directory resolution order") {
    ExperimentConfig cfg;
    cfg.output_dir = "explicit";
    CHECK(harness::resolve_output_dir(cfg) == "explicit");
    cfg.output_dir.clear();
    ::setenv("TRIGIBBS_OUT", "from_env", 1);
    CHECK(harness::resolve_output_dir(cfg) == "from_env");
    ::unsetenv("TRIGIBBS_OUT");
    CHECK(harness::resolve_output_dir(cfg) == "out");
}

TEST_CASE("fig_ldrate preset: hashed CSV, byte-identical reruns, crossing annotation") {
    TempDir dir("ldrate");
    ExperimentConfig cfg;
    cfg.output_dir = dir.str();
    cfg.grid_c = {0.5, 1.0, 2.0};
    cfg.seed = 7;

    auto rec = harness::run_preset("fig_ldrate", cfg);
    REQUIRE(rec.files.size() == 2);
    const std::string csv_path = rec.files[0];
    CHECK(csv_path.find("fig_ldrate.csv") != std::string::npos);

    std::string csv = slurp(csv_path);
    std::string first = csv.substr(0, csv.find('\n'));
    CHECK(first == "# config_hash=" + hex16(rec.hash));
    CHECK(line_count(csv_path) == 2 + 3);

    double crossing = rec.summary["annotations"]["crossing_c"].get<double>();
    CHECK(crossing == doctest::Approx(4.3416019599754087).epsilon(1e-5));
    CHECK(rec.summary["config_hash"].get<std::string>() == hex16(rec.hash));
    CHECK(rec.summary["preset"].get<std::string>() == "fig_ldrate");

    int jsonl_before = line_count(dir.str() + "/runs.jsonl");
    auto rec2 = harness::run_preset("fig_ldrate", cfg);
    CHECK(slurp(csv_path) == csv);
    CHECK(rec2.hash == rec.hash);
    CHECK(line_count(dir.str() + "/runs.jsonl") == jsonl_before + 1);
}

TEST_CASE("fig_rate_compare preset: default grid and small-c annotation") {
    TempDir dir("ratecmp");
    ExperimentConfig cfg;
    cfg.output_dir = dir.str();
    auto rec = harness::run_preset("fig_rate_compare", cfg);
    CHECK(line_count(rec.files[0]) == 2 + 40);
    double ratio = rec.summary["annotations"]["small_c_ratio_at_0.1"].get<double>();
    CHECK(ratio >= 0.97);
    CHECK(ratio <= 1.0001);
    CHECK(rec.summary["annotations"]["eta"].get<double>() == 0.5);
}

TEST_CASE("fig_density preset stops at the validity threshold") {
    TempDir dir("density");
    ExperimentConfig cfg;
    cfg.output_dir = dir.str();
    cfg.grid_eta = {0.25};
    auto rec = harness::run_preset("fig_density", cfg);
    CHECK(rec.summary["annotations"]["rows_out_of_window"].get<int>() > 0);

    std::string csv = slurp(rec.files[0]);
    auto last_nl = csv.find_last_of('\n', csv.size() - 2);
    std::string last = csv.substr(last_nl + 1);
    std::stringstream ss(last);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == 4);
    CHECK(row[0] < ratefn::c_bar(0.25));
    CHECK(row[1] > std::cbrt(0.25));
    CHECK(row[1] < 1.0);
    CHECK(row[3] == doctest::Approx(std::cbrt(0.25)).epsilon(1e-10));
}

TEST_CASE("unknown preset is rejected before any file is written") {
    TempDir dir("badpreset");
    ExperimentConfig cfg;
    cfg.output_dir = dir.str();
    CHECK_THROWS_AS(harness::run_preset("fig_wrong", cfg), ConfigError);
    CHECK(!fs::exists(dir.path / "runs.jsonl"));
}

TEST_CASE("cli: rate emits the rate function as JSON") {
    std::string out;
    CHECK(run_cli({"rate", "--c", "0.4", "--eta", "0"}, &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["rate"].get<double>() ==
          doctest::Approx(ratefn::rate_trianglefree(0.4)).epsilon(1e-14));
    CHECK(j["zeta"].get<double>() == 1.0);
    CHECK(j["regime"].get<std::string>() == "inside_window");
}

TEST_CASE("cli: rate without --c or --b fails with a validation error") {
    std::string err;
    CHECK(run_cli({"rate"}, nullptr, &err) == 1);
    CHECK(err.find("--c or --b") != std::string::npos);
}

TEST_CASE("cli: usage errors exit with 2") {
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"rate", "--frobnicate", "1"}) == 2);
    CHECK(run_cli({"experiment"}) == 2);  // --preset is required
    std::string out;
    CHECK(run_cli({"--help"}, &out) == 0);
    CHECK(out.find("rate") != std::string::npos);
}

TEST_CASE("cli: exact matches the closed-form three-vertex sum") {
    std::string out;
    CHECK(run_cli({"exact", "--n", "3", "--lambda", "0.3", "--zeta", "0.5"}, &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["log_z"].get<double>() == doctest::Approx(std::log(2.1835)).epsilon(1e-14));
}

TEST_CASE("cli: exact lower tail agrees with the partition-function identity") {
    std::string out;
    CHECK(run_cli({"exact", "--lower-tail", "--n", "5", "--p", "0.2"}, &out) == 0);
    auto j = nlohmann::json::parse(out);
    double lambda = 0.2 / 0.8;
    std::string out2;
    CHECK(run_cli({"exact", "--n", "5", "--lambda", std::to_string(lambda), "--zeta", "1"},
                  &out2) == 0);
    auto j2 = nlohmann::json::parse(out2);
    double expected = std::exp(10 * std::log1p(-0.2) + j2["log_z"].get<double>());
    CHECK(j["probability"].get<double>() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("cli: cluster truncation validates against exact enumeration") {
    std::string out;
    CHECK(run_cli({"cluster", "--host", "cycle:10", "--lambda", "0.05", "--zeta", "0.5",
                   "--k", "4", "--exact"},
                  &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["within_tail_bound"].get<bool>());
    CHECK(j["counts_by_size"][1].get<int>() == 10);
    CHECK(j["counts_by_size"][2].get<int>() == 30);
}

TEST_CASE("cli: cluster tree closed forms") {
    std::string out;
    CHECK(run_cli({"cluster", "--tree-delta", "20", "--lambda", "0.01", "--zeta", "0.5"},
                  &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["f"].get<double>() == doctest::Approx(0.0095442229366136078).epsilon(1e-12));
    CHECK(j["alpha"].get<double>() == doctest::Approx(0.0091276527160862264).epsilon(1e-12));
}

TEST_CASE("cli: sample output is deterministic and carries the header") {
    std::vector<std::string> args = {"sample", "--n", "6",    "--lambda", "0.3",
                                     "--zeta", "0.5", "--sweeps", "20", "--chains",
                                     "2",      "--seed", "11"};
    std::string a, b;
    CHECK(run_cli(args, &a) == 0);
    CHECK(run_cli(args, &b) == 0);
    CHECK(a == b);
    CHECK(a.rfind("# seed=11", 0) == 0);
    CHECK(a.find("chain,sample,edges,triangles\n") != std::string::npos);
}

TEST_CASE("cli: estimate tail mode and mode validation") {
    std::string out;
    CHECK(run_cli({"estimate", "--mode", "tail", "--n", "6", "--p", "0.3", "--trials",
                   "2000", "--seed", "5"},
                  &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["estimate"].get<double>() > 0.0);
    CHECK(j["estimate"].get<double>() <= 1.0);
    CHECK(j["stderr"].get<double>() > 0.0);
    std::string err;
    CHECK(run_cli({"estimate", "--mode", "bogus"}, nullptr, &err) == 1);
    CHECK(err.find("unknown estimate mode") != std::string::npos);
}

TEST_CASE("cli: experiment runs a preset end to end") {
    TempDir dir("cli_experiment");
    std::string out;
    CHECK(run_cli({"experiment", "--preset", "fig_ldrate", "--out", dir.str(), "--seed",
                   "7"},
                  &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["preset"].get<std::string>() == "fig_ldrate");
    CHECK(fs::exists(dir.path / "fig_ldrate.csv"));
    CHECK(fs::exists(dir.path / "fig_ldrate_summary.json"));
    CHECK(fs::exists(dir.path / "runs.jsonl"));
}

TEST_CASE("cli: verify runs the constants criterion") {
    std::string out, err;
    CHECK(run_cli({"verify", "--suite", "constants"}, &out, &err) == 0);
    CHECK(out.find("PASS") != std::string::npos);
    CHECK(out.find("constants") != std::string::npos);
    CHECK(err.find("1/1 criteria passed") != std::string::npos);
    CHECK(run_cli({"verify", "--suite", "nonsense"}, nullptr, &err) == 1);
}
