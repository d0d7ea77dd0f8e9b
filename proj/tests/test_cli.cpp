#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epigeom/cli.hpp"
#include "epigeom/json_io.hpp"

using namespace epigeom;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("epigeom-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const std::string& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("alpha subcommand emits the requested rows") {
    TempDir tmp;
    const std::string out = tmp.file("alpha.csv");
    const int code = cli::run({"alpha", "--p-min", "1.1", "--p-max", "10", "--steps", "20",
                               "--format", "csv", "--out", out});
    CHECK(code == 0);
    const std::string text = slurp(out);
    CHECK(count_lines(text) == 21);  // header + 20 rows
    CHECK(text.rfind("p,alpha,alpha_opt,bm16,lower_bound,argmax_lambda\n", 0) == 0);
    // manifest written next to the artifact
    CHECK(fs::exists(out + ".manifest.json"));
    const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
    CHECK(manifest.contains("command_line"));
    CHECK(manifest.contains("config_digest"));
    CHECK(manifest.contains("tool_version"));
}

TEST_CASE("alpha json format") {
    TempDir tmp;
    const std::string out = tmp.file("alpha.json");
    CHECK(cli::run({"alpha", "--p-min", "2", "--p-max", "2", "--steps", "1", "--format", "json",
                    "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    REQUIRE(j.is_array());
    CHECK(j.size() == 1);
    CHECK(j[0]["alpha"].get<double>() == doctest::Approx(1.324702).epsilon(1e-6));
}

TEST_CASE("entropy subcommand") {
    TempDir tmp;
    put(tmp.file("gauss.json"),
        R"({"family": "gaussian", "dim": 1, "params": {"mean": [0.0], "cov": [[1.0]]}})");
    const std::string out = tmp.file("entropy.csv");
    CHECK(cli::run({"entropy", "--density", tmp.file("gauss.json"), "--p", "0,1,2,inf", "--out",
                    out}) == 0);
    const std::string text = slurp(out);
    CHECK(count_lines(text) == 5);
    CHECK(text.find("closed-form") != std::string::npos);
    CHECK(text.find("inf") != std::string::npos);
}

TEST_CASE("body subcommand") {
    TempDir tmp;
    put(tmp.file("disk.json"),
        R"({"family": "uniform", "dim": 2, "params": {"body": {"kind": "ball", "dim": 2, "radius": 1.0}}})");
    const std::string out = tmp.file("body.csv");
    CHECK(cli::run({"body", "--kind", "intersection", "--density", tmp.file("disk.json"),
                    "--directions", "16", "--out", out}) == 0);
    const std::string text = slurp(out);
    CHECK(count_lines(text) == 17);
    CHECK(text.rfind("angle,ux,uy,radius\n", 0) == 0);
    // every radius equals 2/pi
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        const double r = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(r == doctest::Approx(2.0 / 3.14159265358979).epsilon(1e-6));
    }
}

TEST_CASE("check epi exits 0 and mirrors the report schema") {
    TempDir tmp;
    put(tmp.file("u.json"),
        R"({"family": "uniform", "dim": 1, "params": {"body": {"kind": "box", "half_widths": [0.5]}}})");
    const std::string out = tmp.file("epi.json");
    CHECK(cli::run({"check", "epi", "--density", tmp.file("u.json"), "--density2",
                    tmp.file("u.json"), "--p", "2", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["name"] == "epi");
    CHECK(j["verdict"] == "holds");
    CHECK(j["lhs"].get<double>() == doctest::Approx(2.928).epsilon(1e-3));
    CHECK(j["rhs"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    for (const char* key : {"inputs_digest", "margin", "tolerance", "error_estimate", "detail"})
        CHECK(j.contains(key));
}

TEST_CASE("check convexity: violated fixture exits 2") {
    TempDir tmp;
    put(tmp.file("flower.json"),
        R"({"generator": {"base": 1.0, "amplitude": 0.5, "frequency": 4}, "directions": 360})");
    const std::string out = tmp.file("convexity.json");
    CHECK(cli::run({"check", "convexity", "--body", tmp.file("flower.json"), "--out", out}) == 2);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["verdict"] == "violated");

    put(tmp.file("disk.json"), R"({"generator": {"base": 1.0}, "directions": 64})");
    CHECK(cli::run({"check", "convexity", "--body", tmp.file("disk.json")}) == 0);
}

TEST_CASE("malformed inputs exit 1 with a diagnostic") {
    TempDir tmp;
    put(tmp.file("bad.json"), "{not json");
    CHECK(cli::run({"entropy", "--density", tmp.file("bad.json"), "--p", "2"}) == 1);
    put(tmp.file("unknown.json"), R"({"family": "cauchy", "dim": 1, "params": {}})");
    CHECK(cli::run({"entropy", "--density", tmp.file("unknown.json"), "--p", "2"}) == 1);
    CHECK(cli::run({"entropy", "--density", tmp.file("missing.json"), "--p", "2"}) == 1);
    CHECK(cli::run({"nonsense-subcommand"}) == 1);
}

TEST_CASE("transform-check tr-limit JSON") {
    TempDir tmp;
    const std::string out = tmp.file("tr.json");
    CHECK(cli::run({"transform-check", "--which", "tr-limit", "--eps", "1e-1,1e-2", "--directions",
                    "720", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["which"] == "tr-limit");
    REQUIRE(j["checks"].size() == 2);
    CHECK(j["checks"][1]["max_gap"].get<double>() < j["checks"][0]["max_gap"].get<double>());
}

TEST_CASE("single-worker determinism: identical bytes") {
    TempDir tmp;
    const std::string out1 = tmp.file("a1.csv"), out2 = tmp.file("a2.csv");
    CHECK(cli::run({"alpha", "--p-min", "1.5", "--p-max", "5", "--steps", "7", "--out", out1}) == 0);
    CHECK(cli::run({"alpha", "--p-min", "1.5", "--p-max", "5", "--steps", "7", "--out", out2}) == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("density JSON round trip") {
    const Density d = Density::product(
        {Density::exponential_power(1.5), Density::exponential_power(3.0)});
    const Density back = density_from_json(density_to_json(d));
    CHECK(back.dim() == 2);
    CHECK(back.evaluate(Vec{0.3, -0.7}) == doctest::Approx(d.evaluate(Vec{0.3, -0.7})).epsilon(1e-15));
    const Density grid = Density::from_grid(Density::standard_gaussian(1).discretize(8.5, 64),
                                            Concavity::log_concave());
    const Density gback = density_from_json(density_to_json(grid));
    CHECK(gback.evaluate1(0.4) == doctest::Approx(grid.evaluate1(0.4)).epsilon(1e-15));
}

TEST_CASE("alpha exploratory mode covers p below 1") {
    TempDir tmp;
    // without the flag, p <= 1 is a usage error
    CHECK(cli::run({"alpha", "--p-min", "0.2", "--p-max", "0.8", "--steps", "3"}) == 1);
    const std::string out = tmp.file("explore.json");
    CHECK(cli::run({"alpha", "--p-min", "0.2", "--p-max", "0.8", "--steps", "3", "--exploratory",
                    "--format", "json", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.size() == 3);
    // alpha -> 1/2 toward p = 0 per the Brunn-Minkowski scaling limit
    CHECK(j[0]["alpha"].get<double>() < 1.0);
    CHECK(j[0]["alpha"].get<double>() > 0.45);
}

TEST_CASE("worker count does not change emitted bytes") {
    TempDir tmp;
    put(tmp.file("disk.json"),
        R"({"family": "uniform", "dim": 2, "params": {"body": {"kind": "ball", "dim": 2, "radius": 1.0}}})");
    const std::string out1 = tmp.file("w1.csv"), out3 = tmp.file("w3.csv");
    CHECK(cli::run({"body", "--kind", "intersection", "--density", tmp.file("disk.json"),
                    "--directions", "32", "--out", out1}) == 0);
    ::setenv("EPIGEOM_WORKERS", "3", 1);
    CHECK(cli::run({"body", "--kind", "intersection", "--density", tmp.file("disk.json"),
                    "--directions", "32", "--out", out3}) == 0);
    ::unsetenv("EPIGEOM_WORKERS");
    CHECK(slurp(out1) == slurp(out3));
}
