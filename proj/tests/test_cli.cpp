#include "cli.hpp"
#include "sf/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sf;
using sf::cli::CliCommand;
using sf::cli::Format;
using sf::cli::Verb;

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sf_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(const CliCommand& c) {
  std::ostringstream out, err;
  const int status = sf::cli::run(c, out, err);
  return {status, out.str(), err.str()};
}

Outcome run_args(std::vector<std::string> args) {
  std::vector<const char*> argv{"sf_cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = sf::cli::run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

constexpr const char* kZeroConfig = R"({
  "p": 3, "n": 5, "s": 0, "sigma": 1,
  "signal": {"kind": "zero"},
  "estimators": ["naive"], "trials": 1, "master_seed": 99
})";

constexpr const char* kSweepConfig = R"({
  "p": 16, "n": 64, "s": 2, "sigma": 1,
  "signal": {"kind": "worst-case-quartic"},
  "estimators": ["ght", "ewht"], "trials": 40, "master_seed": 5,
  "sweep": {"axis": "p", "values": [16, 64]}
})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("estimate passes the naive column sum through") {
    TempDir dir;
    CliCommand gen;
    gen.verb = Verb::gen;
    gen.config_path = dir.write("zero.json", kZeroConfig);
    gen.output_path = dir.path / "y.csv";
    REQUIRE(run(gen).status == 0);
    CHECK(fs::exists(dir.path / "y.csv.config.json"));
    CHECK(fs::exists(dir.path / "y.csv.theta.csv"));

    std::ifstream in(dir.path / "y.csv");
    const auto file = read_instance_csv(in);
    std::string expected = "estimate";
    const Vector sum = file.y.rowwise().sum();
    for (Eigen::Index j = 0; j < sum.size(); ++j) expected += "," + format_real(sum(j));

    CliCommand est;
    est.verb = Verb::estimate;
    est.input_path = dir.path / "y.csv";
    est.estimator = "naive";
    const auto r = run(est);
    CHECK(r.status == 0);
    CHECK(r.out.find(expected + "\n") != std::string::npos);
  }

  TEST_CASE("oracle estimate reads the support from the sidecar") {
    TempDir dir;
    REQUIRE(run_args({"gen", "--config", dir.write("c.json", kSweepConfig).string(), "--out",
                      (dir.path / "y.csv").string()})
                .status == 0);
    const auto r = run_args({"estimate", "--input", (dir.path / "y.csv").string(), "--estimator", "oracle",
                             "--format", "json"});
    CHECK(r.status == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc[0]["support"].size() == 2);
  }

  TEST_CASE("sweep writes one row per estimator and grid value, byte stable") {
    TempDir dir;
    const auto config = dir.write("sweep.json", kSweepConfig);
    CliCommand c;
    c.verb = Verb::sweep;
    c.config_path = config;
    c.output_path = dir.path / "a.csv";
    c.threads = 1;
    REQUIRE(run(c).status == 0);
    c.output_path = dir.path / "b.csv";
    c.threads = 3;
    REQUIRE(run(c).status == 0);
    const std::string a = slurp(dir.path / "a.csv");
    CHECK(a == slurp(dir.path / "b.csv"));
    std::istringstream in(a);
    CHECK(read_risk_csv(in).size() == 4);
    const auto sidecar = nlohmann::json::parse(slurp(dir.path / "a.csv.config.json"));
    CHECK(sidecar["sweep"]["values"].size() == 2);
    CHECK(sidecar["experiment"]["estimators"][0]["sparsity_mode"] == "s-known");

    CliCommand plot;
    plot.verb = Verb::plot;
    plot.input_path = dir.path / "a.csv";
    plot.output_path = dir.path / "a.svg";
    REQUIRE(run(plot).status == 0);
    CHECK(slurp(dir.path / "a.svg").find("<polyline") != std::string::npos);
  }

  TEST_CASE("seed override and json output") {
    TempDir dir;
    const auto config = dir.write("c.json", kSweepConfig);
    const auto a = run_args({"bench", "--config", config.string(), "--out", (dir.path / "a.json").string(),
                             "--format", "json", "--seed", "1"});
    const auto b = run_args({"bench", "--config", config.string(), "--out", (dir.path / "b.json").string(),
                             "--format", "json", "--seed", "2"});
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    const auto ja = nlohmann::json::parse(slurp(dir.path / "a.json"));
    CHECK(ja.size() == 2);
    // GHT kills every column here, so its error is seed independent; EWHT's is not.
    CHECK(ja[1]["mse"] != nlohmann::json::parse(slurp(dir.path / "b.json"))[1]["mse"]);
    CHECK(nlohmann::json::parse(slurp(dir.path / "a.json.config.json"))["experiment"]["master_seed"] == 1);
  }

  TEST_CASE("verify runs the lemma suite") {
    const auto r = run_args({"verify"});
    CHECK(r.status == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("checks hold") != std::string::npos);
  }

  TEST_CASE("validation errors exit with status 1") {
    TempDir dir;
    CHECK(run_args({"bench", "--out", "x.csv"}).status == 1);
    CHECK(run_args({"bench", "--config", (dir.path / "missing.json").string(), "--out",
                    (dir.path / "x.csv").string()})
              .status == 1);
    const auto bad = dir.write("bad.json", "{\n  \"p\": 4,\n  \"n\": ,\n}");
    const auto r = run_args({"bench", "--config", bad.string(), "--out", (dir.path / "x.csv").string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("line 3") != std::string::npos);
    const auto typo = dir.write("typo.json", R"({"p": 4, "n": 8, "trails": 3})");
    const auto t = run_args({"bench", "--config", typo.string(), "--out", (dir.path / "x.csv").string()});
    CHECK(t.status == 1);
    CHECK(t.err.find("config.trails") != std::string::npos);
    CHECK(run_args({"frobnicate"}).status == 1);
    CHECK(run_args({"bench", "--config", "a", "--out", "b", "--format", "xml"}).status == 1);
    CHECK(run_args({"estimate", "--input", (dir.path / "none.csv").string(), "--estimator", "naive"}).status == 1);
    CHECK(run_args({"plot", "--input", "x.csv"}).status == 1);
  }
}
