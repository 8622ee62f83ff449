#include "helpers.hpp"
#include "sf/experiment_config.hpp"
#include "sf/report.hpp"
#include "sf/svg_plot.hpp"

#include <doctest.h>

#include <sstream>

using namespace sf;

TEST_SUITE("report") {
  TEST_CASE("real formatting round trips") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(512) == "512");
    CHECK(format_real(-2.5e-300) == "-2.5e-300");
    CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
    RandomStream rng(5);
    for (int k = 0; k < 100; ++k) {
      const double x = rng.gaussian() * std::pow(10.0, rng.below(40) - 20.0);
      CHECK(std::stod(format_real(x)) == x);
    }
  }

  TEST_CASE("risk CSV round trip") {
    RiskReport a;
    a.estimator_id = "ght";
    a.p = 64;
    a.n = 256;
    a.s = 4;
    a.sigma = 1;
    a.trials = 500;
    a.mean_sq_error = 123.456;
    a.std_error = 0.1;
    a.wall_time_ms = 77;
    RiskReport b = a;
    b.estimator_id = "gss";
    b.deviation_bound = 1000.5;
    b.violation_rate = 0.02;

    std::ostringstream out;
    write_risk_csv(out, {a, b});
    CHECK(out.str() ==
          "estimator,p,n,s,sigma,trials,mse,stderr,bound,violation_rate,wall_ms\n"
          "ght,64,256,4,1,500,123.456,0.10000000000000001,,,0\n"
          "gss,64,256,4,1,500,123.456,0.10000000000000001,1000.5,0.02,0\n");
    std::istringstream in(out.str());
    const auto rows = read_risk_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].deviation_bound == 1000.5);
    CHECK_FALSE(rows[0].violation_rate.has_value());

    std::ostringstream timed;
    write_risk_csv(timed, {a}, true);
    CHECK(timed.str().find(",77\n") != std::string::npos);
    std::istringstream broken("estimator,p\nx,1\n");
    CHECK_THROWS_AS(read_risk_csv(broken), InvalidArgument);
  }

  TEST_CASE("instance CSV round trip") {
    const Matrix y = test::gaussian_matrix(3, 4, 9);
    std::ostringstream out;
    write_instance_csv(out, {3, 4, 1, 0.5, 42}, y);
    CHECK(out.str().rfind("# p n s sigma seed\n# 3 4 1 0.5 42\n", 0) == 0);
    std::istringstream in(out.str());
    const auto file = read_instance_csv(in);
    CHECK(file.y == y);
    CHECK(file.header.seed == 42);
    CHECK(file.header.sigma == 0.5);

    std::istringstream short_file("# p n s sigma seed\n# 2 2 0 1 0\n1,2\n");
    CHECK_THROWS_WITH_AS(read_instance_csv(short_file), "expected 2 columns, found 1", InvalidArgument);
    std::istringstream bad_cell("# p n s sigma seed\n# 2 1 0 1 0\n1,x\n");
    CHECK_THROWS_WITH_AS(read_instance_csv(bad_cell), "line 3: not a number: 'x'", InvalidArgument);
  }

  TEST_CASE("config parsing") {
    const auto doc = nlohmann::json::parse(R"({
      "p": 8, "n": 12, "s": 2, "sigma": 1, "delta": 0.1,
      "signal": {"kind": "spherical", "magnitude": 5, "units": "sigma_sqrt_p"},
      "estimators": ["naive", {"kind": "gss", "id": "gss_full", "cap": "full", "bound": "gss_deviation"},
                     {"kind": "ewht", "side": "two-sided", "bound": 12.5}],
      "trials": 500, "master_seed": 18446744073709551615
    })");
    const ExperimentSpec spec = experiment_from_json(doc);
    CHECK(spec.p == 8);
    CHECK(spec.master_seed == 18446744073709551615ull);
    REQUIRE(spec.estimators.size() == 3);
    CHECK(spec.estimators[1].full_search);
    CHECK(spec.estimators[1].label() == "gss_full");
    CHECK(spec.estimators[2].side == ThresholdSide::two_sided);
    CHECK(spec.estimators[2].bound.kind == BoundKind::fixed);
    CHECK(spec.signal.resolved_magnitude(1.0, 8) == doctest::Approx(5 * std::sqrt(8.0)));

    const auto resolved = experiment_to_json(spec);
    CHECK(resolved["estimators"][0]["delta"] == 0.1);
    CHECK(resolved["generator"] == std::string(kGeneratorId));
    const ExperimentSpec again = experiment_from_json(resolved);
    CHECK(experiment_to_json(again) == resolved);
  }

  TEST_CASE("config errors name the field") {
    const auto fails_with = [](const char* text, const std::string& needle) {
      try {
        experiment_from_json(nlohmann::json::parse(text));
      } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
      }
      return false;
    };
    CHECK(fails_with(R"({"n": 4})", "config.p"));
    CHECK(fails_with(R"({"p": 4, "n": 4, "estimators": [{"kind": "foo"}]})", "config.estimators[0].kind"));
    CHECK(fails_with(R"({"p": 4, "n": 4, "sigma": "x"})", "config.sigma"));
    CHECK(fails_with(R"({"p": 4, "n": 4, "typo": 1})", "config.typo"));
    CHECK(fails_with(R"({"p": 4, "n": 4, "estimators": [{"kind": "gss", "cap": "most"}]})",
                     "config.estimators[0].cap"));
    CHECK(fails_with(R"({"p": 4, "n": 4, "s": 9})", "config:"));
  }

  TEST_CASE("sweep config") {
    const auto doc = nlohmann::json::parse(R"({"sweep": {"axis": "p", "values": [64, 256, 1024]}})");
    const auto sweep = sweep_from_json(doc);
    CHECK(sweep.axis == SweepAxis::p);
    CHECK(sweep.values == std::vector<std::size_t>{64, 256, 1024});
    CHECK_THROWS_AS(sweep_from_json(nlohmann::json::parse(R"({"sweep": {"axis": "q", "values": []}})")),
                    ConfigError);
  }

  TEST_CASE("svg plot") {
    const std::string svg = render_loglog_svg({{"ght", {64, 256, 1024}, {10, 20, 40}},
                                               {"ewht <one-sided>", {64, 256, 1024}, {100, 400, 1600}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t polylines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
      ++polylines;
    }
    CHECK(polylines == 2);
    CHECK(svg.find("&lt;one-sided&gt;") != std::string::npos);
    CHECK(svg.find("1e3") != std::string::npos);
  }
}
