#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "evx/harness.hpp"
#include "evx/io.hpp"

using namespace evx;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.model = ProcessModel::armax(0.5);
    config.n = 2000;
    config.tau = 20.0;  // rho = 0.01
    config.replications = 300;
    config.seed = 424242;
    config.k_max = 3;
    config.support_max = 60;
    config.estimators = {{EstimatorMethod::Intervals},
                         {EstimatorMethod::Blocks},
                         {EstimatorMethod::Runs, 5}};
    return config;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("config validation") {
    ExperimentConfig config = small_config();
    CHECK_NOTHROW(config.validate());

    ExperimentConfig both = small_config();
    both.rho = 0.01;
    CHECK_THROWS_AS(both.validate(), std::invalid_argument);

    ExperimentConfig neither = small_config();
    neither.tau.reset();
    CHECK_THROWS_AS(neither.validate(), std::invalid_argument);

    ExperimentConfig zero_reps = small_config();
    zero_reps.replications = 0;
    CHECK_THROWS_AS(zero_reps.validate(), std::invalid_argument);

    ExperimentConfig bad_k = small_config();
    bad_k.k_max = 0;
    CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);

    ExperimentConfig misordered = small_config();
    misordered.n_grid = {1000, 500, 2000};
    CHECK_THROWS_AS(misordered.validate(), std::invalid_argument);

    ExperimentConfig short_grid = small_config();
    short_grid.n_grid = {1000, 2000};
    CHECK_THROWS_AS(short_grid.validate(), std::invalid_argument);

    ExperimentConfig huge_tau = small_config();
    huge_tau.tau = 5000.0;  // rho >= 1
    CHECK_THROWS_AS(huge_tau.validate(), std::invalid_argument);
}

TEST_CASE("config JSON parsing round trip and unknown-key rejection") {
    const std::string text = R"({
      "model": {"kind": "ARMAX", "alpha": 0.5},
      "n": 2000,
      "tau": 20.0,
      "threshold_method": "theoretical",
      "replications": 300,
      "seed": 424242,
      "k_max": 3,
      "support_max": 60,
      "estimators": ["intervals", {"method": "runs", "run_len": 7}],
      "output_dir": "out"
    })";
    const ExperimentConfig config = parse_config_json(text);
    CHECK(config.model.kind == ProcessKind::Armax);
    CHECK(config.model.alpha == 0.5);
    CHECK(config.n == 2000);
    CHECK(*config.tau == 20.0);
    CHECK(config.replications == 300);
    CHECK(config.estimators.size() == 2);
    CHECK(config.estimators[1].run_len == 7);

    const ExperimentConfig reparsed = parse_config_json(config_to_json_string(config));
    CHECK(config_to_json_string(reparsed) == config_to_json_string(config));

    CHECK_THROWS_AS(parse_config_json(R"({"model": {"kind": "IID"}, "n": 10, "tau": 1,
                                          "taus": 2})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_json(R"({"model": {"kind": "WAT"}, "n": 10, "tau": 1})"),
                    std::invalid_argument);
}

TEST_CASE("default support_max follows ceil(10/(theta*rho))") {
    ExperimentConfig config = small_config();
    config.support_max = 0;
    // theta = 0.5, rho = 0.01 -> 10/0.005 = 2000
    CHECK(config.resolved_support_max(config.n) == 2000);
}

TEST_CASE("report columns and counts are consistent") {
    const ExperimentConfig config = small_config();
    const ExperimentReport report = run_experiment(config);

    CHECK(report.theta_true == 0.5);
    CHECK(report.rho == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(report.support_max == 60);

    // empirical columns sum to 1 with tail and censoring accounted
    if (report.censored_count < config.replications)
        CHECK(report.emp_tstar.total() == doctest::Approx(1.0).epsilon(1e-12));
    if (report.n_gaps > 0)
        CHECK(report.emp_t1.total() == doctest::Approx(1.0).epsilon(1e-12));

    // rho_hat close to rho (theoretical threshold)
    const double se = std::sqrt(report.rho * (1.0 - report.rho) /
                                (static_cast<double>(config.replications) *
                                 static_cast<double>(config.n)));
    CHECK(std::abs(report.rho_hat - report.rho) < 5.0 * se);

    // identity residuals within 3 combined standard errors on the head bins
    for (std::size_t j = 1; j <= 10; ++j) {
        CHECK(std::abs(report.id4_residual[j - 1]) <= 3.0 * report.id4_se[j - 1] + 1e-12);
        CHECK(std::abs(report.id13_residual[j - 1]) <= 3.0 * report.id13_se[j - 1] + 1e-12);
    }

    // censoring counts are nondecreasing in k
    REQUIRE(report.kth_hitting.size() == 3);
    CHECK(report.kth_hitting[0].censored <= report.kth_hitting[1].censored);
    CHECK(report.kth_hitting[1].censored <= report.kth_hitting[2].censored);
    CHECK(report.kth_hitting[0].censored == report.censored_count);

    // scalar limits
    CHECK(report.limit_via_gap_law == 8.0);
    CHECK(report.limit_via_scaled_tail == doctest::Approx(20.0 / 0.5).epsilon(1e-15));
    CHECK(report.estimators.size() == 3);
    for (const EstimatorSummary& est : report.estimators)
        CHECK(est.n_valid + est.n_failed == config.replications);
}

TEST_CASE("degenerate single replication with no exceedance") {
    ExperimentConfig config;
    config.model = ProcessModel::iid(Marginal::Uniform);
    config.n = 50;
    config.rho = 1e-9;  // threshold so high nothing exceeds
    config.replications = 1;
    config.seed = 7;
    config.support_max = 10;
    const ExperimentReport report = run_experiment(config);
    CHECK(report.censored_count == 1);
    CHECK(report.emp_tstar.total() == 0.0);
    CHECK(report.emp_t1.total() == 0.0);
    CHECK_FALSE(report.warnings.empty());

    const auto dir = std::filesystem::temp_directory_path() / "evx_degenerate";
    std::filesystem::remove_all(dir);
    const auto written = emit_report(report, OutputFormat::Both, dir);
    CHECK(written.size() == 2);
}

TEST_CASE("reports are bit-identical across runs and parallelism levels") {
    const ExperimentConfig config = small_config();
    const ExperimentReport serial_a = run_experiment(config, 1);
    const ExperimentReport serial_b = run_experiment(config, 1);
    const ExperimentReport threaded = run_experiment(config, 3);

    const std::string csv_a = report_to_csv_string(serial_a);
    CHECK(csv_a == report_to_csv_string(serial_b));
    CHECK(csv_a == report_to_csv_string(threaded));
    const std::string json_a = report_to_json_string(serial_a);
    CHECK(json_a == report_to_json_string(serial_b));
    CHECK(json_a == report_to_json_string(threaded));
}

TEST_CASE("CSV schema: header and row count") {
    ExperimentConfig config = small_config();
    config.replications = 50;
    const ExperimentReport report = run_experiment(config);
    const std::string csv = report_to_csv_string(report);

    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "j,emp_tstar,emp_t1,eq17,eq2a_raw,eq14_norm,id4_residual,id13_residual");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == report.support_max);
}

TEST_CASE("emitted JSON parses back losslessly at 12 digits") {
    ExperimentConfig config = small_config();
    config.replications = 100;
    const ExperimentReport report = run_experiment(config);

    const auto dir = std::filesystem::temp_directory_path() / "evx_roundtrip";
    std::filesystem::remove_all(dir);
    const auto written = emit_report(report, OutputFormat::Json, dir);
    REQUIRE(written.size() == 1);

    // a generic parser recovers exactly the 12-digit-rounded values
    const nlohmann::json parsed = nlohmann::json::parse(slurp(written[0]));
    CHECK(parsed.at("rho_hat").get<double>() == round_to_12_digits(report.rho_hat));
    CHECK(parsed.at("u_mean").get<double>() == round_to_12_digits(report.u_mean));
    CHECK(parsed.at("scalars").at("cond_mean_tstar").get<double>() ==
          round_to_12_digits(report.cond_mean_tstar));
    CHECK(parsed.at("scalars").at("eq19_value_at_n").get<double>() ==
          round_to_12_digits(report.eq19_value_at_n));
    CHECK(parsed.at("distances").at("sup_tstar_vs_eq17_norm").get<double>() ==
          round_to_12_digits(report.sup_tstar_vs_eq17_norm));
    CHECK(parsed.at("counts").at("tstar_tail_count").get<std::uint64_t>() ==
          report.tstar_tail_count);
}

TEST_CASE("convergence study distances shrink for the exact iid law") {
    ExperimentConfig config;
    config.model = ProcessModel::iid(Marginal::Uniform);
    config.tau = 5.0;
    config.n = 4000;
    config.n_grid = {1000, 2000, 4000};
    config.replications = 400;
    config.seed = 31;
    config.support_max = 200;
    const ConvergenceStudy study = convergence_study(config);
    REQUIRE(study.points.size() == 3);
    CHECK(study.sup_tstar_non_increasing_within_2se);
    for (const ConvergencePoint& point : study.points)
        CHECK(point.sup_tstar < 0.05);

    const auto dir = std::filesystem::temp_directory_path() / "evx_convergence";
    std::filesystem::remove_all(dir);
    const auto written = emit_convergence_study(study, OutputFormat::Both, dir);
    CHECK(written.size() == 7);  // 3 runs x 2 files + convergence.json
}

TEST_CASE("convergence study requires a grid") {
    ExperimentConfig config = small_config();
    CHECK_THROWS_AS(convergence_study(config), std::invalid_argument);
}
