#include "evx/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace evx {

using ordered_json = nlohmann::ordered_json;

OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "both") return OutputFormat::Both;
    throw std::invalid_argument("format must be one of csv|json|both, got '" + text + "'");
}

double round_to_12_digits(double x) {
    if (x == 0.0) return 0.0;  // normalizes -0
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", x);
    return std::strtod(buffer, nullptr);
}

namespace {

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", x);
    return buffer;
}

void check_known_keys(const ordered_json& obj, std::initializer_list<const char*> known,
                      const std::string& where) {
    for (const auto& item : obj.items()) {
        bool found = false;
        for (const char* key : known)
            if (item.key() == key) {
                found = true;
                break;
            }
        if (!found)
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
    }
}

ProcessModel parse_model(const ordered_json& obj) {
    check_known_keys(obj, {"kind", "marginal", "alpha", "m"}, "model");
    if (!obj.contains("kind")) throw std::invalid_argument("config: model.kind is required");
    const std::string kind = obj.at("kind").get<std::string>();

    Marginal marginal = Marginal::UnitFrechet;
    if (obj.contains("marginal")) {
        const std::string text = obj.at("marginal").get<std::string>();
        if (text == "unit_frechet")
            marginal = Marginal::UnitFrechet;
        else if (text == "uniform")
            marginal = Marginal::Uniform;
        else
            throw std::invalid_argument("config: model.marginal must be unit_frechet|uniform");
    }

    if (kind == "IID") return ProcessModel::iid(marginal);
    if (kind == "ARMAX") {
        if (!obj.contains("alpha"))
            throw std::invalid_argument("config: model.alpha is required for ARMAX");
        ProcessModel model = ProcessModel::armax(obj.at("alpha").get<double>());
        model.marginal = marginal;
        return model;
    }
    if (kind == "MOVING_MAX") {
        if (!obj.contains("m"))
            throw std::invalid_argument("config: model.m is required for MOVING_MAX");
        return ProcessModel::moving_max(obj.at("m").get<std::size_t>(), marginal);
    }
    throw std::invalid_argument("config: model.kind must be IID|ARMAX|MOVING_MAX");
}

EstimatorMethod parse_estimator_method(const std::string& text) {
    if (text == "intervals") return EstimatorMethod::Intervals;
    if (text == "blocks") return EstimatorMethod::Blocks;
    if (text == "runs") return EstimatorMethod::Runs;
    throw std::invalid_argument("config: estimator method must be intervals|blocks|runs");
}

std::vector<EstimatorConfig> parse_estimators(const ordered_json& arr) {
    std::vector<EstimatorConfig> estimators;
    for (const auto& entry : arr) {
        EstimatorConfig est;
        if (entry.is_string()) {
            est.method = parse_estimator_method(entry.get<std::string>());
        } else {
            check_known_keys(entry, {"method", "run_len", "block_len"}, "estimators[]");
            est.method = parse_estimator_method(entry.at("method").get<std::string>());
            if (entry.contains("run_len")) est.run_len = entry.at("run_len").get<std::size_t>();
            if (entry.contains("block_len"))
                est.block_len = entry.at("block_len").get<std::size_t>();
        }
        if (est.method == EstimatorMethod::Runs && est.run_len < 1)
            throw std::invalid_argument("config: estimator run_len must be >= 1");
        estimators.push_back(est);
    }
    return estimators;
}

ordered_json model_to_json(const ProcessModel& model) {
    ordered_json obj;
    obj["kind"] = to_string(model.kind);
    obj["marginal"] = to_string(model.marginal);
    if (model.kind == ProcessKind::Armax) obj["alpha"] = round_to_12_digits(model.alpha);
    if (model.kind == ProcessKind::MovingMax) obj["m"] = model.m;
    return obj;
}

ordered_json config_to_json(const ExperimentConfig& config) {
    ordered_json obj;
    obj["model"] = model_to_json(config.model);
    obj["n"] = config.n;
    if (config.tau) obj["tau"] = round_to_12_digits(*config.tau);
    if (config.rho) obj["rho"] = round_to_12_digits(*config.rho);
    obj["threshold_method"] = to_string(config.threshold_method);
    obj["replications"] = config.replications;
    obj["seed"] = config.seed;
    obj["k_max"] = config.k_max;
    if (config.support_max > 0) obj["support_max"] = config.support_max;
    ordered_json ests = ordered_json::array();
    for (const EstimatorConfig& est : config.estimators) {
        ordered_json entry;
        entry["method"] = to_string(est.method);
        if (est.method == EstimatorMethod::Runs) entry["run_len"] = est.run_len;
        if (est.method == EstimatorMethod::Blocks) entry["block_len"] = est.block_len;
        ests.push_back(entry);
    }
    obj["estimators"] = ests;
    if (!config.n_grid.empty()) obj["n_grid"] = config.n_grid;
    obj["output_dir"] = config.output_dir;
    return obj;
}

ordered_json rounded_array(const std::vector<double>& values) {
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(round_to_12_digits(v));
    return arr;
}

ordered_json interval_to_json(const IntervalEstimate& interval) {
    ordered_json obj;
    obj["value"] = round_to_12_digits(interval.value);
    obj["ci_lo"] = round_to_12_digits(interval.ci_lo);
    obj["ci_hi"] = round_to_12_digits(interval.ci_hi);
    return obj;
}

ordered_json report_to_json(const ExperimentReport& report) {
    ordered_json obj;
    obj["config"] = config_to_json(report.config);
    obj["theta_true"] = round_to_12_digits(report.theta_true);
    obj["rho"] = round_to_12_digits(report.rho);
    obj["tau"] = round_to_12_digits(report.tau);
    obj["support_max"] = report.support_max;
    obj["u_mean"] = round_to_12_digits(report.u_mean);
    obj["rho_hat"] = round_to_12_digits(report.rho_hat);
    obj["total_exceedances"] = report.total_exceedances;
    obj["censored_count"] = report.censored_count;
    obj["n_gaps"] = report.n_gaps;

    ordered_json scalars;
    scalars["cond_mean_tstar"] = round_to_12_digits(report.cond_mean_tstar);
    scalars["rho_hat_x_cond_mean"] = interval_to_json(report.rho_hat_x_cond_mean);
    scalars["rho_x_cond_mean"] = round_to_12_digits(report.rho_x_cond_mean);
    scalars["censoring_aware_mean_tstar"] =
        round_to_12_digits(report.censoring_aware_mean_tstar);
    scalars["limit_via_gap_law"] = round_to_12_digits(report.limit_via_gap_law);
    scalars["limit_via_scaled_tail"] = round_to_12_digits(report.limit_via_scaled_tail);
    scalars["eq19_value_at_n"] = round_to_12_digits(report.eq19_value_at_n);
    scalars["eq19_limit"] = round_to_12_digits(report.eq19_limit);
    scalars["n_x_emp_tstar_at_horizon"] =
        round_to_12_digits(report.n_x_emp_tstar_at_horizon);
    scalars["t_theta_weight_at_zero"] = round_to_12_digits(report.t_theta_weight_at_zero);
    scalars["t_theta_is_proper"] = report.t_theta_is_proper;
    obj["scalars"] = scalars;

    ordered_json distances;
    distances["sup_tstar_vs_eq17_norm"] = round_to_12_digits(report.sup_tstar_vs_eq17_norm);
    distances["tv_tstar_vs_eq17_norm"] = round_to_12_digits(report.tv_tstar_vs_eq17_norm);
    distances["sup_t1_vs_eq14_norm"] = round_to_12_digits(report.sup_t1_vs_eq14_norm);
    distances["tv_t1_vs_eq14_norm"] = round_to_12_digits(report.tv_t1_vs_eq14_norm);
    distances["sup_t1_vs_eq2a_raw"] = round_to_12_digits(report.sup_t1_vs_eq2a_raw);
    distances["tv_t1_vs_eq2a_raw"] = round_to_12_digits(report.tv_t1_vs_eq2a_raw);
    obj["distances"] = distances;

    ordered_json ests = ordered_json::array();
    for (const EstimatorSummary& est : report.estimators) {
        ordered_json entry;
        entry["method"] = to_string(est.method);
        if (est.method == EstimatorMethod::Runs) entry["run_len"] = est.run_len;
        if (est.method == EstimatorMethod::Blocks) entry["block_len"] = est.block_len;
        entry["n_valid"] = est.n_valid;
        entry["n_failed"] = est.n_failed;
        entry["mean_value"] = round_to_12_digits(est.mean_value);
        entry["sd_value"] = round_to_12_digits(est.sd_value);
        entry["mean_abs_error"] = round_to_12_digits(est.mean_abs_error);
        entry["mean_raw"] = round_to_12_digits(est.mean_raw);
        ests.push_back(entry);
    }
    obj["estimators"] = ests;

    ordered_json kth = ordered_json::array();
    for (const KthHittingSummary& summary : report.kth_hitting) {
        ordered_json entry;
        entry["k"] = summary.k;
        entry["censored"] = summary.censored;
        entry["conditional_mean"] = round_to_12_digits(summary.conditional_mean);
        entry["tail_mass"] = round_to_12_digits(summary.pmf.tail_mass);
        entry["mass"] = rounded_array(summary.pmf.mass);
        entry["counts"] = summary.counts;
        entry["tail_count"] = summary.tail_count;
        kth.push_back(entry);
    }
    obj["kth_hitting"] = kth;

    ordered_json counts;
    counts["tstar_counts"] = report.tstar_counts;
    counts["tstar_tail_count"] = report.tstar_tail_count;
    counts["tstar_count_at_support_edge"] = report.tstar_count_at_support_edge;
    counts["tstar_count_at_horizon"] = report.tstar_count_at_horizon;
    counts["gap_counts"] = report.gap_counts;
    counts["gap_tail_count"] = report.gap_tail_count;
    obj["counts"] = counts;

    obj["emp_tstar_tail_mass"] = round_to_12_digits(report.emp_tstar.tail_mass);
    obj["emp_t1_tail_mass"] = round_to_12_digits(report.emp_t1.tail_mass);
    obj["id4_se"] = rounded_array(report.id4_se);
    obj["id13_se"] = rounded_array(report.id13_se);
    obj["warnings"] = report.warnings;
    return obj;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    ordered_json obj;
    try {
        obj = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    check_known_keys(obj,
                     {"model", "n", "tau", "rho", "threshold_method", "replications", "seed",
                      "k_max", "support_max", "estimators", "n_grid", "output_dir"},
                     "top level");
    ExperimentConfig config;
    if (!obj.contains("model")) throw std::invalid_argument("config: model is required");
    config.model = parse_model(obj.at("model"));
    if (!obj.contains("n")) throw std::invalid_argument("config: n is required");
    config.n = obj.at("n").get<std::size_t>();
    if (obj.contains("tau")) config.tau = obj.at("tau").get<double>();
    if (obj.contains("rho")) config.rho = obj.at("rho").get<double>();
    if (obj.contains("threshold_method")) {
        const std::string text_method = obj.at("threshold_method").get<std::string>();
        if (text_method == "theoretical")
            config.threshold_method = ThresholdMethod::TheoreticalQuantile;
        else if (text_method == "empirical")
            config.threshold_method = ThresholdMethod::EmpiricalQuantile;
        else
            throw std::invalid_argument("config: threshold_method must be theoretical|empirical");
    }
    if (obj.contains("replications"))
        config.replications = obj.at("replications").get<std::size_t>();
    if (obj.contains("seed")) config.seed = obj.at("seed").get<std::uint64_t>();
    if (obj.contains("k_max")) config.k_max = obj.at("k_max").get<std::size_t>();
    if (obj.contains("support_max"))
        config.support_max = obj.at("support_max").get<std::size_t>();
    if (obj.contains("estimators")) config.estimators = parse_estimators(obj.at("estimators"));
    if (obj.contains("n_grid"))
        config.n_grid = obj.at("n_grid").get<std::vector<std::size_t>>();
    if (obj.contains("output_dir"))
        config.output_dir = obj.at("output_dir").get<std::string>();
    config.validate();
    return config;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string config_to_json_string(const ExperimentConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

std::string report_to_json_string(const ExperimentReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string report_to_csv_string(const ExperimentReport& report) {
    std::ostringstream out;
    out << "j,emp_tstar,emp_t1,eq17,eq2a_raw,eq14_norm,id4_residual,id13_residual\n";
    for (std::size_t j = 1; j <= report.support_max; ++j) {
        out << j << ',' << format_number(report.emp_tstar.at(j)) << ','
            << format_number(report.emp_t1.at(j)) << ',' << format_number(report.eq17[j - 1])
            << ',' << format_number(report.eq2a_raw[j - 1]) << ','
            << format_number(report.eq14_norm[j - 1]) << ','
            << format_number(report.id4_residual[j - 1]) << ','
            << format_number(report.id13_residual[j - 1]) << '\n';
    }
    return out.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               OutputFormat format,
                                               const std::filesystem::path& dir,
                                               const std::string& stem) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output dir: " + dir.string());
    std::vector<std::filesystem::path> written;
    if (format != OutputFormat::Json) {
        const std::filesystem::path path = dir / (stem + ".csv");
        write_text_file(path, report_to_csv_string(report));
        written.push_back(path);
    }
    if (format != OutputFormat::Csv) {
        const std::filesystem::path path = dir / (stem + ".json");
        write_text_file(path, report_to_json_string(report));
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> emit_convergence_study(const ConvergenceStudy& study,
                                                          OutputFormat format,
                                                          const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const ExperimentReport& report : study.reports) {
        const std::string stem = "report_n" + std::to_string(report.config.n);
        auto paths = emit_report(report, format, dir, stem);
        written.insert(written.end(), paths.begin(), paths.end());
    }

    ordered_json obj;
    ordered_json points = ordered_json::array();
    for (const ConvergencePoint& point : study.points) {
        ordered_json entry;
        entry["n"] = point.n;
        entry["rho"] = round_to_12_digits(point.rho);
        entry["sup_tstar_vs_eq17_norm"] = round_to_12_digits(point.sup_tstar);
        entry["sup_tstar_se"] = round_to_12_digits(point.sup_tstar_se);
        entry["tv_tstar_vs_eq17_norm"] = round_to_12_digits(point.tv_tstar);
        entry["sup_t1_vs_eq2a_raw"] = round_to_12_digits(point.sup_t1);
        entry["sup_t1_se"] = round_to_12_digits(point.sup_t1_se);
        entry["tv_t1_vs_eq2a_raw"] = round_to_12_digits(point.tv_t1);
        entry["rho_hat_x_cond_mean"] = interval_to_json(point.rho_hat_x_cond_mean);
        points.push_back(entry);
    }
    obj["points"] = points;
    obj["sup_tstar_non_increasing_within_2se"] = study.sup_tstar_non_increasing_within_2se;
    obj["sup_t1_non_increasing_within_2se"] = study.sup_t1_non_increasing_within_2se;
    obj["limit_via_gap_law"] = round_to_12_digits(study.limit_via_gap_law);
    obj["limit_via_scaled_tail"] = round_to_12_digits(study.limit_via_scaled_tail);

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output dir: " + dir.string());
    const std::filesystem::path path = dir / "convergence.json";
    write_text_file(path, obj.dump(2) + "\n");
    written.push_back(path);
    return written;
}

} // namespace evx
