#include "evx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace evx {

void ExperimentConfig::validate() const {
    model.validate();
    if (n < 1) throw std::invalid_argument("config.n must be >= 1");
    if (tau.has_value() == rho.has_value())
        throw std::invalid_argument("config: exactly one of tau/rho must be set");
    if (tau && !(*tau > 0.0)) throw std::invalid_argument("config.tau must be positive");
    if (rho && (!(*rho > 0.0) || !(*rho < 1.0)))
        throw std::invalid_argument("config.rho must be in (0,1)");
    if (replications < 1) throw std::invalid_argument("config.replications must be >= 1");
    if (k_max < 1) throw std::invalid_argument("config.k_max must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("config.output_dir must be non-empty");
    if (!n_grid.empty()) {
        if (n_grid.size() < 3)
            throw std::invalid_argument("config.n_grid needs at least 3 points");
        for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
            if (n_grid[i] >= n_grid[i + 1])
                throw std::invalid_argument("config.n_grid must be strictly increasing");
    }
    std::vector<std::size_t> horizons = n_grid.empty() ? std::vector<std::size_t>{n} : n_grid;
    for (std::size_t horizon : horizons) {
        const double r = resolved_rho(horizon);
        if (!(r > 0.0) || !(r < 1.0))
            throw std::invalid_argument("config: tau/n must be in (0,1) for every horizon");
        if (resolved_support_max(horizon) > 20'000'000)
            throw std::invalid_argument(
                "config: default support_max exceeds 2e7 bins; set support_max explicitly");
    }
}

double ExperimentConfig::resolved_rho(std::size_t n_points) const {
    return rho ? *rho : *tau / static_cast<double>(n_points);
}

double ExperimentConfig::resolved_tau(std::size_t n_points) const {
    return tau ? *tau : *rho * static_cast<double>(n_points);
}

std::size_t ExperimentConfig::resolved_support_max(std::size_t n_points) const {
    if (support_max > 0) return support_max;
    const double r = resolved_rho(n_points);
    const double j = std::ceil(10.0 / (model.true_theta() * r));
    return static_cast<std::size_t>(std::max(1.0, j));
}

namespace {

// Integer-only per-worker accumulator; merging is commutative so the
// aggregate is independent of scheduling.
struct Accumulator {
    std::vector<std::vector<std::uint64_t>> k_counts;  // [k][j-1]
    std::vector<std::uint64_t> k_tail;
    std::vector<std::uint64_t> k_censored;
    std::vector<std::uint64_t> k_sum;  // sum of observed k-th hitting times
    std::uint64_t tstar_count_at_support_edge = 0;
    std::uint64_t tstar_count_at_horizon = 0;
    std::uint64_t sumsq_tstar1 = 0;
    std::vector<std::uint64_t> gap_counts;
    std::uint64_t gap_tail = 0;
    std::uint64_t n_gaps = 0;
    std::uint64_t total_exceedances = 0;

    Accumulator(std::size_t k_max, std::size_t support)
        : k_counts(k_max, std::vector<std::uint64_t>(support, 0)),
          k_tail(k_max, 0),
          k_censored(k_max, 0),
          k_sum(k_max, 0),
          gap_counts(support, 0) {}

    void merge(const Accumulator& other) {
        for (std::size_t k = 0; k < k_counts.size(); ++k) {
            for (std::size_t j = 0; j < k_counts[k].size(); ++j)
                k_counts[k][j] += other.k_counts[k][j];
            k_tail[k] += other.k_tail[k];
            k_censored[k] += other.k_censored[k];
            k_sum[k] += other.k_sum[k];
        }
        tstar_count_at_support_edge += other.tstar_count_at_support_edge;
        tstar_count_at_horizon += other.tstar_count_at_horizon;
        sumsq_tstar1 += other.sumsq_tstar1;
        for (std::size_t j = 0; j < gap_counts.size(); ++j)
            gap_counts[j] += other.gap_counts[j];
        gap_tail += other.gap_tail;
        n_gaps += other.n_gaps;
        total_exceedances += other.total_exceedances;
    }
};

struct WorkerOutput {
    // per-replication values, written at disjoint indices, reduced in
    // replication order afterwards
    std::vector<double> thresholds;
    std::vector<std::vector<double>> estimator_values;  // [estimator][rep], NaN = failed
};

void run_replications(const ExperimentConfig& config, std::size_t n_points,
                      const ThresholdSpec* shared_threshold, std::size_t support,
                      std::size_t rep_lo, std::size_t rep_hi, Accumulator& acc,
                      WorkerOutput& out) {
    for (std::size_t rep = rep_lo; rep < rep_hi; ++rep) {
        const SamplePath path = simulate(config.model, n_points, config.seed, rep);

        ThresholdSpec spec;
        if (shared_threshold != nullptr) {
            spec = *shared_threshold;
        } else if (config.rho) {
            spec = make_threshold_rho(config.model, n_points, *config.rho,
                                      ThresholdMethod::EmpiricalQuantile, &path);
        } else {
            spec = make_threshold(config.model, n_points, *config.tau,
                                  ThresholdMethod::EmpiricalQuantile, &path);
        }
        out.thresholds[rep] = spec.u;

        const ExceedanceSummary summary = summarize_exceedances(path, spec);
        acc.total_exceedances += summary.count();

        for (std::size_t k = 1; k <= config.k_max; ++k) {
            const auto t = hitting_time(summary, k);
            if (!t) {
                ++acc.k_censored[k - 1];
                continue;
            }
            const auto value = static_cast<std::uint64_t>(*t);
            acc.k_sum[k - 1] += value;
            if (value <= support)
                ++acc.k_counts[k - 1][value - 1];
            else
                ++acc.k_tail[k - 1];
            if (k == 1) {
                acc.sumsq_tstar1 += value * value;
                if (value == support + 1) ++acc.tstar_count_at_support_edge;
                if (value == n_points) ++acc.tstar_count_at_horizon;
            }
        }

        const std::vector<std::int64_t> gaps = inter_exceedance_gaps(summary);
        for (std::int64_t g : gaps) {
            if (static_cast<std::uint64_t>(g) <= support)
                ++acc.gap_counts[g - 1];
            else
                ++acc.gap_tail;
        }
        acc.n_gaps += gaps.size();

        for (std::size_t e = 0; e < config.estimators.size(); ++e) {
            const EstimatorConfig& est = config.estimators[e];
            double value = std::numeric_limits<double>::quiet_NaN();
            try {
                switch (est.method) {
                    case EstimatorMethod::Intervals:
                        value = intervals_estimator(gaps).value;
                        break;
                    case EstimatorMethod::Blocks: {
                        std::size_t block_len = est.block_len;
                        if (block_len == 0) {
                            const double rho_path =
                                static_cast<double>(summary.count()) /
                                static_cast<double>(n_points);
                            if (rho_path <= 0.0) throw std::runtime_error("no exceedances");
                            block_len = default_block_len(rho_path);
                        }
                        value = blocks_estimator(path, spec, block_len).value;
                        break;
                    }
                    case EstimatorMethod::Runs:
                        value = runs_estimator(path, spec, est.run_len).value;
                        break;
                }
            } catch (const std::runtime_error&) {
                // insufficient data on this path; counted as failed
            }
            out.estimator_values[e][rep] = value;
        }
    }
}

double binomial_se(double p, double n) {
    if (n <= 0.0) return 0.0;
    const double var = std::max(p * (1.0 - p), 1.0 / n) / n;
    return std::sqrt(var);
}

ExperimentReport run_single(const ExperimentConfig& config, std::size_t n_points,
                            std::size_t threads) {
    const std::size_t reps = config.replications;
    const std::size_t support = config.resolved_support_max(n_points);
    const double rho = config.resolved_rho(n_points);
    const double tau = config.resolved_tau(n_points);
    const double theta = config.model.true_theta();

    ThresholdSpec shared_spec;
    const bool theoretical = config.threshold_method == ThresholdMethod::TheoreticalQuantile;
    if (theoretical) {
        shared_spec = config.rho
                          ? make_threshold_rho(config.model, n_points, *config.rho,
                                               ThresholdMethod::TheoreticalQuantile)
                          : make_threshold(config.model, n_points, *config.tau,
                                           ThresholdMethod::TheoreticalQuantile);
    }

    Accumulator acc(config.k_max, support);
    WorkerOutput out;
    out.thresholds.resize(reps, 0.0);
    out.estimator_values.assign(config.estimators.size(),
                                std::vector<double>(reps, std::numeric_limits<double>::quiet_NaN()));

    const std::size_t n_workers = std::max<std::size_t>(1, std::min(threads, reps));
    if (n_workers == 1) {
        run_replications(config, n_points, theoretical ? &shared_spec : nullptr, support, 0,
                         reps, acc, out);
    } else {
        std::vector<Accumulator> partial(n_workers, Accumulator(config.k_max, support));
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t lo = reps * w / n_workers;
            const std::size_t hi = reps * (w + 1) / n_workers;
            pool.emplace_back([&, w, lo, hi] {
                run_replications(config, n_points, theoretical ? &shared_spec : nullptr,
                                 support, lo, hi, partial[w], out);
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& p : partial) acc.merge(p);
    }

    ExperimentReport report;
    report.config = config;
    report.config.n = n_points;
    report.theta_true = theta;
    report.rho = rho;
    report.tau = tau;
    report.support_max = support;
    report.u_mean = kahan_sum(out.thresholds) / static_cast<double>(reps);
    report.total_exceedances = acc.total_exceedances;
    report.rho_hat = static_cast<double>(acc.total_exceedances) /
                     (static_cast<double>(reps) * static_cast<double>(n_points));

    const std::uint64_t censored = acc.k_censored[0];
    const std::uint64_t observed = reps - censored;
    report.censored_count = censored;
    report.tstar_counts = acc.k_counts[0];
    report.tstar_tail_count = acc.k_tail[0];
    report.tstar_count_at_support_edge = acc.tstar_count_at_support_edge;
    report.tstar_count_at_horizon = acc.tstar_count_at_horizon;
    report.gap_counts = acc.gap_counts;
    report.gap_tail_count = acc.gap_tail;
    report.n_gaps = acc.n_gaps;

    if (observed > 0) {
        report.emp_tstar = pmf_from_counts(acc.k_counts[0], acc.k_tail[0], observed);
    } else {
        report.emp_tstar.support_max = support;
        report.emp_tstar.mass.assign(support, 0.0);
        report.warnings.push_back("every replication is censored: no exceedance observed");
    }
    if (acc.n_gaps > 0) {
        report.emp_t1 = pmf_from_counts(acc.gap_counts, acc.gap_tail, acc.n_gaps);
    } else {
        report.emp_t1.support_max = support;
        report.emp_t1.mass.assign(support, 0.0);
        if (observed > 0)
            report.warnings.push_back("no inter-exceedance gap observed");
    }

    const LawParams params(rho, theta);
    report.eq17 = tstar_asymptotic_law(params, support).mass;
    report.eq17_norm = tstar_normalized_law(params, support).mass;
    report.eq2a_raw = t1_raw_law(params, support).mass;
    report.eq14_norm = t1_normalized_law(params, support).mass;

    // identity residuals on unconditional per-replication frequencies
    const double total_obs = static_cast<double>(reps) * static_cast<double>(n_points);
    const double var_rho_hat =
        std::max(report.rho_hat * (1.0 - report.rho_hat), 1.0 / total_obs) / total_obs;
    const double reps_d = static_cast<double>(reps);
    const double gaps_d = static_cast<double>(acc.n_gaps);
    const std::vector<double> t1_suffix = report.emp_t1.suffix_sums();
    report.id4_residual.resize(support);
    report.id13_residual.resize(support);
    report.id4_se.resize(support);
    report.id13_se.resize(support);
    for (std::size_t j = 1; j <= support; ++j) {
        const double p_tstar_j =
            static_cast<double>(acc.k_counts[0][j - 1]) / reps_d;
        const double p_tstar_next =
            (j < support ? static_cast<double>(acc.k_counts[0][j])
                         : static_cast<double>(acc.tstar_count_at_support_edge)) /
            reps_d;
        const double tail_t1_j = acc.n_gaps > 0 ? t1_suffix[j - 1] : 0.0;
        const double p_t1_j =
            acc.n_gaps > 0 ? static_cast<double>(acc.gap_counts[j - 1]) / gaps_d : 0.0;

        if (report.rho_hat <= 0.0) {
            report.id4_residual[j - 1] = 0.0;
            report.id13_residual[j - 1] = 0.0;
            report.id4_se[j - 1] = 0.0;
            report.id13_se[j - 1] = 0.0;
            continue;
        }

        const double se_tstar_j = binomial_se(p_tstar_j, reps_d);
        const double se_t1_tail = binomial_se(tail_t1_j, std::max(gaps_d, 1.0));
        report.id4_residual[j - 1] = p_tstar_j - report.rho_hat * tail_t1_j;
        report.id4_se[j - 1] =
            std::sqrt(se_tstar_j * se_tstar_j +
                      report.rho_hat * report.rho_hat * se_t1_tail * se_t1_tail +
                      tail_t1_j * tail_t1_j * var_rho_hat);

        const double diff = p_tstar_j - p_tstar_next;
        const double var_diff =
            (std::max(p_tstar_j * (1.0 - p_tstar_j), 1.0 / reps_d) +
             std::max(p_tstar_next * (1.0 - p_tstar_next), 1.0 / reps_d) +
             2.0 * p_tstar_j * p_tstar_next) /
            reps_d;
        const double ratio = diff / report.rho_hat;
        const double var_ratio =
            var_diff / (report.rho_hat * report.rho_hat) +
            ratio * ratio * var_rho_hat / (report.rho_hat * report.rho_hat);
        const double se_t1_j = binomial_se(p_t1_j, std::max(gaps_d, 1.0));
        report.id13_residual[j - 1] = p_t1_j - ratio;
        report.id13_se[j - 1] = std::sqrt(se_t1_j * se_t1_j + var_ratio);
    }

    // scalar comparisons
    if (observed > 0) {
        const double sum_t = static_cast<double>(acc.k_sum[0]);
        const double mean_t = sum_t / static_cast<double>(observed);
        report.cond_mean_tstar = mean_t;
        report.rho_x_cond_mean = rho * mean_t;
        const double sumsq = static_cast<double>(acc.sumsq_tstar1);
        const double var_t =
            observed > 1 ? std::max(0.0, (sumsq - sum_t * mean_t) /
                                             static_cast<double>(observed - 1))
                         : 0.0;
        const double var_mean = var_t / static_cast<double>(observed);
        const double value = report.rho_hat * mean_t;
        const double se = std::sqrt(report.rho_hat * report.rho_hat * var_mean +
                                    mean_t * mean_t * var_rho_hat);
        report.rho_hat_x_cond_mean = {value, value - 1.96 * se, value + 1.96 * se};
        report.censoring_aware_mean_tstar =
            (sum_t + static_cast<double>(censored) * static_cast<double>(n_points)) / reps_d;
    }
    const ExpectedHittingLimits limits = expected_hitting_limits(theta, tau);
    report.limit_via_gap_law = limits.via_gap_law;
    report.limit_via_scaled_tail = limits.via_scaled_tail;
    report.eq19_value_at_n = tstar_pmf_limit_at_n(theta, tau, n_points);
    report.eq19_limit = tstar_scaled_pmf_limit(theta, tau);
    report.n_x_emp_tstar_at_horizon =
        static_cast<double>(n_points) *
        (static_cast<double>(acc.tstar_count_at_horizon) / reps_d);
    report.t_theta_weight_at_zero = 1.0 - 1.0 / (theta * theta);
    report.t_theta_is_proper = t_theta_weight_is_proper(theta);

    const DiscretePmf eq17_norm_law = tstar_normalized_law(params, support);
    const DiscretePmf eq14_norm_law = t1_normalized_law(params, support);
    const DiscretePmf eq2a_raw_law = t1_raw_law(params, support);
    report.sup_tstar_vs_eq17_norm = sup_distance(report.emp_tstar, eq17_norm_law);
    report.tv_tstar_vs_eq17_norm = tv_distance(report.emp_tstar, eq17_norm_law);
    report.sup_t1_vs_eq14_norm = sup_distance(report.emp_t1, eq14_norm_law);
    report.tv_t1_vs_eq14_norm = tv_distance(report.emp_t1, eq14_norm_law);
    report.sup_t1_vs_eq2a_raw = sup_distance(report.emp_t1, eq2a_raw_law);
    report.tv_t1_vs_eq2a_raw = tv_distance(report.emp_t1, eq2a_raw_law);

    for (std::size_t k = 1; k <= config.k_max; ++k) {
        KthHittingSummary kth;
        kth.k = k;
        kth.counts = acc.k_counts[k - 1];
        kth.tail_count = acc.k_tail[k - 1];
        kth.censored = acc.k_censored[k - 1];
        const std::uint64_t seen = reps - kth.censored;
        if (seen > 0) {
            kth.pmf = pmf_from_counts(kth.counts, kth.tail_count, seen);
            kth.conditional_mean =
                static_cast<double>(acc.k_sum[k - 1]) / static_cast<double>(seen);
        } else {
            kth.pmf.support_max = support;
            kth.pmf.mass.assign(support, 0.0);
        }
        report.kth_hitting.push_back(std::move(kth));
    }

    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        const EstimatorConfig& est = config.estimators[e];
        EstimatorSummary summary;
        summary.method = est.method;
        summary.run_len = est.method == EstimatorMethod::Runs ? est.run_len : 0;
        summary.block_len = est.method == EstimatorMethod::Blocks ? est.block_len : 0;
        double sum = 0.0, sum_abs_err = 0.0, sum_raw = 0.0;
        std::size_t valid = 0;
        for (double v : out.estimator_values[e]) {
            if (std::isnan(v)) continue;
            ++valid;
            sum += v;
            sum_abs_err += std::abs(v - theta);
            sum_raw += v;
        }
        summary.n_valid = valid;
        summary.n_failed = reps - valid;
        if (valid > 0) {
            summary.mean_value = sum / static_cast<double>(valid);
            summary.mean_abs_error = sum_abs_err / static_cast<double>(valid);
            summary.mean_raw = sum_raw / static_cast<double>(valid);
            double ss = 0.0;
            for (double v : out.estimator_values[e]) {
                if (std::isnan(v)) continue;
                const double d = v - summary.mean_value;
                ss += d * d;
            }
            summary.sd_value =
                valid > 1 ? std::sqrt(ss / static_cast<double>(valid - 1)) : 0.0;
        }
        report.estimators.push_back(summary);
    }

    return report;
}

// standard error of a sup distance: binomial error of the empirical mass at
// the bin where the sup is attained
double sup_distance_se(const DiscretePmf& emp, const std::vector<double>& law) {
    if (emp.sample_count == 0) return 0.0;
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < emp.mass.size(); ++i) {
        const double d = std::abs(emp.mass[i] - law[i]);
        if (d > best) {
            best = d;
            arg = i;
        }
    }
    return binomial_se(emp.mass[arg], static_cast<double>(emp.sample_count));
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t threads) {
    config.validate();
    return run_single(config, config.n, threads);
}

ConvergenceStudy convergence_study(const ExperimentConfig& config, std::size_t threads) {
    config.validate();
    if (config.n_grid.empty())
        throw std::invalid_argument("convergence_study: config.n_grid is required");

    ConvergenceStudy study;
    for (std::size_t n_points : config.n_grid) {
        ExperimentReport report = run_single(config, n_points, threads);

        ConvergencePoint point;
        point.n = n_points;
        point.rho = report.rho;
        point.sup_tstar = report.sup_tstar_vs_eq17_norm;
        point.tv_tstar = report.tv_tstar_vs_eq17_norm;
        point.sup_t1 = report.sup_t1_vs_eq2a_raw;
        point.tv_t1 = report.tv_t1_vs_eq2a_raw;
        point.sup_tstar_se = sup_distance_se(report.emp_tstar, report.eq17_norm);
        point.sup_t1_se = sup_distance_se(report.emp_t1, report.eq2a_raw);
        point.rho_hat_x_cond_mean = report.rho_hat_x_cond_mean;
        study.points.push_back(point);
        study.reports.push_back(std::move(report));
    }

    auto non_increasing = [](const std::vector<ConvergencePoint>& pts, auto dist, auto se) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double slack =
                2.0 * std::sqrt(se(pts[i]) * se(pts[i]) + se(pts[i + 1]) * se(pts[i + 1]));
            if (dist(pts[i + 1]) > dist(pts[i]) + slack) return false;
        }
        return true;
    };
    study.sup_tstar_non_increasing_within_2se = non_increasing(
        study.points, [](const ConvergencePoint& p) { return p.sup_tstar; },
        [](const ConvergencePoint& p) { return p.sup_tstar_se; });
    study.sup_t1_non_increasing_within_2se = non_increasing(
        study.points, [](const ConvergencePoint& p) { return p.sup_t1; },
        [](const ConvergencePoint& p) { return p.sup_t1_se; });

    const ExpectedHittingLimits limits =
        expected_hitting_limits(config.model.true_theta(), config.resolved_tau(config.n_grid.back()));
    study.limit_via_gap_law = limits.via_gap_law;
    study.limit_via_scaled_tail = limits.via_scaled_tail;
    return study;
}

} // namespace evx
