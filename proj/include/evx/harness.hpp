#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evx/estimators.hpp"
#include "evx/exceedance.hpp"
#include "evx/laws.hpp"
#include "evx/pmf.hpp"
#include "evx/process.hpp"

namespace evx {

struct EstimatorConfig {
    EstimatorMethod method = EstimatorMethod::Intervals;
    std::size_t run_len = kDefaultRunLen;  // runs only
    std::size_t block_len = 0;             // blocks only; 0 = ceil(2/rho_hat)
};

struct ExperimentConfig {
    ProcessModel model;
    std::size_t n = 0;
    std::optional<double> tau;  // exactly one of tau/rho is set
    std::optional<double> rho;
    ThresholdMethod threshold_method = ThresholdMethod::TheoreticalQuantile;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::size_t k_max = 1;
    std::size_t support_max = 0;  // 0 = default ceil(10/(theta*rho))
    std::vector<EstimatorConfig> estimators;
    std::vector<std::size_t> n_grid;  // non-empty selects a convergence study
    std::string output_dir = "out";

    void validate() const;  // throws std::invalid_argument
    double resolved_rho(std::size_t n_points) const;
    double resolved_tau(std::size_t n_points) const;
    std::size_t resolved_support_max(std::size_t n_points) const;
};

struct EstimatorSummary {
    EstimatorMethod method = EstimatorMethod::Intervals;
    std::size_t run_len = 0;
    std::size_t block_len = 0;          // resolved; 0 when not applicable
    std::size_t n_valid = 0;            // replications that produced an estimate
    std::size_t n_failed = 0;
    double mean_value = 0.0;            // over valid replications, clamped values
    double sd_value = 0.0;
    double mean_abs_error = 0.0;        // vs the model's true theta
    double mean_raw = 0.0;
};

struct KthHittingSummary {
    std::size_t k = 1;
    DiscretePmf pmf;                    // conditional on >= k exceedances
    std::vector<std::uint64_t> counts;  // per j in 1..J
    std::uint64_t tail_count = 0;
    std::uint64_t censored = 0;
    double conditional_mean = 0.0;      // 0 when every path is censored
};

struct IntervalEstimate {
    double value = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Everything one replicated experiment produces: empirical laws, every
/// theoretical column, identity residuals with their combined standard
/// errors, estimator summaries, and the scalar comparisons. Reproducible
/// bit-exactly from (config, seed) at any parallelism level.
struct ExperimentReport {
    ExperimentConfig config;
    double theta_true = 1.0;
    double rho = 0.0;  // configured tau/n
    double tau = 0.0;
    std::size_t support_max = 0;

    double u_mean = 0.0;  // per-replication threshold average
    double rho_hat = 0.0;
    std::uint64_t total_exceedances = 0;

    DiscretePmf emp_tstar;  // k = 1, conditional on non-censored
    DiscretePmf emp_t1;     // pooled inter-exceedance gaps
    std::vector<double> eq17;       // (rho/theta)(1-theta*rho)^{j-1}
    std::vector<double> eq17_norm;  // theta*rho*(1-theta*rho)^{j-1}
    std::vector<double> eq2a_raw;   // rho*(1-rho)^{(j-1)theta}
    std::vector<double> eq14_norm;  // eta*(1-eta)^{j-1}
    std::vector<double> id4_residual;   // P^{T*=j} - rho_hat*P^{T1>=j}
    std::vector<double> id13_residual;  // P^{T1=j} - (P^{T*=j}-P^{T*=j+1})/rho_hat
    std::vector<double> id4_se;         // combined standard errors
    std::vector<double> id13_se;

    // exact counts backing the empirical columns
    std::vector<std::uint64_t> tstar_counts;  // k = 1, per j in 1..J
    std::uint64_t tstar_tail_count = 0;
    std::uint64_t tstar_count_at_support_edge = 0;  // count at exactly J+1
    std::uint64_t tstar_count_at_horizon = 0;       // count at exactly n
    std::uint64_t censored_count = 0;
    std::vector<std::uint64_t> gap_counts;
    std::uint64_t gap_tail_count = 0;
    std::uint64_t n_gaps = 0;

    double cond_mean_tstar = 0.0;
    IntervalEstimate rho_hat_x_cond_mean;  // against both limits below
    double rho_x_cond_mean = 0.0;
    double censoring_aware_mean_tstar = 0.0;  // E[min(T*, n)]
    double limit_via_gap_law = 0.0;           // 1/theta^3
    double limit_via_scaled_tail = 0.0;       // tau/theta
    double eq19_value_at_n = 0.0;             // tstar_pmf_limit_at_n(theta, tau, n)
    double eq19_limit = 0.0;                  // e^{-theta*tau}/theta
    double n_x_emp_tstar_at_horizon = 0.0;    // n * P^{T* = n}
    double t_theta_weight_at_zero = 0.0;
    bool t_theta_is_proper = true;

    double sup_tstar_vs_eq17_norm = 0.0;
    double tv_tstar_vs_eq17_norm = 0.0;
    double sup_t1_vs_eq14_norm = 0.0;
    double tv_t1_vs_eq14_norm = 0.0;
    double sup_t1_vs_eq2a_raw = 0.0;
    double tv_t1_vs_eq2a_raw = 0.0;

    std::vector<EstimatorSummary> estimators;
    std::vector<KthHittingSummary> kth_hitting;  // k = 1..k_max
    std::vector<std::string> warnings;
};

/// Runs the replicated experiment. Replications are the unit of parallel
/// work; all cross-replication aggregation is integer merges or fixed-order
/// reductions, so the report is a pure function of (config, seed).
ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

struct ConvergencePoint {
    std::size_t n = 0;
    double rho = 0.0;
    double sup_tstar = 0.0;  // emp T* vs normalized hitting-time law
    double sup_tstar_se = 0.0;
    double tv_tstar = 0.0;
    double sup_t1 = 0.0;  // emp T1 vs raw gap law
    double sup_t1_se = 0.0;
    double tv_t1 = 0.0;
    IntervalEstimate rho_hat_x_cond_mean;
};

struct ConvergenceStudy {
    std::vector<ExperimentReport> reports;
    std::vector<ConvergencePoint> points;
    bool sup_tstar_non_increasing_within_2se = false;
    bool sup_t1_non_increasing_within_2se = false;
    double limit_via_gap_law = 0.0;
    double limit_via_scaled_tail = 0.0;
};

/// One run per n_grid entry (tau, replications and seed shared), plus the
/// distance trend summary. Requires a strictly increasing grid of >= 3
/// points.
ConvergenceStudy convergence_study(const ExperimentConfig& config, std::size_t threads = 1);

} // namespace evx
