#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "evx/pmf.hpp"
#include "evx/process.hpp"

namespace evx {

enum class ThresholdMethod { TheoreticalQuantile, EmpiricalQuantile };

const char* to_string(ThresholdMethod method);

/// The pair (tau, n) inducing the exceedance rate rho = tau/n and the
/// threshold u at the (1-rho) marginal quantile.
struct ThresholdSpec {
    std::size_t n = 0;
    double tau = 0.0;
    double rho = 0.0;
    double u = 0.0;
    ThresholdMethod method = ThresholdMethod::TheoreticalQuantile;
};

/// Threshold from the exceedance budget tau (rho = tau/n). The theoretical
/// method uses the model's exact quantile so P{X > u} = rho; the empirical
/// method uses the order statistic of rank ceil((1-rho)*n) of the supplied
/// path.
ThresholdSpec make_threshold(const ProcessModel& model, std::size_t n, double tau,
                             ThresholdMethod method, const SamplePath* path = nullptr);

/// Same, with rho given directly (tau = rho*n).
ThresholdSpec make_threshold_rho(const ProcessModel& model, std::size_t n, double rho,
                                 ThresholdMethod method, const SamplePath* path = nullptr);

/// 1-based positions of strict exceedances X_j > u.
struct ExceedanceSummary {
    std::vector<std::int64_t> indices;
    std::size_t n = 0;
    bool censored = false;  // true iff no exceedance within the horizon

    std::size_t count() const { return indices.size(); }
};

ExceedanceSummary summarize_exceedances(const SamplePath& path, const ThresholdSpec& spec);

/// Index of the k-th exceedance; nullopt when the path holds fewer than k.
/// hitting_time(s,1) = 1 means the first observation already exceeds.
std::optional<std::int64_t> hitting_time(const ExceedanceSummary& summary, std::size_t k);

/// Differences of consecutive exceedance indices; empty when fewer than two
/// exceedances were observed.
std::vector<std::int64_t> inter_exceedance_gaps(const ExceedanceSummary& summary);

} // namespace evx
