#include "evx/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evx {

const char* to_string(EstimatorMethod method) {
    switch (method) {
        case EstimatorMethod::Intervals: return "intervals";
        case EstimatorMethod::Blocks: return "blocks";
        case EstimatorMethod::Runs: return "runs";
    }
    return "?";
}

namespace {

constexpr double kThetaFloor = 1e-12;

ThetaEstimate finish(EstimatorMethod method, double raw, std::size_t n_exceedances,
                     double u, std::size_t n) {
    ThetaEstimate est;
    est.method = method;
    est.raw_value = raw;
    est.value = std::clamp(raw, kThetaFloor, 1.0);
    est.clamped = est.value != raw;
    est.n_exceedances = n_exceedances;
    est.threshold_u = u;
    est.n = n;
    return est;
}

} // namespace

ThetaEstimate intervals_estimator(std::span<const std::int64_t> gaps) {
    if (gaps.size() < 2)
        throw std::runtime_error("intervals_estimator: needs at least 2 gaps");
    const double count = static_cast<double>(gaps.size());
    std::int64_t max_gap = 0;
    double sum = 0.0, sum_sq = 0.0, sum_shifted = 0.0, sum_shifted_prod = 0.0;
    for (std::int64_t t : gaps) {
        max_gap = std::max(max_gap, t);
        const double td = static_cast<double>(t);
        sum += td;
        sum_sq += td * td;
        sum_shifted += td - 1.0;
        sum_shifted_prod += (td - 1.0) * (td - 2.0);
    }
    double raw;
    if (max_gap <= 2)
        raw = 2.0 * sum * sum / (count * sum_sq);
    else
        raw = 2.0 * sum_shifted * sum_shifted / (count * sum_shifted_prod);
    return finish(EstimatorMethod::Intervals, raw, gaps.size() + 1, 0.0, 0);
}

ThetaEstimate blocks_estimator(const SamplePath& path, const ThresholdSpec& spec,
                               std::size_t block_len) {
    if (block_len < 1) throw std::invalid_argument("blocks_estimator: block_len must be >= 1");
    const std::size_t n_blocks = path.size() / block_len;
    if (n_blocks < 20)
        throw std::runtime_error("blocks_estimator: needs at least 20 complete blocks");

    std::size_t exceedances = 0, empty_blocks = 0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        std::size_t in_block = 0;
        for (std::size_t i = b * block_len; i < (b + 1) * block_len; ++i)
            if (path.values[i] > spec.u) ++in_block;
        exceedances += in_block;
        if (in_block == 0) ++empty_blocks;
    }
    // the block remainder still counts toward the exceedance rate
    for (std::size_t i = n_blocks * block_len; i < path.size(); ++i)
        if (path.values[i] > spec.u) ++exceedances;

    if (exceedances == 0)
        throw std::runtime_error("blocks_estimator: no exceedances above the threshold");
    if (empty_blocks == 0)
        throw std::runtime_error("blocks_estimator: every block contains an exceedance");

    const double rho_hat = static_cast<double>(exceedances) / static_cast<double>(path.size());
    const double empty_share = static_cast<double>(empty_blocks) / static_cast<double>(n_blocks);
    const double raw = std::log(empty_share) /
                       (static_cast<double>(block_len) * std::log1p(-rho_hat));
    return finish(EstimatorMethod::Blocks, raw, exceedances, spec.u, path.size());
}

ThetaEstimate runs_estimator(const SamplePath& path, const ThresholdSpec& spec,
                             std::size_t run_len) {
    if (run_len < 1) throw std::invalid_argument("runs_estimator: run_len must be >= 1");
    if (path.size() <= run_len)
        throw std::runtime_error("runs_estimator: path shorter than run_len");

    std::size_t eligible = 0, isolated = 0;
    for (std::size_t i = 0; i < path.size() - run_len; ++i) {
        if (!(path.values[i] > spec.u)) continue;
        ++eligible;
        bool run_clear = true;
        for (std::size_t k = 1; k <= run_len; ++k)
            if (path.values[i + k] > spec.u) {
                run_clear = false;
                break;
            }
        if (run_clear) ++isolated;
    }
    if (eligible == 0)
        throw std::runtime_error("runs_estimator: no exceedance at index <= n - run_len");
    const double raw = static_cast<double>(isolated) / static_cast<double>(eligible);
    return finish(EstimatorMethod::Runs, raw, eligible, spec.u, path.size());
}

std::size_t default_block_len(double rho_hat) {
    if (!(rho_hat > 0.0)) throw std::domain_error("default_block_len: rho_hat must be positive");
    return static_cast<std::size_t>(std::ceil(2.0 / rho_hat));
}

} // namespace evx
