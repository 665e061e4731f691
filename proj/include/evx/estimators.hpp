#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "evx/exceedance.hpp"

namespace evx {

enum class EstimatorMethod { Intervals, Blocks, Runs };

const char* to_string(EstimatorMethod method);

struct ThetaEstimate {
    EstimatorMethod method = EstimatorMethod::Intervals;
    double value = 1.0;      // clamped to (0,1]
    double raw_value = 1.0;  // pre-clamp, kept for diagnosing pathologies
    bool clamped = false;
    std::size_t n_exceedances = 0;
    double threshold_u = 0.0;
    std::size_t n = 0;
};

/// Ferro-Segers intervals estimator from inter-exceedance gaps. Uses the
/// moment form 2*(sum T)^2 / (N * sum T^2) when every gap is at most 2 and
/// the shifted form 2*(sum(T-1))^2 / (N * sum(T-1)(T-2)) otherwise.
/// Throws std::runtime_error on fewer than two gaps.
ThetaEstimate intervals_estimator(std::span<const std::int64_t> gaps);

/// Blocks estimator: theta = log(share of exceedance-free blocks) /
/// (block_len * log(1 - rho_hat)). Requires at least 20 complete blocks,
/// at least one exceedance, and at least one exceedance-free block.
ThetaEstimate blocks_estimator(const SamplePath& path, const ThresholdSpec& spec,
                               std::size_t block_len);

/// Runs estimator: share of exceedances at i <= n - run_len that are
/// followed by run_len observations all at or below the threshold.
ThetaEstimate runs_estimator(const SamplePath& path, const ThresholdSpec& spec,
                             std::size_t run_len);

/// Default block length ceil(2/rho_hat) used when a config leaves it unset.
std::size_t default_block_len(double rho_hat);

inline constexpr std::size_t kDefaultRunLen = 5;

} // namespace evx
