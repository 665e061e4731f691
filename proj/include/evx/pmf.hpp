#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evx {

/// Finite-support mass function on {1..J} with an explicit overflow bucket.
/// Empirical pmfs sum to 1 (up to rounding); analytic ones may not — the
/// asymptotic laws handled here are defective on purpose, so totals carry
/// information and are never silently renormalized.
struct DiscretePmf {
    std::size_t support_max = 0;      // J
    std::vector<double> mass;         // mass[j-1] is the mass at j, j in 1..J
    double tail_mass = 0.0;           // mass beyond J
    std::uint64_t sample_count = 0;   // 0 for analytic pmfs

    double at(std::size_t j) const { return mass[j - 1]; }

    /// Sum of all mass including the tail bucket (compensated summation).
    double total() const;

    /// Suffix sums: tail_from(j) = sum_{i>=j} mass[i] + tail_mass, for
    /// j in 1..J+1 (index J+1 yields tail_mass alone).
    std::vector<double> suffix_sums() const;
};

/// Builds the empirical pmf of positive-integer samples on support 1..J.
/// Throws std::invalid_argument on empty input or J < 1.
DiscretePmf empirical_pmf(std::span<const std::int64_t> samples, std::size_t support_max);

/// As above, from pre-aggregated counts (counts[j-1] = #samples equal to j).
DiscretePmf pmf_from_counts(std::span<const std::uint64_t> counts,
                            std::uint64_t tail_count, std::uint64_t total_count);

/// max_j |a[j] - b[j]| over the common support (tail buckets excluded).
double sup_distance(const DiscretePmf& a, const DiscretePmf& b);

/// Half the L1 distance, tail buckets included.
double tv_distance(const DiscretePmf& a, const DiscretePmf& b);

double kahan_sum(std::span<const double> xs);

} // namespace evx
