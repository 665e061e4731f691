#include "evx/pmf.hpp"

#include <cmath>
#include <stdexcept>

namespace evx {

double kahan_sum(std::span<const double> xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double DiscretePmf::total() const {
    double sum = kahan_sum(mass);
    return sum + tail_mass;
}

std::vector<double> DiscretePmf::suffix_sums() const {
    std::vector<double> suffix(support_max + 1);
    suffix[support_max] = tail_mass;
    for (std::size_t j = support_max; j-- > 0;)
        suffix[j] = suffix[j + 1] + mass[j];
    return suffix;
}

DiscretePmf pmf_from_counts(std::span<const std::uint64_t> counts,
                            std::uint64_t tail_count, std::uint64_t total_count) {
    if (total_count == 0) throw std::invalid_argument("pmf_from_counts: no samples");
    DiscretePmf pmf;
    pmf.support_max = counts.size();
    pmf.mass.resize(counts.size());
    const double n = static_cast<double>(total_count);
    for (std::size_t i = 0; i < counts.size(); ++i)
        pmf.mass[i] = static_cast<double>(counts[i]) / n;
    pmf.tail_mass = static_cast<double>(tail_count) / n;
    pmf.sample_count = total_count;
    return pmf;
}

DiscretePmf empirical_pmf(std::span<const std::int64_t> samples, std::size_t support_max) {
    if (support_max < 1) throw std::invalid_argument("empirical_pmf: support_max must be >= 1");
    if (samples.empty()) throw std::invalid_argument("empirical_pmf: no samples");
    std::vector<std::uint64_t> counts(support_max, 0);
    std::uint64_t tail = 0;
    for (std::int64_t s : samples) {
        if (s < 1) throw std::invalid_argument("empirical_pmf: samples must be >= 1");
        if (static_cast<std::uint64_t>(s) > support_max)
            ++tail;
        else
            ++counts[static_cast<std::size_t>(s) - 1];
    }
    return pmf_from_counts(counts, tail, samples.size());
}

namespace {

void require_same_support(const DiscretePmf& a, const DiscretePmf& b) {
    if (a.support_max != b.support_max)
        throw std::invalid_argument("pmf distance: support_max mismatch");
}

} // namespace

double sup_distance(const DiscretePmf& a, const DiscretePmf& b) {
    require_same_support(a, b);
    double sup = 0.0;
    for (std::size_t i = 0; i < a.mass.size(); ++i)
        sup = std::max(sup, std::abs(a.mass[i] - b.mass[i]));
    return sup;
}

double tv_distance(const DiscretePmf& a, const DiscretePmf& b) {
    require_same_support(a, b);
    std::vector<double> diffs(a.mass.size() + 1);
    for (std::size_t i = 0; i < a.mass.size(); ++i)
        diffs[i] = std::abs(a.mass[i] - b.mass[i]);
    diffs.back() = std::abs(a.tail_mass - b.tail_mass);
    return 0.5 * kahan_sum(diffs);
}

} // namespace evx
