#include "evx/exceedance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evx {

const char* to_string(ThresholdMethod method) {
    switch (method) {
        case ThresholdMethod::TheoreticalQuantile: return "theoretical";
        case ThresholdMethod::EmpiricalQuantile: return "empirical";
    }
    return "?";
}

namespace {

ThresholdSpec build_threshold(const ProcessModel& model, std::size_t n, double tau, double rho,
                              ThresholdMethod method, const SamplePath* path) {
    if (n < 1) throw std::domain_error("make_threshold: n must be >= 1");
    if (!(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("make_threshold: tau/n must be in (0,1)");

    ThresholdSpec spec;
    spec.n = n;
    spec.tau = tau;
    spec.rho = rho;
    spec.method = method;

    if (method == ThresholdMethod::TheoreticalQuantile) {
        spec.u = marginal_quantile(model, 1.0 - rho);
    } else {
        if (path == nullptr)
            throw std::invalid_argument("make_threshold: empirical method requires a path");
        if (path->size() != n)
            throw std::invalid_argument("make_threshold: path length differs from n");
        std::vector<double> sorted = path->values;
        std::sort(sorted.begin(), sorted.end());
        // rank of the (1-rho) order statistic; the nudge keeps exact
        // integer boundaries from rounding up
        double raw = (1.0 - rho) * static_cast<double>(n);
        auto rank = static_cast<std::size_t>(std::ceil(raw - 1e-9));
        rank = std::clamp<std::size_t>(rank, 1, n);
        spec.u = sorted[rank - 1];
    }
    return spec;
}

} // namespace

ThresholdSpec make_threshold(const ProcessModel& model, std::size_t n, double tau,
                             ThresholdMethod method, const SamplePath* path) {
    if (!(tau > 0.0)) throw std::domain_error("make_threshold: tau must be positive");
    return build_threshold(model, n, tau, tau / static_cast<double>(n), method, path);
}

ThresholdSpec make_threshold_rho(const ProcessModel& model, std::size_t n, double rho,
                                 ThresholdMethod method, const SamplePath* path) {
    return build_threshold(model, n, rho * static_cast<double>(n), rho, method, path);
}

ExceedanceSummary summarize_exceedances(const SamplePath& path, const ThresholdSpec& spec) {
    if (spec.n != path.size())
        throw std::invalid_argument("summarize_exceedances: spec.n differs from path length");
    ExceedanceSummary summary;
    summary.n = path.size();
    for (std::size_t i = 0; i < path.size(); ++i)
        if (path.values[i] > spec.u)
            summary.indices.push_back(static_cast<std::int64_t>(i) + 1);
    summary.censored = summary.indices.empty();
    return summary;
}

std::optional<std::int64_t> hitting_time(const ExceedanceSummary& summary, std::size_t k) {
    if (k < 1) throw std::domain_error("hitting_time: k must be >= 1");
    if (k > summary.indices.size()) return std::nullopt;
    return summary.indices[k - 1];
}

std::vector<std::int64_t> inter_exceedance_gaps(const ExceedanceSummary& summary) {
    std::vector<std::int64_t> gaps;
    if (summary.indices.size() < 2) return gaps;
    gaps.reserve(summary.indices.size() - 1);
    for (std::size_t i = 0; i + 1 < summary.indices.size(); ++i)
        gaps.push_back(summary.indices[i + 1] - summary.indices[i]);
    return gaps;
}

} // namespace evx
