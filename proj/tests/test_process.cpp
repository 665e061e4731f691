#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "evx/process.hpp"

using namespace evx;

namespace {

double frechet_cdf(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// sup_x |F_n(x) - F(x)| against a reference CDF
double ks_against(const std::vector<double>& sample, double (*cdf)(double)) {
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        sup = std::max(sup, std::abs(static_cast<double>(i + 1) / n - f));
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
    }
    return sup;
}

// two-sample Kolmogorov distance
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sup = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / static_cast<double>(a.size()) -
                                     static_cast<double>(j) / static_cast<double>(b.size())));
    }
    return sup;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_CASE("true_theta for every model family") {
    CHECK(ProcessModel::iid().true_theta() == 1.0);
    CHECK(ProcessModel::armax(0.3).true_theta() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(ProcessModel::moving_max(4).true_theta() == 0.25);
    for (double alpha : {0.0, 0.1, 0.5, 0.99}) {
        const double theta = ProcessModel::armax(alpha).true_theta();
        CHECK(theta > 0.0);
        CHECK(theta <= 1.0);
    }
    for (std::size_t m : {1, 2, 5, 100}) {
        const double theta = ProcessModel::moving_max(m).true_theta();
        CHECK(theta > 0.0);
        CHECK(theta <= 1.0);
    }
}

TEST_CASE("parameter validation names the offending field") {
    CHECK_THROWS_WITH_AS(simulate(ProcessModel::armax(1.0), 10, 1, 0),
                         doctest::Contains("alpha"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(simulate(ProcessModel::armax(-0.1), 10, 1, 0),
                         doctest::Contains("alpha"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(simulate(ProcessModel::moving_max(0), 10, 1, 0),
                         doctest::Contains("m"), std::invalid_argument);
    ProcessModel bad = ProcessModel::armax(0.5);
    bad.marginal = Marginal::Uniform;
    CHECK_THROWS_WITH_AS(simulate(bad, 10, 1, 0), doctest::Contains("marginal"),
                         std::invalid_argument);
    CHECK_THROWS_AS(simulate(ProcessModel::iid(), 0, 1, 0), std::invalid_argument);
}

TEST_CASE("simulate is deterministic and length-exact") {
    const ProcessModel model = ProcessModel::armax(0.5);
    const SamplePath a = simulate(model, 1000, 42, 3);
    const SamplePath b = simulate(model, 1000, 42, 3);
    REQUIRE(a.size() == 1000);
    CHECK(a.values == b.values);
    const SamplePath c = simulate(model, 1000, 42, 4);
    CHECK(a.values != c.values);
    CHECK(simulate(model, 1, 42, 0).size() == 1);
}

TEST_CASE("moving maxima with m=1 is the iid sequence, bit for bit") {
    const SamplePath mm = simulate(ProcessModel::moving_max(1), 500, 9, 2);
    const SamplePath iid = simulate(ProcessModel::iid(), 500, 9, 2);
    CHECK(mm.values == iid.values);

    const SamplePath mm_uniform =
        simulate(ProcessModel::moving_max(1, Marginal::Uniform), 500, 9, 2);
    const SamplePath iid_uniform = simulate(ProcessModel::iid(Marginal::Uniform), 500, 9, 2);
    CHECK(mm_uniform.values == iid_uniform.values);
}

TEST_CASE("unit-Frechet CDF is the fixed point of the ARMAX marginal recursion") {
    // F(x) = F(x/alpha) * exp(-(1-alpha)/x) characterizes the stationary
    // marginal; e^{-1/x} satisfies it identically
    for (double alpha : {0.1, 0.5, 0.9}) {
        for (double x : {0.2, 1.0, 3.0, 25.0}) {
            const double lhs = frechet_cdf(x);
            const double rhs = frechet_cdf(x / alpha) * std::exp(-(1.0 - alpha) / x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        }
    }
}

TEST_CASE("ARMAX stationary marginal is unit Frechet (Kolmogorov distance)") {
    const SamplePath path = simulate(ProcessModel::armax(0.5), 1000000, 1234, 0);
    CHECK(ks_against(path.values, frechet_cdf) < 0.005);
}

TEST_CASE("ARMAX with alpha=0 reproduces the iid Frechet law") {
    const SamplePath path = simulate(ProcessModel::armax(0.0), 100000, 77, 0);
    CHECK(ks_against(path.values, frechet_cdf) < 0.01);
}

TEST_CASE("marginal_cdf closed forms") {
    CHECK(marginal_cdf(ProcessModel::iid(Marginal::Uniform), 0.3) == 0.3);
    CHECK(marginal_cdf(ProcessModel::iid(Marginal::Uniform), -1.0) == 0.0);
    CHECK(marginal_cdf(ProcessModel::iid(Marginal::Uniform), 2.0) == 1.0);
    for (double alpha : {0.0, 0.3, 0.8})
        CHECK(marginal_cdf(ProcessModel::armax(alpha), 1.0) ==
              doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(marginal_cdf(ProcessModel::moving_max(2, Marginal::Uniform), 0.5) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(marginal_cdf(ProcessModel::iid(), -3.0) == 0.0);
}

TEST_CASE("marginal_quantile closed forms and round trip") {
    CHECK(marginal_quantile(ProcessModel::iid(Marginal::Uniform), 0.99) == 0.99);
    CHECK(marginal_quantile(ProcessModel::iid(), std::exp(-1.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    const std::vector<ProcessModel> models = {
        ProcessModel::iid(), ProcessModel::iid(Marginal::Uniform), ProcessModel::armax(0.5),
        ProcessModel::moving_max(3), ProcessModel::moving_max(4, Marginal::Uniform)};
    for (const ProcessModel& model : models) {
        for (double p : {0.9, 0.99, 0.999}) {
            const double x = marginal_quantile(model, p);
            CHECK(marginal_cdf(model, x) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(marginal_quantile(ProcessModel::iid(), 0.0), std::domain_error);
    CHECK_THROWS_AS(marginal_quantile(ProcessModel::iid(), 1.0), std::domain_error);
}

TEST_CASE("no transient: path halves agree in distribution") {
    const std::size_t n = 100000;
    const double bound = 3.0 * std::sqrt(std::log(2.0 / 0.05) / static_cast<double>(n));
    for (const ProcessModel& model :
         {ProcessModel::armax(0.5), ProcessModel::moving_max(4)}) {
        const SamplePath path = simulate(model, n, 2024, 0);
        std::vector<double> first(path.values.begin(), path.values.begin() + n / 2);
        std::vector<double> second(path.values.begin() + n / 2, path.values.end());
        CHECK(ks_two_sample(first, second) < bound);
    }
}

TEST_CASE("replication streams are uncorrelated") {
    // probability-integral transform keeps correlations well-defined for
    // the heavy-tailed marginals
    const std::size_t n = 100000;
    for (const ProcessModel& model : {ProcessModel::iid(Marginal::Uniform),
                                      ProcessModel::armax(0.5)}) {
        const SamplePath a = simulate(model, n, 5150, 0);
        const SamplePath b = simulate(model, n, 5150, 1);
        std::vector<double> ua(n), ub(n);
        for (std::size_t i = 0; i < n; ++i) {
            ua[i] = marginal_cdf(model, a.values[i]);
            ub[i] = marginal_cdf(model, b.values[i]);
        }
        CHECK(std::abs(correlation(ua, ub)) < 0.015);
    }
}
