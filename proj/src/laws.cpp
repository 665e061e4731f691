#include "evx/laws.hpp"

#include <cmath>
#include <stdexcept>

namespace evx {

namespace {

void check_rho(double rho) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("LawParams.rho must be in (0,1)");
}

void check_theta(double theta) {
    if (!(theta > 0.0) || theta > 1.0)
        throw std::domain_error("LawParams.theta must be in (0,1]");
}

void check_j(std::int64_t j) {
    if (j < 1) throw std::domain_error("law pmf: j must be >= 1");
}

// geometric mass p*(1-p)^{j-1} evaluated in log space for large j
double geometric_mass(double p, std::int64_t j) {
    return p * std::exp(static_cast<double>(j - 1) * std::log1p(-p));
}

} // namespace

LawParams::LawParams(double rho_, double theta_) : rho(rho_), theta(theta_) {
    check_rho(rho);
    check_theta(theta);
}

LawParams LawParams::from_tau(double tau_, std::size_t n_, double theta_) {
    if (!(tau_ > 0.0)) throw std::domain_error("LawParams.tau must be positive");
    if (n_ < 1) throw std::domain_error("LawParams.n must be >= 1");
    LawParams params(tau_ / static_cast<double>(n_), theta_);
    params.tau = tau_;
    params.n = n_;
    return params;
}

namespace {

// eta = 1 - (1-rho)^theta; expm1/log1p avoids cancellation at small rho,
// and theta == 1 returns rho itself so the collapse to geometric(rho) is
// bit-exact rather than merely close.
double eta_of(double rho, double theta) {
    if (theta == 1.0) return rho;
    return -std::expm1(theta * std::log1p(-rho));
}

} // namespace

NormalizationPair normalization(const LawParams& params) {
    NormalizationPair out;
    out.eta = eta_of(params.rho, params.theta);
    // defining formula c = eta / (1 - (1-eta)^{1/theta}); algebraically eta/rho
    out.c = out.eta / (-std::expm1(std::log1p(-out.eta) / params.theta));
    out.q = 1.0 - params.rho;
    out.rho_star = std::pow(out.eta, 1.0 / params.theta);
    out.q_star = 1.0 - out.rho_star;
    return out;
}

double t1_pmf_raw(const LawParams& params, std::int64_t j) {
    check_j(j);
    return params.rho *
           std::exp(static_cast<double>(j - 1) * params.theta * std::log1p(-params.rho));
}

double t1_pmf_normalized(const LawParams& params, std::int64_t j) {
    check_j(j);
    return geometric_mass(eta_of(params.rho, params.theta), j);
}

double tstar_pmf_asymptotic(const LawParams& params, std::int64_t j) {
    check_j(j);
    const double p = params.theta * params.rho;
    if (p >= 1.0) throw std::domain_error("tstar_pmf_asymptotic: theta*rho must be < 1");
    return geometric_mass(p, j) / (params.theta * params.theta);
}

double tstar_pmf_normalized(const LawParams& params, std::int64_t j) {
    check_j(j);
    const double p = params.theta * params.rho;
    if (p >= 1.0) throw std::domain_error("tstar_pmf_normalized: theta*rho must be < 1");
    return geometric_mass(p, j);
}

double tstar_pmf_limit_at_n(double theta, double tau, std::size_t n) {
    check_theta(theta);
    if (!(tau > 0.0)) throw std::domain_error("tstar_pmf_limit_at_n: tau must be positive");
    const double rho = tau / static_cast<double>(n);
    if (!(theta * rho < 1.0))
        throw std::domain_error("tstar_pmf_limit_at_n: theta*tau/n must be < 1");
    check_rho(rho);
    return std::exp(static_cast<double>(n) * std::log1p(-theta * rho)) / theta;
}

double tstar_scaled_pmf_limit(double theta, double tau) {
    check_theta(theta);
    if (!(tau > 0.0)) throw std::domain_error("tstar_scaled_pmf_limit: tau must be positive");
    return std::exp(-theta * tau) / theta;
}

double scaled_tail(double theta, double x) {
    check_theta(theta);
    if (!(x >= 0.0)) throw std::domain_error("scaled_tail: x must be >= 0");
    return std::exp(-theta * x);
}

ExpectedHittingLimits expected_hitting_limits(double theta, double tau) {
    check_theta(theta);
    if (!(tau > 0.0)) throw std::domain_error("expected_hitting_limits: tau must be positive");
    return {1.0 / (theta * theta * theta), tau / theta};
}

DiscretePmf tstar_pmf_from_t1(const DiscretePmf& t1, double rho) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("tstar_pmf_from_t1: rho must be in (0,1)");
    if (t1.total() > 1.0 + 1e-9)
        throw std::invalid_argument("tstar_pmf_from_t1: input mass exceeds 1");
    const std::vector<double> tail = t1.suffix_sums();
    DiscretePmf out;
    out.support_max = t1.support_max;
    out.mass.resize(t1.support_max);
    for (std::size_t j = 1; j <= t1.support_max; ++j)
        out.mass[j - 1] = rho * tail[j - 1];
    out.tail_mass = rho * t1.tail_mass;
    return out;
}

DiscretePmf t1_pmf_from_tstar(const DiscretePmf& tstar, double rho) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("t1_pmf_from_tstar: rho must be in (0,1)");
    DiscretePmf out;
    out.support_max = tstar.support_max;
    out.mass.resize(tstar.support_max);
    for (std::size_t j = 1; j <= tstar.support_max; ++j) {
        // the nonincrease must extend into the tail bucket, which this
        // transform pair reads as the mass just beyond the support edge
        const double next = (j < tstar.support_max) ? tstar.at(j + 1) : tstar.tail_mass;
        const double diff = tstar.at(j) - next;
        if (diff < -1e-12)
            throw std::runtime_error(
                "t1_pmf_from_tstar: increasing hitting-time mass is not realizable");
        out.mass[j - 1] = diff / rho;
    }
    out.tail_mass = tstar.tail_mass / rho;
    return out;
}

double t_theta_mixture(const LawParams& params, std::int64_t j) {
    if (j < 0) throw std::domain_error("t_theta_mixture: j must be >= 0");
    const double w = 1.0 / (params.theta * params.theta);
    if (j == 0) return 1.0 - w;
    return w * tstar_pmf_normalized(params, j);
}

bool t_theta_weight_is_proper(double theta) {
    return 1.0 / (theta * theta) <= 1.0;
}

namespace {

// geometric-type law p_j = scale * r^{j-1} on 1..J with closed tail
// sum_{j>J} = scale * r^J / (1-r)
DiscretePmf geometric_type_law(double scale, double log_r, std::size_t support_max) {
    DiscretePmf out;
    out.support_max = support_max;
    out.mass.resize(support_max);
    for (std::size_t j = 1; j <= support_max; ++j)
        out.mass[j - 1] = scale * std::exp(static_cast<double>(j - 1) * log_r);
    out.tail_mass = scale * std::exp(static_cast<double>(support_max) * log_r) /
                    (-std::expm1(log_r));
    return out;
}

} // namespace

DiscretePmf t1_raw_law(const LawParams& params, std::size_t support_max) {
    return geometric_type_law(params.rho, params.theta * std::log1p(-params.rho), support_max);
}

DiscretePmf t1_normalized_law(const LawParams& params, std::size_t support_max) {
    const double eta = eta_of(params.rho, params.theta);
    return geometric_type_law(eta, std::log1p(-eta), support_max);
}

DiscretePmf tstar_asymptotic_law(const LawParams& params, std::size_t support_max) {
    const double p = params.theta * params.rho;
    return geometric_type_law(p / (params.theta * params.theta), std::log1p(-p), support_max);
}

DiscretePmf tstar_normalized_law(const LawParams& params, std::size_t support_max) {
    const double p = params.theta * params.rho;
    return geometric_type_law(p, std::log1p(-p), support_max);
}

} // namespace evx
