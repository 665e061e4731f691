#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "evx/pmf.hpp"

namespace evx {

/// Parameters of the asymptotic hitting-time and gap laws: exceedance rate
/// rho = P{X > u}, extremal index theta, and optionally the inducing pair
/// (tau, n) with rho = tau/n.
struct LawParams {
    double rho = 0.0;
    double theta = 1.0;
    std::optional<double> tau;
    std::optional<std::size_t> n;

    LawParams(double rho, double theta);
    static LawParams from_tau(double tau, std::size_t n, double theta);
};

/// Quantities tying the gap law's two parametrizations together:
/// 1 - eta = (1-rho)^theta, c = eta / (1 - (1-eta)^{1/theta}) = eta/rho,
/// rho_star = (1 - q^theta)^{1/theta} with q = 1 - rho.
struct NormalizationPair {
    double eta = 0.0;
    double c = 0.0;
    double rho_star = 0.0;
    double q = 0.0;
    double q_star = 0.0;
};

NormalizationPair normalization(const LawParams& params);

/// Pointwise asymptotic equivalent of P{T1 = j}: rho*(1-rho)^{(j-1)theta}.
/// Unnormalized: its total mass is rho/eta (~ 1/theta), not 1.
double t1_pmf_raw(const LawParams& params, std::int64_t j);

/// Proper geometric companion of the gap law: eta*(1-eta)^{j-1}; sums to 1.
double t1_pmf_normalized(const LawParams& params, std::int64_t j);

/// Asymptotic first-hitting-time mass (rho/theta)*(1-theta*rho)^{j-1}.
/// Defective: total mass is exactly 1/theta^2.
double tstar_pmf_asymptotic(const LawParams& params, std::int64_t j);

/// Proper geometric companion of the hitting-time law:
/// theta*rho*(1-theta*rho)^{j-1}; sums to 1.
double tstar_pmf_normalized(const LawParams& params, std::int64_t j);

/// Finite-n value of the scaled hitting-time mass at the horizon,
/// P{T* = n+1}/rho with rho = tau/n, i.e. (1/theta)*(1-theta*tau/n)^n.
/// Converges to e^{-theta*tau}/theta with an O(1/n) gap.
double tstar_pmf_limit_at_n(double theta, double tau, std::size_t n);

/// The limit above: e^{-theta*tau}/theta.
double tstar_scaled_pmf_limit(double theta, double tau);

/// Limiting scaled survival P{T*/n > x} -> e^{-theta*x}.
double scaled_tail(double theta, double x);

/// The two candidate limits of rho*E[T*], which disagree for theta < 1.
/// Both are reported; neither is silently preferred.
struct ExpectedHittingLimits {
    double via_gap_law;      // 1/theta^3, from summing the gap-law tail
    double via_scaled_tail;  // tau/theta, from E(T*/n) -> 1/theta
};

ExpectedHittingLimits expected_hitting_limits(double theta, double tau);

/// Hitting-time pmf from a gap pmf: out[j] = rho * P{T1 >= j}. The tail
/// bucket of t1 is treated as an atom just beyond the support edge, so the
/// output tail is rho*t1.tail_mass and the pair below inverts exactly.
DiscretePmf tstar_pmf_from_t1(const DiscretePmf& t1, double rho);

/// Gap pmf from a hitting-time pmf: out[n] = (tstar[n] - tstar[n+1])/rho,
/// with tstar[J+1] read from the tail bucket. Requires the nonincrease to
/// hold through the tail bucket (throws std::runtime_error otherwise: such
/// a hitting-time law is not realizable by any gap law). Laws carrying an
/// aggregated tail should be truncated with their pointwise continuation
/// as the bucket before inverting.
DiscretePmf t1_pmf_from_tstar(const DiscretePmf& tstar, double rho);

/// Mixture form of the hitting-time asymptotics: mass (1/theta^2) on a
/// geometric(theta*rho) variable and 1 - 1/theta^2 at zero. For theta < 1
/// the weight at zero is negative; the value is returned as-is and
/// t_theta_weight_is_proper() reports whether the mixture is a probability.
double t_theta_mixture(const LawParams& params, std::int64_t j);
bool t_theta_weight_is_proper(double theta);

/// Analytic pmfs on {1..J} with closed-form tail buckets (no truncation
/// error), for comparisons against empirical laws.
DiscretePmf t1_raw_law(const LawParams& params, std::size_t support_max);
DiscretePmf t1_normalized_law(const LawParams& params, std::size_t support_max);
DiscretePmf tstar_asymptotic_law(const LawParams& params, std::size_t support_max);
DiscretePmf tstar_normalized_law(const LawParams& params, std::size_t support_max);

} // namespace evx
