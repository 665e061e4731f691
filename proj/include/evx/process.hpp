#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace evx {

enum class ProcessKind { Iid, Armax, MovingMax };
enum class Marginal { UnitFrechet, Uniform };

const char* to_string(ProcessKind kind);
const char* to_string(Marginal marginal);

/// A stationary-sequence generator whose extremal index and marginal
/// distribution are known in closed form.
///
/// Iid:       X_t = Z_t                          theta = 1
/// Armax:     X_t = max(alpha*X_{t-1}, (1-alpha)*Z_t), unit-Frechet Z_t,
///            stationary marginal unit Frechet   theta = 1 - alpha
/// MovingMax: X_t = max(Z_t, ..., Z_{t-m+1})     theta = 1/m
///
/// `marginal` names the innovation law Z; for MovingMax the observable
/// marginal of X_t is G(x)^m where G is the innovation CDF.
struct ProcessModel {
    ProcessKind kind = ProcessKind::Iid;
    Marginal marginal = Marginal::UnitFrechet;
    double alpha = 0.0;  // Armax only, in [0,1)
    std::size_t m = 1;   // MovingMax only, >= 1

    static ProcessModel iid(Marginal marginal = Marginal::UnitFrechet);
    static ProcessModel armax(double alpha);
    static ProcessModel moving_max(std::size_t m, Marginal marginal = Marginal::UnitFrechet);

    double true_theta() const;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    std::string describe() const;
};

struct SamplePath {
    std::vector<double> values;
    ProcessModel model;
    std::uint64_t seed = 0;
    std::uint64_t replication_id = 0;

    std::size_t size() const { return values.size(); }
};

/// Generates a stationary path of length n. Exact stationary start: the
/// Armax recursion is seeded with a unit-Frechet X_0, MovingMax draws m-1
/// pre-samples so X_1 already has the stationary law. Deterministic in
/// (model, n, seed, replication_id); replication ids index independent
/// streams under one master seed.
SamplePath simulate(const ProcessModel& model, std::size_t n,
                    std::uint64_t seed, std::uint64_t replication_id);

/// Stationary marginal CDF of X_t (total on the reals).
double marginal_cdf(const ProcessModel& model, double x);

/// Inverse of marginal_cdf on p in (0,1); closed form for every model.
double marginal_quantile(const ProcessModel& model, double p);

} // namespace evx
