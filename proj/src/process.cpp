#include "evx/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "evx/rng.hpp"

namespace evx {

const char* to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Iid: return "IID";
        case ProcessKind::Armax: return "ARMAX";
        case ProcessKind::MovingMax: return "MOVING_MAX";
    }
    return "?";
}

const char* to_string(Marginal marginal) {
    switch (marginal) {
        case Marginal::UnitFrechet: return "unit_frechet";
        case Marginal::Uniform: return "uniform";
    }
    return "?";
}

ProcessModel ProcessModel::iid(Marginal marginal) {
    ProcessModel model;
    model.kind = ProcessKind::Iid;
    model.marginal = marginal;
    return model;
}

ProcessModel ProcessModel::armax(double alpha) {
    ProcessModel model;
    model.kind = ProcessKind::Armax;
    model.marginal = Marginal::UnitFrechet;
    model.alpha = alpha;
    return model;
}

ProcessModel ProcessModel::moving_max(std::size_t m, Marginal marginal) {
    ProcessModel model;
    model.kind = ProcessKind::MovingMax;
    model.marginal = marginal;
    model.m = m;
    return model;
}

double ProcessModel::true_theta() const {
    switch (kind) {
        case ProcessKind::Iid: return 1.0;
        case ProcessKind::Armax: return 1.0 - alpha;
        case ProcessKind::MovingMax: return 1.0 / static_cast<double>(m);
    }
    return 1.0;
}

void ProcessModel::validate() const {
    if (kind == ProcessKind::Armax) {
        if (!(alpha >= 0.0) || alpha >= 1.0 || !std::isfinite(alpha))
            throw std::invalid_argument("ProcessModel.alpha: ARMAX requires alpha in [0,1)");
        if (marginal != Marginal::UnitFrechet)
            throw std::invalid_argument(
                "ProcessModel.marginal: ARMAX is defined with unit-Frechet innovations only");
    }
    if (kind == ProcessKind::MovingMax && m < 1)
        throw std::invalid_argument("ProcessModel.m: MOVING_MAX requires m >= 1");
}

std::string ProcessModel::describe() const {
    std::ostringstream out;
    out << to_string(kind);
    if (kind == ProcessKind::Armax) out << "(alpha=" << alpha << ")";
    if (kind == ProcessKind::MovingMax) out << "(m=" << m << ")";
    out << "/" << to_string(marginal);
    return out.str();
}

namespace {

double draw_innovation(Engine& eng, Marginal marginal) {
    const double u = uniform_open01(eng);
    if (marginal == Marginal::UnitFrechet) return -1.0 / std::log(u);
    return u;
}

double innovation_cdf(Marginal marginal, double x) {
    if (marginal == Marginal::UnitFrechet)
        return x > 0.0 ? std::exp(-1.0 / x) : 0.0;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x;
}

double innovation_quantile(Marginal marginal, double p) {
    if (marginal == Marginal::UnitFrechet) return -1.0 / std::log(p);
    return p;
}

} // namespace

SamplePath simulate(const ProcessModel& model, std::size_t n,
                    std::uint64_t seed, std::uint64_t replication_id) {
    model.validate();
    if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");

    Engine eng = make_engine(seed, replication_id);
    SamplePath path;
    path.model = model;
    path.seed = seed;
    path.replication_id = replication_id;
    path.values.resize(n);

    switch (model.kind) {
        case ProcessKind::Iid: {
            for (std::size_t t = 0; t < n; ++t)
                path.values[t] = draw_innovation(eng, model.marginal);
            break;
        }
        case ProcessKind::Armax: {
            double prev = draw_innovation(eng, Marginal::UnitFrechet);  // stationary X_0
            const double a = model.alpha;
            for (std::size_t t = 0; t < n; ++t) {
                const double z = draw_innovation(eng, Marginal::UnitFrechet);
                prev = std::max(a * prev, (1.0 - a) * z);
                path.values[t] = prev;
            }
            break;
        }
        case ProcessKind::MovingMax: {
            const std::size_t m = model.m;
            std::vector<double> window(m);
            for (std::size_t i = 0; i + 1 < m; ++i)  // m-1 pre-samples
                window[i] = draw_innovation(eng, model.marginal);
            for (std::size_t t = 0; t < n; ++t) {
                window[(m - 1 + t) % m] = draw_innovation(eng, model.marginal);
                path.values[t] = *std::max_element(window.begin(), window.end());
            }
            break;
        }
    }
    return path;
}

double marginal_cdf(const ProcessModel& model, double x) {
    switch (model.kind) {
        case ProcessKind::Iid:
            return innovation_cdf(model.marginal, x);
        case ProcessKind::Armax:
            // stationary marginal is the unit-Frechet fixed point of
            // F(x) = F(x/alpha) * exp(-(1-alpha)/x)
            return innovation_cdf(Marginal::UnitFrechet, x);
        case ProcessKind::MovingMax:
            return std::pow(innovation_cdf(model.marginal, x),
                            static_cast<double>(model.m));
    }
    return 0.0;
}

double marginal_quantile(const ProcessModel& model, double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("marginal_quantile: p must be in (0,1)");
    switch (model.kind) {
        case ProcessKind::Iid:
            return innovation_quantile(model.marginal, p);
        case ProcessKind::Armax:
            return innovation_quantile(Marginal::UnitFrechet, p);
        case ProcessKind::MovingMax:
            return innovation_quantile(model.marginal,
                                       std::pow(p, 1.0 / static_cast<double>(model.m)));
    }
    return 0.0;
}

} // namespace evx
