#ifndef MLCD_INTEGRATE_HPP
#define MLCD_INTEGRATE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlcd/geometry.hpp"
#include "mlcd/parallel.hpp"
#include "mlcd/systems.hpp"

namespace mlcd {

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 1.0;
    double min_step = 1e-13;
};

/**
 * One adaptive Dormand-Prince 5(4) step attempt. Returns the accepted state
 * in `out` and the error estimate used by the controller.
 */
template <class Field>
class Dopri5 {
public:
    explicit Dopri5(const Field& f, int dim, IntegratorOptions opts = {})
        : field_(f), opts_(opts) {
        for (auto& k : k_) k.resize(dim);
        y_tmp_.resize(dim);
        y5_.resize(dim);
        err_.resize(dim);
    }

    /// Advance the state by exactly `duration`; `h` is the step-size memory
    /// carried across calls so consecutive short integrations stay cheap.
    void advance(Vec& y, double duration, double& h) const {
        double t = 0.0;
        if (!(h > 0.0)) h = 0.01 * duration;
        while (t < duration) {
            h = std::min({h, duration - t, opts_.max_step});
            if (h < opts_.min_step)
                throw IntegrationError("integrator step-size underflow");
            const double err = step(y, h);
            if (!std::isfinite(err)) throw IntegrationError("non-finite field value");
            if (err <= 1.0) {
                t += h;
                y = y5_;
                h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            } else {
                h *= std::max(0.9 * std::pow(err, -0.2), 0.2);
            }
        }
    }

private:
    // Scaled error norm of a trial step from y with size h; y5_ holds the
    // fifth-order result.
    double step(const Vec& y, double h) const {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        k_[0] = field_(y);
        y_tmp_ = y + h * a21 * k_[0];
        k_[1] = field_(y_tmp_);
        y_tmp_ = y + h * (a31 * k_[0] + a32 * k_[1]);
        k_[2] = field_(y_tmp_);
        y_tmp_ = y + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
        k_[3] = field_(y_tmp_);
        y_tmp_ = y + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
        k_[4] = field_(y_tmp_);
        y_tmp_ = y + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
        k_[5] = field_(y_tmp_);
        y5_ = y + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
        k_[6] = field_(y5_);
        err_ = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);

        double acc = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale =
                opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y5_[i]));
            const double r = err_[i] / scale;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(y.size()));
    }

    const Field& field_;
    IntegratorOptions opts_;
    mutable Vec k_[7];
    mutable Vec y_tmp_, y5_, err_;
};

/// Time-1 flow image of x under the field.
template <class Field>
Vec flow_time1(const Field& f, const Vec& x, IntegratorOptions opts = {}) {
    Dopri5<Field> solver(f, static_cast<int>(x.size()), opts);
    Vec y = x;
    double h = 0.0;
    solver.advance(y, 1.0, h);
    return y;
}

/// Samples of the time-1 map orbits: snapshots[i][j] = f_1^i(initial[j]).
struct OrbitEnsemble {
    PointList initial;
    std::vector<PointList> snapshots;  // horizon + 1 entries
    std::vector<char> escaped;         // per initial condition
    int horizon = 0;

    const PointList& terminal() const { return snapshots.back(); }
};

/**
 * Iterate the time-1 map of the system for every initial condition.
 *
 * Orbits that leave a 2x inflation of the domain are frozen at their first
 * outside position and flagged; downstream stages drop them.
 */
template <class Field>
OrbitEnsemble iterate_time1_field(const Field& f, const HyperRectangle& domain,
                                  const PointList& points, int horizon,
                                  IntegratorOptions opts = {}) {
    if (horizon < 1) throw std::invalid_argument("iterate_time1: horizon must be >= 1");
    OrbitEnsemble ens;
    ens.horizon = horizon;
    ens.initial = points;
    ens.escaped.assign(points.size(), 0);
    ens.snapshots.assign(static_cast<std::size_t>(horizon) + 1, PointList(points.size()));
    ens.snapshots[0] = points;

    const HyperRectangle guard = domain.inflated(2.0);
    std::vector<std::vector<Vec>> orbits(points.size());

    parallel_for(points.size(), [&](std::size_t j) {
        Dopri5<Field> solver(f, static_cast<int>(points[j].size()), opts);
        Vec y = points[j];
        double h = 0.0;
        bool out = !guard.contains(y);
        auto& orbit = orbits[j];
        orbit.reserve(static_cast<std::size_t>(horizon));
        for (int i = 0; i < horizon; ++i) {
            if (!out) {
                solver.advance(y, 1.0, h);
                if (!guard.contains(y)) out = true;
            }
            orbit.push_back(y);
        }
        if (out) ens.escaped[j] = 1;
    });

    for (std::size_t j = 0; j < points.size(); ++j)
        for (int i = 0; i < horizon; ++i) ens.snapshots[static_cast<std::size_t>(i) + 1][j] = orbits[j][i];
    return ens;
}

inline OrbitEnsemble iterate_time1(const SystemSpec& sys, const PointList& points, int horizon,
                                   IntegratorOptions opts = {}) {
    auto field = [&sys](const Vec& x) { return eval_field(sys, x); };
    return iterate_time1_field(field, sys.domain, points, horizon, opts);
}

}  // namespace mlcd

#endif
