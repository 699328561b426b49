#pragma once

// Dormand-Prince 5(4) embedded pair with the order-4 continuous extension,
// shared by the phase-plane integrator and the profile reconstruction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace eternal::rk {

template <std::size_t D>
using State = std::array<double, D>;

struct Controls {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_max = 1.0;
    double h_min = 1e-14;
    double t_max = std::numeric_limits<double>::infinity();
    long max_steps = 2'000'000;
};

enum class StopReason { Observer, StepUnderflow, StepLimit, TimeLimit, InvalidState };

/// One accepted step; evaluates the continuous extension anywhere in [t0, t1].
template <std::size_t D>
struct DenseStep {
    double t0 = 0.0;
    double t1 = 0.0;
    State<D> y0{};
    State<D> y1{};
    std::array<State<D>, 5> coeff{};

    double h() const { return t1 - t0; }

    State<D> at(double t) const {
        const double theta = (t - t0) / (t1 - t0);
        const double theta1 = 1.0 - theta;
        State<D> out{};
        for (std::size_t i = 0; i < D; ++i) {
            out[i] = coeff[0][i] +
                     theta * (coeff[1][i] +
                              theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
        }
        return out;
    }
};

template <std::size_t D>
struct DriveResult {
    StopReason reason;
    double t;
    State<D> y;
    long steps;
};

namespace detail {

// Butcher tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <std::size_t D>
bool finite(const State<D>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from (t, y) until the observer returns false or a
/// limit is hit. `rhs(t, y, dy)` returns false when y lies outside the domain of
/// the field; the step is then rejected and retried with a smaller h.
/// `observer(const DenseStep<D>&)` is invoked after every accepted step.
template <std::size_t D, class Rhs, class Observer>
DriveResult<D> drive(Rhs&& rhs, double t, State<D> y, const Controls& ctl, Observer&& observer) {
    using namespace detail;
    State<D> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, tmp{}, y_new{};
    if (!rhs(t, y, k1) || !finite(k1)) return {StopReason::InvalidState, t, y, 0};

    double h = std::min(ctl.h_init, ctl.h_max);
    long steps = 0;
    double previous_error = 1e-4;

    auto stage = [&](double tt, const State<D>& yy, State<D>& out) {
        return rhs(tt, yy, out) && finite(out);
    };

    while (true) {
        if (steps >= ctl.max_steps) return {StopReason::StepLimit, t, y, steps};
        if (t >= ctl.t_max) return {StopReason::TimeLimit, t, y, steps};
        if (h < ctl.h_min) return {StopReason::StepUnderflow, t, y, steps};

        bool ok = true;
        for (std::size_t i = 0; i < D; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        ok = ok && stage(t + c2 * h, tmp, k2);
        if (ok) {
            for (std::size_t i = 0; i < D; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            ok = stage(t + c3 * h, tmp, k3);
        }
        if (ok) {
            for (std::size_t i = 0; i < D; ++i)
                tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            ok = stage(t + c4 * h, tmp, k4);
        }
        if (ok) {
            for (std::size_t i = 0; i < D; ++i)
                tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            ok = stage(t + c5 * h, tmp, k5);
        }
        if (ok) {
            for (std::size_t i = 0; i < D; ++i)
                tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                     a65 * k5[i]);
            ok = stage(t + h, tmp, k6);
        }
        if (ok) {
            for (std::size_t i = 0; i < D; ++i)
                y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                       a76 * k6[i]);
            ok = stage(t + h, y_new, k7);
        }

        double err = std::numeric_limits<double>::infinity();
        if (ok) {
            double sum = 0.0;
            for (std::size_t i = 0; i < D; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                sum += (e / sc) * (e / sc);
            }
            err = std::sqrt(sum / static_cast<double>(D));
        }

        if (!(err <= 1.0)) {
            const double shrink =
                std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
            h *= shrink;
            continue;
        }

        DenseStep<D> step;
        step.t0 = t;
        step.t1 = t + h;
        step.y0 = y;
        step.y1 = y_new;
        for (std::size_t i = 0; i < D; ++i) {
            const double diff = y_new[i] - y[i];
            const double bspl = h * k1[i] - diff;
            step.coeff[0][i] = y[i];
            step.coeff[1][i] = diff;
            step.coeff[2][i] = bspl;
            step.coeff[3][i] = diff - h * k7[i] - bspl;
            step.coeff[4][i] =
                h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }

        t += h;
        y = y_new;
        k1 = k7;
        ++steps;

        if (!observer(step)) return {StopReason::Observer, t, y, steps};

        // PI step-size control.
        const double e = std::max(err, 1e-10);
        double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(previous_error, 0.4 / 5.0);
        factor = std::clamp(factor, 0.2, 5.0);
        previous_error = e;
        h = std::min(h * factor, ctl.h_max);
    }
}

/// Locates t in [step.t0, step.t1] with g(step.at(t)) == 0, assuming a sign
/// change between the endpoints.
template <std::size_t D, class G>
double locate_event(const DenseStep<D>& step, G&& g, double rel_tol = 1e-14) {
    double lo = step.t0;
    double hi = step.t1;
    double g_lo = g(step.y0);
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(step.at(mid));
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace eternal::rk
