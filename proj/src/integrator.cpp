#include "eternal/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "eternal/rk.hpp"

namespace eternal {

void IntegratorOptions::validate() const {
    const double fields[] = {rel_tol, abs_tol, h_init,     h_max,      eta_max,
                             X_big,   ratio_window, launch_offset, Y_blow, settle_tol, tau_max};
    for (double v : fields) {
        if (!(v > 0.0)) throw std::domain_error("integrator options must be positive");
    }
    if (max_steps <= 0) throw std::domain_error("max_steps must be positive");
    if (X_big < 1e3) throw std::domain_error("X_big must be at least 1e3");
}

std::string_view to_string(EndTag tag) {
    switch (tag) {
        case EndTag::ToQ1: return "ToQ1";
        case EndTag::ToQ4: return "ToQ4";
        case EndTag::ToQ3: return "ToQ3";
        case EndTag::Unresolved: return "Unresolved";
    }
    return "?";
}

PhasePoint launch_from_p0(const ModelParams& params, double K, const IntegratorOptions& opts) {
    if (!(K > 0.0)) throw std::domain_error("launch_from_p0 requires K > 0");
    const double m = params.m();
    const double p = params.p();
    const double N = params.N();
    const double d = opts.launch_offset;
    const double correction = K * (m - 1.0) / (N * (m - 1.0) + 2.0 * (1.0 - p));
    return {d, (2.0 / N) * d - correction * frac_pow(d, params.reaction_power())};
}

namespace {

enum class PlaneExit { Escaped, BlowDown, BlowUp, EtaLimit, Stalled };

struct PlaneResult {
    PlaneExit exit;
    double eta;
    double X;
    double Y;
    long steps;
};

rk::Controls plane_controls(const IntegratorOptions& opts) {
    rk::Controls c;
    c.rel_tol = opts.rel_tol;
    c.abs_tol = opts.abs_tol;
    c.h_init = opts.h_init;
    c.h_max = opts.h_max;
    c.max_steps = opts.max_steps;
    return c;
}

std::string describe(const char* what, double a, double b) {
    std::ostringstream os;
    os.precision(10);
    os << what << " (" << a << ", " << b << ")";
    return os.str();
}

// Integrates in the (X, Y) plane. `hook` sees every accepted dense step.
template <class Hook>
PlaneResult run_plane(const PhasePoint& start, const ModelParams& params, double K,
                      const IntegratorOptions& opts, Hook&& hook) {
    auto rhs = [&](double, const rk::State<2>& s, rk::State<2>& ds) {
        if (s[0] < 0.0) return false;
        const FieldValue v = vector_field({s[0], s[1]}, params, K);
        ds = {v.dX, v.dY};
        return true;
    };

    PlaneResult out{PlaneExit::Stalled, 0.0, start.X, start.Y, 0};
    auto observer = [&](const rk::DenseStep<2>& step) {
        hook(step);
        const auto& y1 = step.y1;
        if (y1[0] >= opts.X_big) {
            const double t = rk::locate_event(
                step, [&](const rk::State<2>& s) { return s[0] - opts.X_big; });
            const auto s = step.at(t);
            out = {PlaneExit::Escaped, t, s[0], s[1], 0};
            return false;
        }
        if (std::abs(y1[1]) > opts.Y_blow) {
            out = {y1[1] < 0.0 ? PlaneExit::BlowDown : PlaneExit::BlowUp, step.t1, y1[0], y1[1], 0};
            return false;
        }
        if (step.t1 > opts.eta_max) {
            out = {PlaneExit::EtaLimit, step.t1, y1[0], y1[1], 0};
            return false;
        }
        return true;
    };

    const auto res = rk::drive<2>(rhs, 0.0, {start.X, start.Y}, plane_controls(opts), observer);
    if (res.reason == rk::StopReason::InvalidState) {
        throw NumericalError(describe("vector field not finite at start", start.X, start.Y));
    }
    if (!std::isfinite(res.y[0]) || !std::isfinite(res.y[1])) {
        throw NumericalError(describe("orbit state became non-finite near", res.y[0], res.y[1]));
    }
    if (res.reason != rk::StopReason::Observer) out = {PlaneExit::Stalled, res.t, res.y[0], res.y[1], 0};
    out.steps = res.steps;
    return out;
}

// Slope of the Q4 ray, if it exists for this K.
std::optional<double> q4_slope(const ModelParams& params, double K) {
    const double m = params.m();
    switch (params.regime()) {
        case Regime::Supercritical: return -(m - 1.0);
        case Regime::Critical: {
            const double disc = (m - 1.0) * (m - 1.0) - 4.0 * K;
            if (disc < 0.0) return std::nullopt;
            return 0.5 * (-(m - 1.0) - std::sqrt(disc));
        }
        case Regime::Subcritical: return std::nullopt;
    }
    return std::nullopt;
}

// Chart at infinity. State (y, zeta, eta) with y = Y/X, zeta = -ln X.
OrbitEnd run_chart(const PlaneResult& entry, const ModelParams& params, double K,
                   const IntegratorOptions& opts, long steps_left, Orbit& orbit) {
    const double m = params.m();
    const double N = params.N();
    const double s = params.chart_power();
    const bool critical = params.regime() == Regime::Critical;
    const bool super = params.regime() == Regime::Supercritical;
    const double w = opts.ratio_window;

    auto field = [&](const rk::State<3>& st, rk::State<3>& ds) {
        const double y = st[0];
        const double z = std::exp(st[1]);
        const double zs = critical ? 1.0 : std::exp(s * st[1]);
        ds[0] = 2.0 * z - (m - 1.0) * y - N * y * z - y * y - K * zs;
        ds[1] = (m - 1.0) * y - 2.0 * z;
        ds[2] = z;
        return std::isfinite(ds[0]) && std::isfinite(ds[1]);
    };
    auto rhs = [&](double, const rk::State<3>& st, rk::State<3>& ds) { return field(st, ds); };

    rk::Controls ctl;
    ctl.rel_tol = opts.rel_tol;
    ctl.abs_tol = opts.abs_tol;
    ctl.h_init = opts.h_init;
    ctl.h_max = std::numeric_limits<double>::infinity();
    ctl.t_max = opts.tau_max;
    ctl.max_steps = steps_left;

    auto zs_of = [&](double lnz) { return std::exp(s * lnz); };
    OrbitEnd end;
    bool decided = false;
    auto observer = [&](const rk::DenseStep<3>& step) {
        const auto& st = step.y1;
        rk::State<3> ds;
        if (!field(st, ds)) return true;
        const double y = st[0];
        const double X = std::exp(-st[1]);
        if (std::isfinite(X) && st[2] > orbit.samples.back().eta) {
            orbit.samples.push_back({st[2], X, y * X});
        }
        if (y < -(m - 1.0) * (1.0 + w) && ds[0] < 0.0) {
            end = {EndTag::ToQ3, y, describe("slope below the Q4 window and falling; (y, ln z) =", y, st[1])};
            decided = true;
        } else if (super && y > -(1.0 - w) * (m - 1.0) / m &&
                   std::abs(y) <= 10.0 * (K * zs_of(st[1]) + 2.0 * std::exp(st[1])) / (m - 1.0)) {
            end = {EndTag::ToQ1, y,
                   describe("on the slow branch y ~ (2z - K z^s)/(m-1); (y, ln z) =", y, st[1])};
            decided = true;
        } else if (critical && y > -(1.0 + w) * (m - 1.0) / 2.0 && std::abs(ds[0]) < opts.settle_tol) {
            end = {EndTag::ToQ1, y, describe("slope settled; (y, ln z) =", y, st[1])};
            decided = true;
        }
        return !decided;
    };

    const auto res = rk::drive<3>(rhs, 0.0, {entry.Y / entry.X, -std::log(entry.X), entry.eta}, ctl,
                                  observer);
    orbit.steps += res.steps;
    if (res.reason == rk::StopReason::InvalidState) {
        throw NumericalError(describe("chart field not finite at entry", entry.X, entry.Y));
    }
    if (decided) return end;

    const double y = res.y[0];
    const auto q4 = q4_slope(params, K);
    if (q4 && std::abs(y - *q4) < w * (m - 1.0)) {
        return {EndTag::ToQ4, y, describe("budget exhausted near the Q4 ray; (y, ln z) =", y, res.y[1])};
    }
    return {EndTag::Unresolved, y, describe("chart budget exhausted; (y, ln z) =", y, res.y[1])};
}

}  // namespace

Orbit integrate(const PhasePoint& start, const ModelParams& params, double K,
                const IntegratorOptions& opts) {
    opts.validate();
    if (!(K > 0.0)) throw std::domain_error("integrate requires K > 0");
    if (!(start.X > 0.0)) throw std::domain_error("integrate requires start.X > 0");

    Orbit orbit;
    orbit.samples.push_back({0.0, start.X, start.Y});
    auto record = [&](const rk::DenseStep<2>& step) {
        if (step.y1[0] <= opts.X_big) orbit.samples.push_back({step.t1, step.y1[0], step.y1[1]});
    };
    const PlaneResult plane = run_plane(start, params, K, opts, record);
    orbit.steps = plane.steps;
    const double slope = plane.Y / plane.X;

    switch (plane.exit) {
        case PlaneExit::BlowDown:
            orbit.termination = {EndTag::ToQ3, slope,
                                 describe("Y blew down at bounded X; (X, Y) =", plane.X, plane.Y)};
            return orbit;
        case PlaneExit::BlowUp:
            orbit.termination = {EndTag::Unresolved, slope,
                                 describe("Y blew up; (X, Y) =", plane.X, plane.Y)};
            return orbit;
        case PlaneExit::EtaLimit:
            orbit.termination = {EndTag::Unresolved, slope,
                                 describe("eta_max reached at (X, Y) =", plane.X, plane.Y)};
            return orbit;
        case PlaneExit::Stalled:
            orbit.termination = {EndTag::Unresolved, slope,
                                 describe("step size or step budget exhausted at (X, Y) =", plane.X,
                                          plane.Y)};
            return orbit;
        case PlaneExit::Escaped: break;
    }

    orbit.samples.push_back({plane.eta, plane.X, plane.Y});
    orbit.termination = run_chart(plane, params, K, opts, opts.max_steps - plane.steps, orbit);
    return orbit;
}

namespace {

// Y on an increasing X-grid, read from the dense output of the plane phase.
std::vector<double> sample_on_grid(const ModelParams& params, double K, const IntegratorOptions& opts,
                                   const std::vector<double>& grid) {
    std::vector<double> Y;
    Y.reserve(grid.size());
    std::size_t next = 0;
    auto hook = [&](const rk::DenseStep<2>& step) {
        while (next < grid.size() && grid[next] <= step.y1[0]) {
            const double target = grid[next];
            if (target < step.y0[0]) {
                throw NumericalError("orbit is not monotone in X on the comparison grid");
            }
            const double t =
                rk::locate_event(step, [&](const rk::State<2>& s) { return s[0] - target; });
            Y.push_back(step.at(t)[1]);
            ++next;
        }
    };
    run_plane(launch_from_p0(params, K, opts), params, K, opts, hook);
    return Y;
}

double plane_reach(const Orbit& orbit, double Y_cap, double X_big) {
    double reach = 0.0;
    for (const auto& s : orbit.samples) {
        if (s.X > X_big || s.Y >= Y_cap) break;
        reach = std::max(reach, s.X);
    }
    return reach;
}

}  // namespace

bool orbit_monotonicity_check(const ModelParams& params, double K1, double K2,
                              const IntegratorOptions& opts) {
    if (!(K1 > 0.0 && K1 < K2)) throw std::domain_error("monotonicity check requires 0 < K1 < K2");
    const double Y_cap = 2.0 / (params.m() - 1.0);
    const Orbit o1 = integrate(launch_from_p0(params, K1, opts), params, K1, opts);
    const Orbit o2 = integrate(launch_from_p0(params, K2, opts), params, K2, opts);
    const double top = std::min({plane_reach(o1, Y_cap, opts.X_big), plane_reach(o2, Y_cap, opts.X_big),
                                 opts.X_big});
    const double bottom = std::max(1e-3, 10.0 * opts.launch_offset);
    if (top < 1.0) {
        throw NumericalError("comparison grid failure: an orbit ends before X = 1");
    }

    constexpr int kPoints = 241;
    std::vector<double> grid(kPoints);
    const double lo = std::log(bottom);
    const double hi = std::log(top) + std::log1p(-1e-9);
    for (int i = 0; i < kPoints; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));

    const auto Y1 = sample_on_grid(params, K1, opts, grid);
    const auto Y2 = sample_on_grid(params, K2, opts, grid);
    if (Y1.size() != grid.size() || Y2.size() != grid.size()) {
        throw NumericalError("comparison grid failure: orbit did not cover the grid");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(Y2[i] < Y1[i])) return false;
    }
    return true;
}

}  // namespace eternal
