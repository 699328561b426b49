#include "eternal/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eternal/phaseplane.hpp"
#include "eternal/rk.hpp"

namespace eternal {

std::string_view to_string(InterfaceType type) {
    switch (type) {
        case InterfaceType::TypeI: return "TypeI";
        case InterfaceType::TypeII: return "TypeII";
        case InterfaceType::SignChange: return "SignChange";
        case InterfaceType::Indeterminate: return "Indeterminate";
    }
    return "?";
}

double profile_second_derivative(const ModelParams& params, double alpha, double beta, double xi,
                                 double f, double fp) {
    const double m = params.m();
    const double N = params.N();
    const double fm1 = std::pow(f, m - 1.0);
    const double rhs = alpha * f - beta * xi * fp - frac_pow(xi, params.sigma()) * std::pow(f, params.p()) -
                       (N - 1.0) / xi * m * fm1 * fp - m * (m - 1.0) * fm1 / f * fp * fp;
    return rhs / (m * fm1);
}

namespace {

struct Segment {
    std::size_t i;  // interval [xi[i], xi[i+1]]
    double h;
    double t;
    std::array<double, 6> a;  // quintic in t
};

Segment segment(const Profile& P, double x) {
    const auto it = std::upper_bound(P.xi.begin(), P.xi.end(), x);
    std::size_t i = static_cast<std::size_t>(it - P.xi.begin());
    i = std::clamp<std::size_t>(i, 1, P.xi.size() - 1) - 1;
    const double h = P.xi[i + 1] - P.xi[i];
    const double dY = P.f[i + 1] - P.f[i];
    const double D0 = h * P.fp[i];
    const double D1 = h * P.fp[i + 1];
    const double S0 = h * h * P.fpp[i];
    const double S1 = h * h * P.fpp[i + 1];
    Segment s{i, h, (x - P.xi[i]) / h, {}};
    s.a[0] = P.f[i];
    s.a[1] = D0;
    s.a[2] = 0.5 * S0;
    s.a[3] = 10.0 * dY - 6.0 * D0 - 4.0 * D1 - 0.5 * (3.0 * S0 - S1);
    s.a[4] = -15.0 * dY + 8.0 * D0 + 7.0 * D1 + 0.5 * (3.0 * S0 - 2.0 * S1);
    s.a[5] = 6.0 * dY - 3.0 * D0 - 3.0 * D1 - 0.5 * (S0 - S1);
    return s;
}

// Power-law tail between the last node and xi0, matched to the last node value.
double tail(const Profile& P, double x, bool derivative) {
    if (!P.xi0 || !P.interface_fit || x >= *P.xi0) return 0.0;
    const double e = P.interface_fit->exponent;
    const double gap_last = *P.xi0 - P.xi.back();
    if (!(gap_last > 0.0)) return 0.0;
    const double ratio = (*P.xi0 - x) / gap_last;
    const double v = P.f.back() * std::pow(ratio, e);
    return derivative ? -e * v / (*P.xi0 - x) : v;
}

}  // namespace

double Profile::value(double x) const {
    if (x <= 0.0) return f.front();
    if (x >= xi.back()) return x == xi.back() ? f.back() : tail(*this, x, false);
    const Segment s = segment(*this, x);
    const double t = s.t;
    return s.a[0] + t * (s.a[1] + t * (s.a[2] + t * (s.a[3] + t * (s.a[4] + t * s.a[5]))));
}

double Profile::derivative(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= xi.back()) return x == xi.back() ? fp.back() : tail(*this, x, true);
    const Segment s = segment(*this, x);
    const double t = s.t;
    const double dp =
        s.a[1] + t * (2.0 * s.a[2] + t * (3.0 * s.a[3] + t * (4.0 * s.a[4] + t * 5.0 * s.a[5])));
    return dp / s.h;
}

Profile reconstruct(const ModelParams& params, double K, const ProfileOptions& opts) {
    if (params.regime() == Regime::Subcritical) {
        throw std::domain_error("profile reconstruction requires m + p >= 2");
    }
    const ShootingParam sp = alpha_beta_from_k(params, K);
    const double m = params.m();
    const double N = params.N();
    const double alpha = sp.alpha;
    const double beta = sp.beta;

    Profile P{.params = params, .K = K, .alpha = alpha, .beta = beta};
    auto push = [&](double x, double f, double fp) {
        P.xi.push_back(x);
        P.f.push_back(f);
        P.fp.push_back(fp);
        P.fpp.push_back(profile_second_derivative(params, alpha, beta, x, f, fp));
    };

    // Series start f = (1 + c xi^2)^{1/(m-1)} - b xi^{2+sigma}; the second term
    // balances the weighted reaction at leading order.
    const double sigma = params.sigma();
    const double length = std::sqrt(2.0 * m * N / (alpha * (m - 1.0)));
    const double c = alpha * (m - 1.0) / (2.0 * m * N);
    const double b = 1.0 / (m * (2.0 + sigma) * (N + sigma));
    const double eps = opts.seed_factor * length;
    const double base = 1.0 + c * eps * eps;
    const double f_eps = std::pow(base, 1.0 / (m - 1.0)) - b * std::pow(eps, 2.0 + sigma);
    const double fp_eps = std::pow(base, 1.0 / (m - 1.0)) / base * 2.0 * c * eps / (m - 1.0) -
                          b * (2.0 + sigma) * std::pow(eps, 1.0 + sigma);
    P.xi.push_back(0.0);
    P.f.push_back(1.0);
    P.fp.push_back(0.0);
    P.fpp.push_back(alpha / (m * N));
    P.seed_xi = eps;
    P.seed_f = f_eps;
    P.seed_fp = fp_eps;

    // Degenerate-diffusion time ds = dxi / f^{m-1}: the damping term beta xi f'
    // is no longer divided by f^{m-1}, which keeps the step size bounded near the edge.
    auto rhs = [&](double, const rk::State<3>& s, rk::State<3>& ds) {
        const double x = s[0];
        const double f = s[1];
        const double g = s[2];
        if (!(f > 0.0)) return false;
        const double fm1 = std::pow(f, m - 1.0);
        ds[0] = fm1;
        ds[1] = fm1 * g;
        ds[2] = (alpha * f - beta * x * g - frac_pow(x, params.sigma()) * std::pow(f, params.p()) -
                 (N - 1.0) / x * m * fm1 * g - m * (m - 1.0) * fm1 / f * g * g) /
                m;
        return true;
    };
    rk::Controls ctl;
    ctl.rel_tol = opts.rel_tol;
    ctl.abs_tol = opts.abs_tol;
    ctl.h_init = eps / std::pow(f_eps, m - 1.0);
    ctl.h_max = std::numeric_limits<double>::infinity();
    ctl.h_min = 1e-15 * length;
    ctl.max_steps = opts.max_steps;

    // Node spacing: a fixed fraction of the natural length, refined near the edge
    // where f/|f'| measures the distance to the interface.
    auto target_spacing = [&](double f, double g) {
        double d = opts.spacing * length;
        if (g < 0.0) d = std::min(d, 0.05 * f / -g);
        return d;
    };
    auto record = [&](const rk::State<3>& s) {
        if (s[0] > P.xi.back()) push(s[0], s[1], s[2]);
    };

    bool floored = false;
    bool capped = false;
    const double xi_cap = opts.xi_max * length;
    auto observer = [&](const rk::DenseStep<3>& step) {
        rk::DenseStep<3> part = step;
        if (step.y1[1] <= opts.f_floor) {
            part.t1 = rk::locate_event(
                step, [&](const rk::State<3>& s) { return s[1] - opts.f_floor; });
            part.y1 = step.at(part.t1);
            floored = true;
        }
        const double spacing = std::min(target_spacing(part.y0[1], part.y0[2]),
                                        target_spacing(part.y1[1], part.y1[2]));
        const double advance = part.y1[0] - P.xi.back();
        if (advance > spacing) {
            const int pieces = static_cast<int>(std::ceil((part.y1[0] - part.y0[0]) / spacing));
            for (int k = 1; k < pieces; ++k) {
                record(step.at(part.t0 + (part.t1 - part.t0) * k / pieces));
            }
        }
        // The seed itself is not a node: steps there are far shorter than the spacing.
        if (floored || advance >= 0.2 * spacing) record(part.y1);
        if (part.y1[0] > xi_cap) capped = true;
        return !floored && !capped;
    };
    const auto res = rk::drive<3>(rhs, 0.0, {eps, f_eps, fp_eps}, ctl, observer);
    if (!floored && res.y[0] > P.xi.back() && res.y[1] > 0.0) record(res.y);

    if (floored) {
        P.stop_reason = "f_floor";
    } else if (capped) {
        P.stop_reason = "xi_max";
    } else {
        switch (res.reason) {
            case rk::StopReason::StepUnderflow: P.stop_reason = "step_underflow"; break;
            case rk::StopReason::StepLimit: P.stop_reason = "step_limit"; break;
            default: P.stop_reason = "stopped"; break;
        }
    }
    for (std::size_t i = 0; i < P.f.size(); ++i) {
        if (!std::isfinite(P.f[i]) || !std::isfinite(P.fp[i]) || !std::isfinite(P.fpp[i])) {
            throw NumericalError("profile integration produced a non-finite value");
        }
    }

    try {
        P.interface_fit = fit_interface(P, opts.fit_window, opts.fit_window);
        P.xi0 = P.interface_fit->xi0;
    } catch (const NumericalError&) {
        // Not enough samples near the edge; leave the interface unset.
    }
    return P;
}

namespace {

// Solves A x = b for a small dense system by partial pivoting.
template <std::size_t n>
std::array<double, n> solve(std::array<std::array<double, n>, n> A, std::array<double, n> b) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(A[r][k]) > std::abs(A[piv][k])) piv = r;
        }
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double factor = A[r][k] / A[k][k];
            for (std::size_t c = k; c < n; ++c) A[r][c] -= factor * A[k][c];
            b[r] -= factor * b[k];
        }
    }
    std::array<double, n> x{};
    for (std::size_t k = n; k-- > 0;) {
        double acc = b[k];
        for (std::size_t c = k + 1; c < n; ++c) acc -= A[k][c] * x[c];
        x[k] = acc / A[k][k];
    }
    return x;
}

}  // namespace

double ode_residual(const Profile& P, std::size_t index) {
    if (index < 1 || index + 1 >= P.xi.size()) {
        throw std::out_of_range("ode_residual needs an interior node");
    }
    const double m = P.params.m();
    const double N = P.params.N();
    auto u = [&](std::size_t i) { return std::pow(P.f[i], m); };
    auto du = [&](std::size_t i) { return m * std::pow(P.f[i], m - 1.0) * P.fp[i]; };

    // Quintic through (u, u') at three nodes; its second derivative at the middle.
    const double x0 = P.xi[index];
    const double H = std::max(x0 - P.xi[index - 1], P.xi[index + 1] - x0);
    std::array<std::array<double, 6>, 6> A{};
    std::array<double, 6> b{};
    for (int j = 0; j < 3; ++j) {
        const std::size_t i = index - 1 + j;
        const double s = (P.xi[i] - x0) / H;
        for (int k = 0; k < 6; ++k) {
            A[2 * j][k] = std::pow(s, k);
            A[2 * j + 1][k] = k == 0 ? 0.0 : k * std::pow(s, k - 1);
        }
        b[2 * j] = u(i);
        b[2 * j + 1] = H * du(i);
    }
    const auto coef = solve<6>(A, b);
    const double d2u = 2.0 * coef[2] / (H * H);

    const double xi = x0;
    const double f = P.f[index];
    const double res = d2u + (N - 1.0) / xi * du(index) - P.alpha * f + P.beta * xi * P.fp[index] +
                       frac_pow(xi, P.params.sigma()) * std::pow(f, P.params.p());
    return std::abs(res);
}

double ode_residual_scale(const Profile& P, std::size_t index) {
    return std::max(1.0, P.alpha * P.f[index]);
}

namespace {

struct Regression {
    double slope;
    double intercept;
    double rms;
};

Regression regress(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

}  // namespace

InterfaceFit fit_interface(const Profile& P, double window, double fit_window) {
    if (!(window > 0.0)) throw std::domain_error("fit window must be positive");
    const double m = P.params.m();
    const double p = P.params.p();

    // Decreasing tail below window * f(0).
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(P.f.begin(), P.f.end()) - P.f.begin());
    std::vector<double> xs, lf;
    for (std::size_t i = peak; i < P.f.size(); ++i) {
        if (P.f[i] < window * P.f.front() && P.f[i] > 0.0) {
            xs.push_back(P.xi[i]);
            lf.push_back(std::log(P.f[i]));
        }
    }
    if (xs.size() < 20) throw NumericalError("fewer than 20 samples near the interface");

    const double last = xs.back();
    std::vector<double> lx(xs.size());
    auto residual_at = [&](double t) {
        const double xi0 = last + std::exp(t);
        for (std::size_t i = 0; i < xs.size(); ++i) lx[i] = std::log(xi0 - xs[i]);
        return regress(lx, lf);
    };

    // Coarse scan over ln(xi0 - xi_last), then golden-section refinement.
    const double t_hi = std::log(std::max(last - xs.front(), 1e-300));
    const double t_lo = t_hi - 40.0;
    constexpr int kScan = 400;
    int best = 0;
    double best_rms = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kScan; ++k) {
        const double r = residual_at(t_lo + (t_hi - t_lo) * k / kScan).rms;
        if (r < best_rms) {
            best_rms = r;
            best = k;
        }
    }
    const double dt = (t_hi - t_lo) / kScan;
    double a = t_lo + dt * std::max(best - 1, 0);
    double b = t_lo + dt * std::min(best + 1, kScan);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = residual_at(c).rms;
    double fd = residual_at(d).rms;
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = residual_at(c).rms;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = residual_at(d).rms;
        }
    }
    const double t = 0.5 * (a + b);
    const Regression fit = residual_at(t);

    InterfaceFit out{last + std::exp(t), fit.slope, std::exp(fit.intercept), InterfaceType::Indeterminate,
                     fit.rms, static_cast<int>(xs.size())};
    const std::pair<InterfaceType, double> targets[] = {
        {InterfaceType::TypeI, 1.0 / (m - 1.0)},
        {InterfaceType::TypeII, 1.0 / (1.0 - p)},
        {InterfaceType::SignChange, 1.0 / m},
    };
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& [type, target] : targets) {
        const double rel = std::abs(out.exponent - target) / target;
        if (rel < fit_window && rel < closest) {
            closest = rel;
            out.type_label = type;
        }
    }
    return out;
}

Profile rescale(const Profile& P, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("rescale requires lambda > 0");
    const double a = std::pow(lambda, -2.0 / (P.params.m() - 1.0));
    Profile out = P;
    for (std::size_t i = 0; i < P.xi.size(); ++i) {
        out.xi[i] = P.xi[i] / lambda;
        out.f[i] = a * P.f[i];
        out.fp[i] = a * lambda * P.fp[i];
        out.fpp[i] = a * lambda * lambda * P.fpp[i];
    }
    out.scale = a * P.scale;
    out.seed_xi = P.seed_xi / lambda;
    out.seed_f = a * P.seed_f;
    out.seed_fp = a * lambda * P.seed_fp;
    if (P.xi0) out.xi0 = *P.xi0 / lambda;
    if (P.interface_fit) {
        out.interface_fit->xi0 = P.interface_fit->xi0 / lambda;
        out.interface_fit->constant =
            a * P.interface_fit->constant * std::pow(lambda, P.interface_fit->exponent);
    }
    return out;
}

}  // namespace eternal
