#include "eternal/solution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eternal/phaseplane.hpp"

namespace eternal {

EternalSolution make_solution(Profile profile) {
    const double alpha = profile.alpha;
    const double beta = profile.beta;
    return {std::move(profile), alpha, beta};
}

double evaluate_u(const EternalSolution& sol, double r, double t) {
    return std::exp(sol.alpha * t) * sol.profile.value(std::abs(r) * std::exp(-sol.beta * t));
}

double support_radius(const EternalSolution& sol, double t) {
    if (!sol.profile.xi0) throw std::domain_error("profile has no interface");
    return *sol.profile.xi0 * std::exp(sol.beta * t);
}

double pde_residual(const EternalSolution& sol, double r, double t, double h) {
    if (!(h > 0.0)) throw std::domain_error("pde_residual needs h > 0");
    if (r < 0.0) r = -r;
    const ModelParams& P = sol.profile.params;
    const double m = P.m();
    const double N = P.N();
    auto um = [&](double rr, double tt) { return std::pow(evaluate_u(sol, rr, tt), m); };

    // A time step k moves the similarity variable by about beta r k, so k is
    // shrunk until that shift and the growth alpha k are no larger than h.
    const double k = h / std::max({1.0, sol.beta * r, sol.alpha});
    const double u = evaluate_u(sol, r, t);
    const double ut = (evaluate_u(sol, r, t + k) - evaluate_u(sol, r, t - k)) / (2.0 * k);
    const double w_plus = um(r + h, t);
    const double w_mid = um(r, t);
    const double w_minus = um(r - h, t);  // even extension through evaluate_u's |r|
    const double wrr = (w_plus - 2.0 * w_mid + w_minus) / (h * h);
    const double first = r > 0.0 ? (N - 1.0) / r * (w_plus - w_minus) / (2.0 * h) : (N - 1.0) * wrr;
    return ut - wrr - first - frac_pow(r, P.sigma()) * std::pow(u, P.p());
}

double sphere_measure(int N) {
    if (N < 1) throw std::domain_error("dimension must be positive");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double mass(const EternalSolution& sol, double t) {
    const Profile& pr = sol.profile;
    const int N = pr.params.N();
    const double stretch = std::exp(sol.beta * t);
    auto integrand = [&](double r) { return evaluate_u(sol, r, t) * std::pow(r, N - 1); };

    // Node intervals mapped to r; each piece is a smooth quintic.
    using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pr.xi.size(); ++i) {
        const double value = Quad::integrate(integrand, pr.xi[i] * stretch, pr.xi[i + 1] * stretch, 8, 1e-10);
        if (!std::isfinite(value)) throw NumericalError("mass quadrature produced a non-finite value");
        total += value;
    }
    if (pr.xi0 && *pr.xi0 > pr.xi.back()) {
        total += Quad::integrate(integrand, pr.xi.back() * stretch, *pr.xi0 * stretch, 15, 1e-10);
    }
    if (!std::isfinite(total)) throw NumericalError("mass quadrature produced a non-finite value");
    return sphere_measure(N) * total;
}

double mass_growth_rate(const EternalSolution& sol, const std::vector<double>& t_samples) {
    if (t_samples.size() < 2) throw std::domain_error("mass_growth_rate needs two or more times");
    double st = 0, sl = 0;
    std::vector<double> lm;
    for (double t : t_samples) {
        const double M = mass(sol, t);
        if (!(M > 0.0)) throw NumericalError("non-positive mass");
        lm.push_back(std::log(M));
        st += t;
        sl += lm.back();
    }
    const double n = static_cast<double>(t_samples.size());
    const double mt = st / n;
    const double ml = sl / n;
    double stt = 0, stl = 0;
    for (std::size_t i = 0; i < lm.size(); ++i) {
        stt += (t_samples[i] - mt) * (t_samples[i] - mt);
        stl += (t_samples[i] - mt) * (lm[i] - ml);
    }
    if (!(stt > 0.0)) throw std::domain_error("mass_growth_rate needs distinct times");
    return stl / stt;
}

double tw_convection_coefficient(const ModelParams& P) {
    const double m = P.m();
    return (P.N() * (m - 1.0) + 2.0 * (m + 1.0)) / (m - 1.0);
}

double tw_reaction_coefficient(const ModelParams& P) {
    const double m = P.m();
    return 2.0 * m * (P.N() * (m - 1.0) + 2.0) / ((m - 1.0) * (m - 1.0));
}

double TravelingWave::value(double z) const {
    if (z >= z_edge) return 0.0;
    const double gamma = 2.0 / (params.m() - 1.0);
    return std::exp(-gamma * z) * profile.value(std::exp(z));
}

TravelingWave to_traveling_wave(const EternalSolution& sol, int points) {
    const Profile& pr = sol.profile;
    if (!pr.xi0) throw std::domain_error("traveling wave needs a profile with an interface");
    if (points < 2) throw std::domain_error("traveling wave grid needs two or more points");
    TravelingWave tw{pr.params,
                     sol.beta,
                     tw_convection_coefficient(pr.params),
                     tw_reaction_coefficient(pr.params),
                     std::log(*pr.xi0),
                     {},
                     {},
                     pr};
    const double z_lo = std::log(pr.seed_xi);
    tw.z_grid.resize(points);
    tw.F.resize(points);
    for (int k = 0; k < points; ++k) {
        const double z = k + 1 == points ? tw.z_edge : z_lo + (tw.z_edge - z_lo) * k / (points - 1);
        tw.z_grid[k] = z;
        tw.F[k] = tw.value(z);
    }
    return tw;
}

TwResidual tw_residual_terms(const TravelingWave& tw, double z, double h, double speed) {
    if (!(h > 0.0)) throw std::domain_error("tw_residual needs h > 0");
    const double m = tw.params.m();
    const double Fp = tw.value(z + h);
    const double F0 = tw.value(z);
    const double Fm = tw.value(z - h);
    const double Gp = std::pow(Fp, m);
    const double G0 = std::pow(F0, m);
    const double Gm = std::pow(Fm, m);
    const double terms[] = {
        speed * (Fp - Fm) / (2.0 * h),
        (Gp - 2.0 * G0 + Gm) / (h * h),
        tw.convection * (Gp - Gm) / (2.0 * h),
        tw.reaction * G0,
        std::pow(F0, tw.params.p()),
    };
    TwResidual out{0.0, 0.0};
    for (double term : terms) {
        out.residual += term;
        out.scale = std::max(out.scale, std::abs(term));
    }
    return out;
}

double tw_residual(const TravelingWave& tw, double z, double h) {
    const TwResidual r = tw_residual_terms(tw, z, h, tw.c);
    return r.scale > 0.0 ? std::abs(r.residual) / r.scale : 0.0;
}

}  // namespace eternal
