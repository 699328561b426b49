// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eternal/integrator.hpp"
#include "eternal/phaseplane.hpp"
#include "eternal/profile.hpp"
#include "eternal/shooting.hpp"
#include "eternal/solution.hpp"

using namespace eternal;

namespace {

// Pinned tolerances.
constexpr double kOrbitSeconds = 1.0;
constexpr double kCriticalRel = 1e-3;
constexpr double kCriticalSeconds = 10.0;
constexpr double kTypeTwoRel = 0.10;
constexpr double kTypeOneRel = 0.15;
constexpr double kSignChangeRel = 0.10;
constexpr double kEigenRel = 1e-6;
constexpr double kOdeBound = 1e-6;
constexpr double kPdeBound = 1e-4;
constexpr double kMassRel = 1e-3;
constexpr double kRescaleFactor = 10.0;
constexpr double kTwBound = 1e-3;
constexpr double kTwControlFactor = 10.0;

// Working precision for the shooting threshold behind criteria 4 and 9.
constexpr double kStarTol = 1e-10;
// Edge exclusion for interior residuals, as a fraction of xi0.
constexpr double kEdgeFraction = 0.01;
constexpr double kPdeStep = 1e-3;
constexpr double kTwStep = 1e-3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
    bool pass;
    std::string detail;
};

const ModelParams kBase(2.0, 0.5, 4);

double supercritical_k_star() {
    static const double K = *find_k_star(kBase, kStarTol, IntegratorOptions{}).K_star;
    return K;
}

Outcome base_tags(const IntegratorOptions& opts) {
    std::ostringstream os;
    bool ok = true;
    for (auto [K, want] : {std::pair{0.1, EndTag::ToQ1}, std::pair{8.0, EndTag::ToQ3}}) {
        const auto t0 = Clock::now();
        const EndTag got = classify(kBase, K, opts).tag;
        const double s = seconds_since(t0);
        ok = ok && got == want && s < kOrbitSeconds;
        os << "K=" << K << " -> " << to_string(got) << " (" << s * 1e3 << " ms) ";
    }
    return {ok, os.str()};
}

Outcome critical_constant(const IntegratorOptions& opts) {
    std::ostringstream os;
    bool ok = true;
    for (auto [m, p] : {std::pair{1.25, 0.75}, std::pair{1.5, 0.5}, std::pair{1.75, 0.25}}) {
        const ModelParams P(m, p, 3);
        const auto t0 = Clock::now();
        const auto report = find_k_star(P, 1e-6, opts);
        const double s = seconds_since(t0);
        const double eK = rel(*report.K_star, k_star_critical(m));
        const double eA = rel(*report.alpha_star, alpha_star_critical(m));
        ok = ok && eK < kCriticalRel && eA < kCriticalRel && s < kCriticalSeconds;
        os << "m=" << m << ": dK=" << eK << " dalpha=" << eA << " (" << s << " s) ";
    }
    return {ok, os.str()};
}

Outcome nonexistence(const IntegratorOptions& opts) {
    const auto grid = log_grid(1e-3, 1e3, 13);
    int total = 0, q3 = 0;
    for (auto [m, p] : {std::pair{1.2, 0.5}, std::pair{1.3, 0.6}}) {
        for (int N : {1, 3}) {
            for (const auto& e : nonexistence_sweep(ModelParams(m, p, N), grid, opts).K_grid) {
                ++total;
                q3 += e.tag == EndTag::ToQ3;
            }
        }
    }
    std::ostringstream os;
    os << q3 << "/" << total << " ToQ3";
    return {q3 == total, os.str()};
}

Outcome interface_types() {
    const double Ks = supercritical_k_star();
    struct Case {
        double K;
        double target;
        double tol;
        const char* name;
    };
    const Case cases[] = {{0.5 * Ks, 2.0, kTypeTwoRel, "0.5K*"},
                          {Ks, 1.0, kTypeOneRel, "K*"},
                          {4.0 * Ks, 0.5, kSignChangeRel, "4K*"}};
    std::ostringstream os;
    bool ok = true;
    for (const auto& c : cases) {
        const Profile pr = reconstruct(kBase, c.K);
        if (!pr.interface_fit) {
            ok = false;
            os << c.name << ": no fit ";
            continue;
        }
        const double e = pr.interface_fit->exponent;
        ok = ok && rel(e, c.target) < c.tol;
        os << c.name << ": exponent " << e << " (" << to_string(pr.interface_fit->type_label) << ") ";
    }
    return {ok, os.str()};
}

Outcome eigen_data() {
    double worst = 0.0;
    for (int N : {3, 4, 5}) {
        const ModelParams P(2.0, 0.5, N);
        const double m = P.m();
        const double K = 1.0;
        for (const auto& cp : finite_critical_points(P)) {
            const Matrix2 J = numerical_jacobian(cp.location, P, K, 1e-6);
            const auto ev = eigenvalues(J);
            double want_a = 0, want_b = 0;
            if (cp.label == PointLabel::P0) {
                want_a = 2.0;
                want_b = 2.0 - N;
            } else if (cp.label == PointLabel::P1) {
                want_a = (m * N - N + 2.0) / m;
                want_b = N - 2.0;
            } else {
                continue;
            }
            const double lo = std::min(ev[0].real(), ev[1].real());
            const double hi = std::max(ev[0].real(), ev[1].real());
            worst = std::max({worst, rel(lo, std::min(want_a, want_b)), rel(hi, std::max(want_a, want_b)),
                              std::abs(ev[0].imag()) + std::abs(ev[1].imag())});
        }
    }
    std::ostringstream os;
    os << "worst relative eigenvalue error " << worst;
    return {worst < kEigenRel, os.str()};
}

// Largest scaled ODE residual over nodes whose stencil stays 1% away from xi0.
double interior_ode_residual(const Profile& pr) {
    const double edge = (1.0 - kEdgeFraction) * (pr.xi0 ? *pr.xi0 : pr.xi.back());
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < pr.xi.size() && pr.xi[i + 1] < edge; ++i) {
        worst = std::max(worst, ode_residual(pr, i) / ode_residual_scale(pr, i));
    }
    return worst;
}

Outcome self_similar() {
    std::ostringstream os;
    bool ok = true;
    const double Ks = supercritical_k_star();

    double ode = 0.0;
    for (double K : {0.1, 0.5 * Ks, Ks}) ode = std::max(ode, interior_ode_residual(reconstruct(kBase, K)));
    for (auto [m, p] : {std::pair{1.5, 0.5}, std::pair{1.75, 0.25}}) {
        const ModelParams P(m, p, 3);
        ode = std::max(ode, interior_ode_residual(reconstruct(P, 0.5 * k_star_critical(m))));
    }
    ok = ok && ode < kOdeBound;
    os << "ode " << ode;

    const EternalSolution sol = make_solution(reconstruct(kBase, 0.1));
    std::mt19937 gen(20261016);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double pde = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double t = 0.1 * U(gen);
        const double R = support_radius(sol, t);
        const double r = U(gen) * ((1.0 - kEdgeFraction) * R - 5.0 * kPdeStep);
        pde = std::max(pde, std::abs(pde_residual(sol, r, t, kPdeStep)) / (sol.alpha * evaluate_u(sol, r, t)));
    }
    ok = ok && pde < kPdeBound;
    os << "; pde " << pde;

    double mass_err = 0.0;
    const std::vector<double> ts{0.0, 0.05, 0.1, 0.15, 0.2};
    const ModelParams crit(1.5, 0.5, 3);
    for (const EternalSolution& s : {sol, make_solution(reconstruct(crit, k_star_critical(1.5)))}) {
        const double want = s.alpha + s.profile.params.N() * s.beta;
        mass_err = std::max(mass_err, rel(mass_growth_rate(s, ts), want));
    }
    ok = ok && mass_err < kMassRel;
    os << "; mass rate " << mass_err;
    return {ok, os.str()};
}

Outcome rescaling() {
    const Profile pr = reconstruct(kBase, 0.5 * supercritical_k_star());
    std::ostringstream os;
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 10.0}) {
        const double r = interior_ode_residual(rescale(pr, lambda));
        worst = std::max(worst, r);
        os << "lambda=" << lambda << ": " << r << " ";
    }
    return {worst < kRescaleFactor * kOdeBound, os.str()};
}

Outcome monotonicity() {
    struct Case {
        ModelParams P;
        std::pair<double, double> pairs[3];
    };
    const double Ks = supercritical_k_star();
    const double Kc = k_star_critical(1.5);
    const Case cases[] = {
        {kBase, {{0.1, 0.5}, {0.5 * Ks, Ks}, {Ks, 4.0 * Ks}}},
        {ModelParams(1.5, 0.5, 3), {{0.1 * Kc, 0.5 * Kc}, {0.5 * Kc, 0.9 * Kc}, {0.9 * Kc, 2.0 * Kc}}},
        {ModelParams(1.2, 0.5, 3), {{0.01, 0.1}, {0.1, 1.0}, {1.0, 10.0}}},
    };
    std::ostringstream os;
    int passed = 0, total = 0;
    for (const auto& c : cases) {
        int here = 0;
        for (const auto& [K1, K2] : c.pairs) {
            ++total;
            if (orbit_monotonicity_check(c.P, K1, K2, IntegratorOptions{})) ++here;
        }
        passed += here;
        os << to_string(c.P.regime()) << " " << here << "/3 ";
    }
    return {passed == total, os.str()};
}

Outcome traveling_waves() {
    const double Ks = supercritical_k_star();
    std::ostringstream os;
    bool ok = true;
    for (double K : {0.5 * Ks, Ks}) {
        const TravelingWave tw = to_traveling_wave(make_solution(reconstruct(kBase, K)));
        double worst = 0.0;
        double control = 0.0;
        for (double z : tw.z_grid) {
            if (z - tw.z_grid.front() <= 5 * kTwStep || tw.z_edge - z <= 5 * kTwStep) continue;
            worst = std::max(worst, tw_residual(tw, z, kTwStep));
            const TwResidual wrong = tw_residual_terms(tw, z, kTwStep, tw.c + 0.5);
            control = std::max(control, std::abs(wrong.residual) / wrong.scale);
        }
        bool zero_right = true;
        for (double dz : {0.0, 1e-9, 1e-3, 0.1, 1.0, 10.0}) zero_right = zero_right && tw.value(tw.z_edge + dz) == 0.0;
        const bool positive_left = tw.value(tw.z_edge - 1e-3) > 0.0;
        ok = ok && worst < kTwBound && control >= kTwControlFactor * kTwBound && zero_right && positive_left;
        os << "c=" << tw.c << ": residual " << worst << ", wrong speed " << control
           << (zero_right ? ", zero right of edge " : ", NONZERO right of edge ");
    }
    return {ok, os.str()};
}

Outcome tag_stability() {
    std::vector<IntegratorOptions> variants;
    IntegratorOptions halved;
    halved.rel_tol *= 0.5;
    variants.push_back(halved);
    for (double delta : {1e-5, 1e-7}) {
        IntegratorOptions o;
        o.launch_offset = delta;
        variants.push_back(o);
    }
    std::ostringstream os;
    bool ok = true;
    int k = 0;
    const char* names[] = {"rel_tol/2", "delta=1e-5", "delta=1e-7"};
    for (const auto& o : variants) {
        const bool a = base_tags(o).pass;
        const bool b = critical_constant(o).pass;
        const bool c = nonexistence(o).pass;
        ok = ok && a && b && c;
        os << names[k++] << ": " << (a ? "1" : "x") << (b ? "2" : "x") << (c ? "3" : "x") << " ";
    }
    return {ok, os.str()};
}

}  // namespace

int main() {
    const IntegratorOptions defaults;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"example tags", [&] { return base_tags(defaults); }},
        {"critical-regime constant", [&] { return critical_constant(defaults); }},
        {"non-existence sweep", [&] { return nonexistence(defaults); }},
        {"interface-type fit", interface_types},
        {"eigen-data at P0 and P1", eigen_data},
        {"self-similar consistency", self_similar},
        {"rescaling symmetry", rescaling},
        {"monotonicity in K", monotonicity},
        {"traveling waves", traveling_waves},
        {"tag stability", tag_stability},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out{false, ""};
        const auto t0 = Clock::now();
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failures += !out.pass;
        std::printf("criterion %2zu %s %s: %s [%.2f s]\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first,
                    out.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
