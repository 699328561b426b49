#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eternal/integrator.hpp"

using namespace eternal;

TEST_CASE("launch from P0 follows the unstable direction") {
    IntegratorOptions o;
    o.launch_offset = 1e-6;
    const double d = 1e-6;

    const PhasePoint s4 = launch_from_p0(ModelParams(2.0, 0.5, 4), 0.1, o);
    CHECK(s4.X == d);
    // correction K(m-1)/(N(m-1)+2(1-p)) d^{1.5} = 0.1/5 * 1e-9
    CHECK(s4.Y == doctest::Approx(5e-7 - 0.02 * 1e-9).epsilon(1e-14));

    const PhasePoint s2 = launch_from_p0(ModelParams(2.0, 0.5, 2), 0.1, o);
    CHECK(s2.Y / s2.X == doctest::Approx(1.0).epsilon(1e-3));
    const PhasePoint s1 = launch_from_p0(ModelParams(2.0, 0.5, 1), 0.1, o);
    CHECK(s1.Y / s1.X == doctest::Approx(2.0).epsilon(1e-3));

    CHECK_THROWS_AS(launch_from_p0(ModelParams(2.0, 0.5, 4), 0.0, o), std::domain_error);
}

TEST_CASE("option validation") {
    IntegratorOptions o;
    CHECK_NOTHROW(o.validate());
    o.X_big = 10.0;
    CHECK_THROWS_AS(o.validate(), std::domain_error);
    o = {};
    o.rel_tol = -1.0;
    CHECK_THROWS_AS(o.validate(), std::domain_error);
}

namespace {

Orbit p0_orbit(const ModelParams& P, double K, const IntegratorOptions& o = {}) {
    return integrate(launch_from_p0(P, K, o), P, K, o);
}

}  // namespace

TEST_CASE("orbit fates") {
    const ModelParams base(2.0, 0.5, 4);
    CHECK(p0_orbit(base, 0.1).termination.tag == EndTag::ToQ1);
    CHECK(p0_orbit(base, 8.0).termination.tag == EndTag::ToQ3);

    // Critical regime: the slope settles on the root of y^2 + (m-1) y + K = 0 nearest zero.
    const ModelParams crit(1.5, 0.5, 3);
    const Orbit c = p0_orbit(crit, 0.05);
    CHECK(c.termination.tag == EndTag::ToQ1);
    CHECK(c.termination.final_slope == doctest::Approx(0.5 * (-0.5 + std::sqrt(0.05))).epsilon(1e-6));

    CHECK(p0_orbit(ModelParams(1.2, 0.5, 3), 1.0).termination.tag == EndTag::ToQ3);
}

TEST_CASE("X increases along the orbit below Y = 2/(m-1)") {
    const ModelParams P(2.0, 0.5, 4);
    const Orbit o = p0_orbit(P, 0.1);
    REQUIRE(o.samples.size() > 10);
    int checked = 0;
    for (std::size_t i = 1; i < o.samples.size(); ++i) {
        if (o.samples[i - 1].Y < 2.0 && o.samples[i].Y < 2.0) {
            CHECK(o.samples[i].X > o.samples[i - 1].X);
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("tolerance and launch robustness") {
    const ModelParams P(2.0, 0.5, 4);
    for (double K : {0.1, 8.0}) {
        const OrbitEnd base = p0_orbit(P, K).termination;
        IntegratorOptions half;
        half.rel_tol *= 0.5;
        const OrbitEnd h = p0_orbit(P, K, half).termination;
        CHECK(h.tag == base.tag);
        if (base.tag == EndTag::ToQ1) {
            CHECK(h.final_slope == doctest::Approx(base.final_slope).epsilon(1e-4));
        }
        for (double d : {1e-5, 1e-7}) {
            IntegratorOptions o;
            o.launch_offset = d;
            CHECK(p0_orbit(P, K, o).termination.tag == base.tag);
        }
    }
}

TEST_CASE("restarting from an interior sample reproduces the fate") {
    const ModelParams P(2.0, 0.5, 4);
    const IntegratorOptions opts;
    const Orbit o = p0_orbit(P, 0.1, opts);
    const OrbitSample mid =
        *std::find_if(o.samples.begin(), o.samples.end(), [](const OrbitSample& s) { return s.X > 1.0; });
    const Orbit again = integrate({mid.X, mid.Y}, P, 0.1, opts);
    CHECK(again.termination.tag == o.termination.tag);
    CHECK(again.termination.final_slope == doctest::Approx(o.termination.final_slope).epsilon(1e-6));

    // Samples of the restarted orbit lie on the original one. Y is interpolated
    // in X with cubic Hermite, slopes from the vector field.
    auto original_Y = [&](double X) {
        const auto it = std::lower_bound(o.samples.begin(), o.samples.end(), X,
                                         [](const OrbitSample& s, double x) { return s.X < x; });
        const OrbitSample& a = *(it - 1);
        const OrbitSample& b = *it;
        const FieldValue va = vector_field({a.X, a.Y}, P, 0.1);
        const FieldValue vb = vector_field({b.X, b.Y}, P, 0.1);
        const double h = b.X - a.X;
        const double t = (X - a.X) / h;
        return (2 * t * t * t - 3 * t * t + 1) * a.Y + (t * t * t - 2 * t * t + t) * h * va.dY / va.dX +
               (-2 * t * t * t + 3 * t * t) * b.Y + (t * t * t - t * t) * h * vb.dY / vb.dX;
    };
    int compared = 0;
    for (const auto& s : again.samples) {
        if (s.X <= mid.X || s.X > 1e3) continue;
        CHECK(std::abs(original_Y(s.X) - s.Y) < 1e-6 * (1.0 + std::abs(s.Y)));
        ++compared;
    }
    CHECK(compared > 10);
}

TEST_CASE("orbits are ordered in K") {
    const IntegratorOptions opts;
    CHECK(orbit_monotonicity_check(ModelParams(2.0, 0.5, 4), 0.1, 0.2, opts));
    CHECK(orbit_monotonicity_check(ModelParams(1.5, 0.5, 3), 0.01, 0.05, opts));
    CHECK_THROWS(orbit_monotonicity_check(ModelParams(2.0, 0.5, 4), 0.2, 0.2, opts));
}
