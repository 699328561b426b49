#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eternal/phaseplane.hpp"

using namespace eternal;

namespace {

const CriticalPoint& find(const std::vector<CriticalPoint>& pts, PointLabel label) {
    const auto it = std::find_if(pts.begin(), pts.end(), [&](const auto& c) { return c.label == label; });
    REQUIRE(it != pts.end());
    return *it;
}

bool has(const std::vector<CriticalPoint>& pts, PointLabel label) {
    return std::any_of(pts.begin(), pts.end(), [&](const auto& c) { return c.label == label; });
}

// Sorted real parts.
std::pair<double, double> real_parts(const Matrix2& J) {
    const auto ev = eigenvalues(J);
    const double a = ev[0].real();
    const double b = ev[1].real();
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

TEST_CASE("vector field at hand-computed points") {
    const ModelParams P(2.0, 0.5, 4);
    const FieldValue v = vector_field({1.0, 0.0}, P, 0.1);
    CHECK(v.dX == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(v.dY == doctest::Approx(1.9).epsilon(1e-15));

    const FieldValue w = vector_field({0.5, 0.3}, P, 0.7);
    // dY = -2(0.09) - 2(0.3) + 1 - 0.15 - 0.7 * 0.5^1.5
    CHECK(w.dX == doctest::Approx(0.5 * (2.0 - 0.3)).epsilon(1e-15));
    CHECK(w.dY == doctest::Approx(-0.18 - 0.6 + 1.0 - 0.15 - 0.7 * std::pow(0.5, 1.5)).epsilon(1e-14));

    for (int N : {1, 2, 3, 4, 7}) {
        const ModelParams Q(1.7, 0.4, N);
        for (const auto& cp : finite_critical_points(Q)) {
            const FieldValue z = vector_field(cp.location, Q, 3.0);
            CHECK(z.dX == 0.0);
            CHECK(z.dY == 0.0);
        }
    }
    CHECK_THROWS_AS(vector_field({-1.0, 0.0}, P, 0.1), std::domain_error);
}

TEST_CASE("finite critical points by dimension") {
    const ModelParams P4(2.0, 0.5, 4);
    const auto pts = finite_critical_points(P4);
    const auto& p0 = find(pts, PointLabel::P0);
    const auto& p1 = find(pts, PointLabel::P1);
    CHECK(p0.kind == PointKind::Saddle);
    CHECK(p1.kind == PointKind::UnstableNode);
    CHECK(p1.location.Y == doctest::Approx(-1.0));
    CHECK(p0.eigenvalues[0] == 2.0);
    CHECK(p0.eigenvalues[1] == -2.0);
    REQUIRE(p0.launch_direction);
    CHECK((*p0.launch_direction)[1] / (*p0.launch_direction)[0] == doctest::Approx(0.5));

    const auto two = finite_critical_points(ModelParams(2.0, 0.5, 2));
    CHECK(two.size() == 1);
    CHECK(two[0].kind == PointKind::SaddleNode);
    CHECK(two[0].eigenvalues[1] == 0.0);
    CHECK((*two[0].launch_direction)[1] / (*two[0].launch_direction)[0] == doctest::Approx(1.0));

    const auto one = finite_critical_points(ModelParams(2.0, 0.5, 1));
    CHECK(find(one, PointLabel::P0).kind == PointKind::UnstableNode);
    CHECK(find(one, PointLabel::P1).kind == PointKind::Saddle);
    CHECK(find(one, PointLabel::P1).location.Y == doctest::Approx(0.5));
    CHECK((*find(one, PointLabel::P0).launch_direction)[1] / (*find(one, PointLabel::P0).launch_direction)[0] ==
          doctest::Approx(2.0));
}

TEST_CASE("numerical Jacobian reproduces the eigenvalues at P0 and P1") {
    for (int N : {3, 4, 5}) {
        for (double m : {1.5, 2.0, 3.0}) {
            const ModelParams P(m, 0.5, N);
            const auto pts = finite_critical_points(P);
            const auto [a0, b0] = real_parts(numerical_jacobian(find(pts, PointLabel::P0).location, P, 0.3, 1e-5));
            CHECK(a0 == doctest::Approx(2.0 - N).epsilon(1e-6));
            CHECK(b0 == doctest::Approx(2.0).epsilon(1e-6));
            const Matrix2 J1 = numerical_jacobian(find(pts, PointLabel::P1).location, P, 0.3, 1e-5);
            const auto [a1, b1] = real_parts(J1);
            const double e1 = (m * N - N + 2.0) / m;
            CHECK(a1 == doctest::Approx(std::min(e1, N - 2.0)).epsilon(1e-6));
            CHECK(b1 == doctest::Approx(std::max(e1, N - 2.0)).epsilon(1e-6));
            CHECK(J1[0][1] == 0.0);
        }
    }
    const ModelParams P(2.0, 0.5, 4);
    CHECK_THROWS_AS(numerical_jacobian({1e-7, 0.0}, P, 0.1, 1e-5), std::domain_error);
}

TEST_CASE("critical points at infinity") {
    const ModelParams sup(2.0, 0.5, 4);
    const auto pts = infinity_critical_points(sup, 0.1);
    CHECK(find(pts, PointLabel::Q4).chart.slope == doctest::Approx(-1.0));
    CHECK(find(pts, PointLabel::Q1).chart.slope == 0.0);
    CHECK(std::isinf(find(pts, PointLabel::Q3).chart.slope));

    // Critical regime: y^2 + (m-1) y + K = 0.
    const ModelParams crit(1.5, 0.5, 3);
    const double K = 0.05;
    const double d = std::sqrt(0.25 - 4.0 * K);
    const auto cpts = infinity_critical_points(crit, K);
    CHECK(find(cpts, PointLabel::Q1).chart.slope == doctest::Approx(-0.13820).epsilon(1e-4));
    CHECK(find(cpts, PointLabel::Q4).chart.slope == doctest::Approx(-0.36180).epsilon(1e-4));
    CHECK(find(cpts, PointLabel::Q1).chart.slope == doctest::Approx(0.5 * (-0.5 + d)).epsilon(1e-14));

    CHECK_FALSE(has(infinity_critical_points(crit, 0.1), PointLabel::Q1));
    CHECK_FALSE(has(infinity_critical_points(crit, 0.1), PointLabel::Q4));
    const auto touch = infinity_critical_points(crit, 0.0625);
    CHECK(find(touch, PointLabel::Q1).chart.slope == doctest::Approx(-0.25));
    CHECK(find(touch, PointLabel::Q4).chart.slope == doctest::Approx(-0.25));
    CHECK(find(touch, PointLabel::Q1).kind == PointKind::SaddleNode);

    CHECK_FALSE(has(infinity_critical_points(ModelParams(1.2, 0.5, 3), 1.0), PointLabel::Q1));
}

TEST_CASE("Q4 linearisation in the chart") {
    for (auto [m, p] : {std::pair{2.0, 0.5}, std::pair{3.0, 0.3}, std::pair{1.6, 0.7}}) {
        const ModelParams P(m, p, 4);
        const double K = 0.8;
        const auto& q4 = find(infinity_critical_points(P, K), PointLabel::Q4);
        const auto [a, b] = real_parts(numerical_jacobian_yw(-(m - 1.0), 0.0, P, K, 1e-6));
        CHECK(a == doctest::Approx(std::min(q4.eigenvalues[0], q4.eigenvalues[1])).epsilon(1e-6));
        CHECK(b == doctest::Approx(std::max(q4.eigenvalues[0], q4.eigenvalues[1])).epsilon(1e-6));
        CHECK(b == doctest::Approx(m - 1.0).epsilon(1e-6));
    }
}

TEST_CASE("isocline branches") {
    const ModelParams P(2.0, 0.5, 4);
    const auto at0 = isocline(0.0, P, 0.1);
    CHECK(at0.delta == doctest::Approx(4.0));
    CHECK(*at0.Y1 == doctest::Approx(0.0));
    CHECK(*at0.Y2 == doctest::Approx(-1.0));

    // 1 + 2(8+4-4+2) + 4 - 4(0.1)(2)(1) = 24.2
    const auto at1 = isocline(1.0, P, 0.1);
    CHECK(at1.delta == doctest::Approx(24.2).epsilon(1e-14));

    CHECK(isocline_zero(P, 0.1) == doctest::Approx(400.0).epsilon(1e-14));
    CHECK(*isocline(400.0, P, 0.1).Y1 == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

    // Every branch value solves the quadratic; Y2 <= Y1.
    const double X0 = isocline_zero(P, 0.1);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 200; ++k) {
        const double X = 1e-4 * std::pow(10.0, k * 7.0 / 200.0);
        const auto br = isocline(X, P, 0.1);
        REQUIRE(br.delta > 0.0);
        for (double Y : {*br.Y1, *br.Y2}) {
            const double q = -2.0 * Y * Y - (2.0 + X) * Y + 2.0 * X - 0.1 * std::pow(X, 1.5);
            CHECK(std::abs(q) < 1e-10 * (1.0 + X * X));
        }
        CHECK(*br.Y2 <= *br.Y1);
        CHECK(*br.Y1 < 2.0);
        if (X < X0 * (1 - 1e-9)) CHECK(*br.Y1 > 0.0);
        if (X > X0 * (1 + 1e-9)) CHECK(*br.Y1 < 0.0);
        if (X > X0 && X < 100 * X0) {
            CHECK(*br.Y1 < prev);
            prev = *br.Y1;
        }
    }

    // Discriminant of the critical chart quadratic vanishes at K = (m-1)^2/4.
    const ModelParams crit(1.5, 0.5, 3);
    CHECK(infinity_critical_points(crit, 0.0625 * (1 - 1e-12)).size() == 4);
    CHECK(infinity_critical_points(crit, 0.0625 * (1 + 1e-12)).size() == 2);
}
