#include "eternal/phaseplane.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eternal {

double frac_pow(double x, double q) {
    if (x == 0.0) return 0.0;
    return std::exp(q * std::log(x));
}

std::string_view to_string(PointLabel label) {
    switch (label) {
        case PointLabel::P0: return "P0";
        case PointLabel::P1: return "P1";
        case PointLabel::Q1: return "Q1";
        case PointLabel::Q2: return "Q2";
        case PointLabel::Q3: return "Q3";
        case PointLabel::Q4: return "Q4";
    }
    return "?";
}

std::string_view to_string(PointKind kind) {
    switch (kind) {
        case PointKind::Saddle: return "saddle";
        case PointKind::StableNode: return "stable_node";
        case PointKind::UnstableNode: return "unstable_node";
        case PointKind::SaddleNode: return "saddle_node";
    }
    return "?";
}

FieldValue vector_field(const PhasePoint& P, const ModelParams& params, double K) {
    if (P.X < 0.0) throw std::domain_error("vector_field requires X >= 0");
    const double m = params.m();
    const double N = params.N();
    const double X = P.X;
    const double Y = P.Y;
    const double dX = X * (2.0 - (m - 1.0) * Y);
    const double dY = -m * Y * Y - (N - 2.0) * Y + 2.0 * X - (m - 1.0) * X * Y -
                      K * frac_pow(X, params.reaction_power());
    return {dX, dY};
}

namespace {

Vector2 normalized(double a, double b) {
    const double n = std::hypot(a, b);
    return {a / n, b / n};
}

}  // namespace

std::vector<CriticalPoint> finite_critical_points(const ModelParams& params) {
    const double m = params.m();
    const int N = params.N();
    std::vector<CriticalPoint> out;
    if (N >= 3) {
        out.push_back({PointLabel::P0, PointKind::Saddle, false, {0.0, 0.0}, {}, {2.0, 2.0 - N},
                       normalized(1.0, 2.0 / N)});
        out.push_back({PointLabel::P1, PointKind::UnstableNode, false,
                       {0.0, -(N - 2.0) / m}, {}, {(m * N - N + 2.0) / m, N - 2.0}, std::nullopt});
    } else if (N == 2) {
        out.push_back({PointLabel::P0, PointKind::SaddleNode, false, {0.0, 0.0}, {}, {2.0, 0.0},
                       normalized(1.0, 1.0)});
    } else {
        out.push_back({PointLabel::P0, PointKind::UnstableNode, false, {0.0, 0.0}, {}, {2.0, 1.0},
                       normalized(1.0, 2.0)});
        out.push_back({PointLabel::P1, PointKind::Saddle, false, {0.0, 1.0 / m}, {},
                       {(m + 1.0) / m, -1.0}, std::nullopt});
    }
    return out;
}

std::vector<CriticalPoint> infinity_critical_points(const ModelParams& params, double K) {
    if (!(K > 0.0)) throw std::domain_error("infinity_critical_points requires K > 0");
    const double m = params.m();
    const double p = params.p();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<CriticalPoint> out;

    auto at_infinity = [](PointLabel label, PointKind kind, double slope, Vector2 eig) {
        return CriticalPoint{label, kind, true, {0.0, 0.0}, {slope, 0.0}, eig, std::nullopt};
    };

    switch (params.regime()) {
        case Regime::Supercritical:
            out.push_back(at_infinity(PointLabel::Q1, PointKind::StableNode, 0.0,
                                      {0.0, -(m - 1.0)}));
            out.push_back(at_infinity(PointLabel::Q2, PointKind::UnstableNode, inf, {m, 1.0}));
            out.push_back(at_infinity(PointLabel::Q3, PointKind::StableNode, -inf, {-1.0, -m}));
            out.push_back(at_infinity(PointLabel::Q4, PointKind::Saddle, -(m - 1.0),
                                      {m - 1.0, -(m - 1.0) * (m + p - 2.0)}));
            break;
        case Regime::Critical: {
            const double disc = (m - 1.0) * (m - 1.0) - 4.0 * K;
            if (disc >= 0.0) {
                const double root = std::sqrt(disc);
                const double y1 = 0.5 * (-(m - 1.0) + root);
                const double y2 = 0.5 * (-(m - 1.0) - root);
                if (disc > 0.0) {
                    out.push_back(at_infinity(PointLabel::Q1, PointKind::StableNode, y1,
                                              {(m - 1.0) * y1, -root}));
                    out.push_back(at_infinity(PointLabel::Q4, PointKind::Saddle, y2,
                                              {root, (m - 1.0) * y2}));
                } else {
                    out.push_back(at_infinity(PointLabel::Q1, PointKind::SaddleNode, y1,
                                              {0.0, (m - 1.0) * y1}));
                    out.push_back(at_infinity(PointLabel::Q4, PointKind::SaddleNode, y2,
                                              {0.0, (m - 1.0) * y2}));
                }
            }
            out.push_back(at_infinity(PointLabel::Q2, PointKind::UnstableNode, inf, {m, 1.0}));
            out.push_back(at_infinity(PointLabel::Q3, PointKind::StableNode, -inf, {-1.0, -m}));
            break;
        }
        case Regime::Subcritical:
            out.push_back(at_infinity(PointLabel::Q2, PointKind::UnstableNode, inf, {m, 1.0}));
            out.push_back(at_infinity(PointLabel::Q3, PointKind::StableNode, -inf, {-1.0, -m}));
            break;
    }
    return out;
}

IsoclineBranches isocline(double X, const ModelParams& params, double K) {
    const double m = params.m();
    const double N = params.N();
    const double delta = (m - 1.0) * (m - 1.0) * X * X +
                         2.0 * (m * N + 2.0 * m - N + 2.0) * X + (N - 2.0) * (N - 2.0) -
                         4.0 * K * m * frac_pow(X, params.reaction_power());
    IsoclineBranches out{X, delta, std::nullopt, std::nullopt};
    if (delta >= 0.0) {
        const double b = -(N - 2.0) - (m - 1.0) * X;
        const double root = std::sqrt(delta);
        out.Y1 = (b + root) / (2.0 * m);
        out.Y2 = (b - root) / (2.0 * m);
    }
    return out;
}

double isocline_zero(const ModelParams& params, double K) {
    if (!(K > 0.0)) throw std::domain_error("isocline_zero requires K > 0");
    return std::pow(2.0 / K, (params.m() - 1.0) / (1.0 - params.p()));
}

namespace {

// Second-order derivative along one coordinate: central where possible,
// forward on the boundary of the half-plane.
template <class F>
Vector2 partial(F&& field, double x, double h, bool forward) {
    if (forward) {
        const Vector2 f0 = field(x);
        const Vector2 f1 = field(x + h);
        const Vector2 f2 = field(x + 2.0 * h);
        return {(-3.0 * f0[0] + 4.0 * f1[0] - f2[0]) / (2.0 * h),
                (-3.0 * f0[1] + 4.0 * f1[1] - f2[1]) / (2.0 * h)};
    }
    const Vector2 fp = field(x + h);
    const Vector2 fm = field(x - h);
    return {(fp[0] - fm[0]) / (2.0 * h), (fp[1] - fm[1]) / (2.0 * h)};
}

bool boundary_stencil(double x, double h, const char* what) {
    if (!(h > 0.0)) throw std::domain_error("finite-difference step must be positive");
    if (x == 0.0) return true;
    if (x - h < 0.0) {
        throw std::domain_error(std::string("finite-difference step crosses the boundary ") + what +
                                " = 0");
    }
    return false;
}

}  // namespace

Matrix2 numerical_jacobian(const PhasePoint& P, const ModelParams& params, double K, double h) {
    const bool forward = boundary_stencil(P.X, h, "X");
    auto in_x = [&](double x) {
        const FieldValue v = vector_field({x, P.Y}, params, K);
        return Vector2{v.dX, v.dY};
    };
    auto in_y = [&](double y) {
        const FieldValue v = vector_field({P.X, y}, params, K);
        return Vector2{v.dX, v.dY};
    };
    const Vector2 dx = partial(in_x, P.X, h, forward);
    const Vector2 dy = partial(in_y, P.Y, h, false);
    return {{{dx[0], dy[0]}, {dx[1], dy[1]}}};
}

Vector2 chart_field_yw(double y, double w, const ModelParams& params, double K) {
    if (params.regime() != Regime::Supercritical) {
        throw std::domain_error("the (y, w) chart is only defined for m + p > 2");
    }
    if (w < 0.0) throw std::domain_error("chart_field_yw requires w >= 0");
    const double m = params.m();
    const double N = params.N();
    const double s = params.chart_power();
    const double lift = frac_pow(w, 1.0 / s);  // z = w^{1/s}
    const double dy = 2.0 * lift - (m - 1.0) * y - N * y * lift - y * y - K * w;
    const double dw = (m - 1.0) * s * y * w - 2.0 * s * w * lift;
    return {dy, dw};
}

Matrix2 numerical_jacobian_yw(double y, double w, const ModelParams& params, double K, double h) {
    const bool forward = boundary_stencil(w, h, "w");
    auto in_y = [&](double v) { return chart_field_yw(v, w, params, K); };
    auto in_w = [&](double v) { return chart_field_yw(y, v, params, K); };
    const Vector2 dy = partial(in_y, y, h, false);
    const Vector2 dw = partial(in_w, w, h, forward);
    return {{{dy[0], dw[0]}, {dy[1], dw[1]}}};
}

std::array<std::complex<double>, 2> eigenvalues(const Matrix2& A) {
    const double tr = A[0][0] + A[1][1];
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    const double half = 0.5 * tr;
    const std::complex<double> root = std::sqrt(std::complex<double>(half * half - det, 0.0));
    std::complex<double> l1 = half + root;
    std::complex<double> l2 = half - root;
    // Avoid cancellation in the smaller root.
    if (std::abs(l1) > 0.0 && std::abs(l2) < 1e-3 * std::abs(l1)) l2 = det / l1;
    if (l2.real() > l1.real()) std::swap(l1, l2);
    return {l1, l2};
}

}  // namespace eternal
