#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "eternal/core.hpp"

namespace eternal {

/// x^q for x >= 0, with 0^q = 0 (q > 0).
double frac_pow(double x, double q);

/// State of the autonomous system: X = (alpha/2m) xi^2 f^{1-m}, Y = xi f'/f.
struct PhasePoint {
    double X;
    double Y;
};

struct FieldValue {
    double dX;
    double dY;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

enum class PointLabel { P0, P1, Q1, Q2, Q3, Q4 };
enum class PointKind { Saddle, StableNode, UnstableNode, SaddleNode };

std::string_view to_string(PointLabel label);
std::string_view to_string(PointKind kind);

/// Coordinates at infinity. `slope` is the ray Y/X along which orbits approach
/// (+/- infinity for Q2/Q3); `z` = 1/X is zero on the equator.
struct ChartPoint {
    double slope;
    double z;
};

struct CriticalPoint {
    PointLabel label;
    PointKind kind;
    bool at_infinity;
    PhasePoint location;  // meaningful when !at_infinity
    ChartPoint chart;     // meaningful when at_infinity
    Vector2 eigenvalues;
    std::optional<Vector2> launch_direction;
};

/// Zero set of dY/deta = 0 at a given X, solved for Y.
struct IsoclineBranches {
    double X;
    double delta;
    std::optional<double> Y1;
    std::optional<double> Y2;
};

/// dX = X(2 - (m-1)Y),
/// dY = -mY^2 - (N-2)Y + 2X - (m-1)XY - K X^{(m-p)/(m-1)}.
FieldValue vector_field(const PhasePoint& P, const ModelParams& params, double K);

std::vector<CriticalPoint> finite_critical_points(const ModelParams& params);
std::vector<CriticalPoint> infinity_critical_points(const ModelParams& params, double K);

IsoclineBranches isocline(double X, const ModelParams& params, double K);

/// Positive root X0 = (2/K)^{(m-1)/(1-p)} of Y1(X) = 0.
double isocline_zero(const ModelParams& params, double K);

/// Central-difference Jacobian of the vector field. On the invariant axis X = 0
/// the X-derivative uses a second-order forward stencil; 0 < X < h is rejected.
Matrix2 numerical_jacobian(const PhasePoint& P, const ModelParams& params, double K, double h);

/// Flow near the equator in the coordinates y = Y/X, w = z^{(m+p-2)/(m-1)},
/// z = 1/X, after rescaling time by X. Only defined for m + p > 2.
Vector2 chart_field_yw(double y, double w, const ModelParams& params, double K);

/// Jacobian of chart_field_yw, forward stencil in w at w = 0.
Matrix2 numerical_jacobian_yw(double y, double w, const ModelParams& params, double K, double h);

/// Eigenvalues of a real 2x2 matrix, ordered by decreasing real part.
std::array<std::complex<double>, 2> eigenvalues(const Matrix2& A);

}  // namespace eternal
