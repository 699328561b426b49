#pragma once

#include <string_view>
#include <vector>

#include "eternal/profile.hpp"

namespace eternal {

/// u(r, t) = e^{alpha t} f(r e^{-beta t}).
struct EternalSolution {
    Profile profile;
    double alpha;
    double beta;
};

EternalSolution make_solution(Profile profile);

double evaluate_u(const EternalSolution& sol, double r, double t);

/// xi0 e^{beta t}; throws if the profile has no interface.
double support_radius(const EternalSolution& sol, double t);

/// u_t - (u^m)_rr - (N-1)/r (u^m)_r - r^sigma u^p with centered differences of
/// step h in r and h / max(1, beta r, alpha) in t. Points with r < h use the
/// even extension u(-r) = u(r); at r = 0 the first-order term is replaced by
/// its limit (N-1)(u^m)_rr.
double pde_residual(const EternalSolution& sol, double r, double t, double h);

/// omega_{N-1} times the integral of u r^{N-1} over the support.
double mass(const EternalSolution& sol, double t);

/// Least-squares slope of ln M(t) over the given times.
double mass_growth_rate(const EternalSolution& sol, const std::vector<double>& t_samples);

/// Surface measure of the unit sphere in R^N; 2 for N = 1.
double sphere_measure(int N);

inline constexpr std::string_view kTravelingWaveConvention =
    "w(y,tau) = r^{-2/(m-1)} u(r,t) with y = ln r, tau = t; w = F(y - c tau), c = beta; "
    "residual = c F' + (F^m)'' + A (F^m)' + B F^m + F^p";

/// F(z) = e^{-2z/(m-1)} f(e^z), moving to the right with speed c.
struct TravelingWave {
    ModelParams params;
    double c;
    double convection;  // A = (N(m-1) + 2(m+1))/(m-1)
    double reaction;    // B = 2m(N(m-1) + 2)/(m-1)^2
    double z_edge;      // ln xi0
    std::vector<double> z_grid;
    std::vector<double> F;
    Profile profile;

    double value(double z) const;
};

double tw_convection_coefficient(const ModelParams& params);
double tw_reaction_coefficient(const ModelParams& params);

/// Samples F on [ln(seed), ln xi0] with `points` equally spaced values of z.
TravelingWave to_traveling_wave(const EternalSolution& sol, int points = 2001);

struct TwResidual {
    double residual;  // signed
    double scale;     // largest absolute term
};

/// Second-order centered differences of step h; `speed` replaces tw.c when given.
TwResidual tw_residual_terms(const TravelingWave& tw, double z, double h, double speed);

/// |residual| / scale at speed tw.c.
double tw_residual(const TravelingWave& tw, double z, double h);

}  // namespace eternal
