#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eternal/core.hpp"

namespace eternal {

enum class InterfaceType { TypeI, TypeII, SignChange, Indeterminate };

std::string_view to_string(InterfaceType type);

struct InterfaceFit {
    double xi0;
    double exponent;
    double constant;  // f ~ constant (xi0 - xi)^exponent
    InterfaceType type_label;
    double rms_residual;
    int samples_used;
};

struct ProfileOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-15;
    double f_floor = 1e-8;       // relative to f(0) = 1
    double seed_factor = 1e-4;   // epsilon in units of the natural length sqrt(2mN/(alpha(m-1)))
    double spacing = 0.02;       // largest step, same units
    long max_steps = 2'000'000;
    double xi_max = 1e4;         // natural lengths; guards orbits that never reach the floor
    double fit_window = 0.1;
};

/// Sampled solution of
///   (f^m)'' + (N-1)/xi (f^m)' - alpha f + beta xi f' + xi^sigma f^p = 0,  f(0) = 1, f'(0) = 0.
/// Node values carry f, f' and f'' so the profile can be evaluated with quintic
/// Hermite interpolation between nodes.
struct Profile {
    ModelParams params;
    double K;
    double alpha;
    double beta;
    std::vector<double> xi{};
    std::vector<double> f{};
    std::vector<double> fp{};
    std::vector<double> fpp{};
    // Series start handed to the integrator. It is not a node: the first node
    // after xi = 0 sits one spacing out so stencils stay balanced.
    double seed_xi = 0.0;
    double seed_f = 1.0;
    double seed_fp = 0.0;
    std::optional<double> xi0{};
    std::optional<InterfaceFit> interface_fit{};
    std::string stop_reason{};
    double scale = 1.0;  // f(0) after rescaling

    /// f at xi >= 0. Beyond the last node the fitted power law is used up to
    /// xi0 and zero afterwards.
    double value(double x) const;
    double derivative(double x) const;
};

/// f'' from the profile equation at a point with f > 0.
double profile_second_derivative(const ModelParams& params, double alpha, double beta, double xi,
                                 double f, double fp);

Profile reconstruct(const ModelParams& params, double K, const ProfileOptions& opts = {});

/// Absolute residual of the profile equation at node `index`, with (f^m)'' taken
/// from the compact Hermite difference on nodes index-1, index, index+1.
double ode_residual(const Profile& profile, std::size_t index);

/// Scale used to judge ode_residual: max(1, alpha f).
double ode_residual_scale(const Profile& profile, std::size_t index);

/// Regresses ln f on ln(xi0 - xi) over nodes with f < window f(0), choosing xi0
/// by golden-section search on the regression residual.
InterfaceFit fit_interface(const Profile& profile, double window, double fit_window = 0.1);

/// g(xi) = lambda^{-2/(m-1)} f(lambda xi), again a profile with the same alpha, beta.
Profile rescale(const Profile& profile, double lambda);

}  // namespace eternal
