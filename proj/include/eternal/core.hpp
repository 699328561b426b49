#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eternal {

/// Raised when an integration or bracketing procedure cannot produce a result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative tolerance used to recognise m + p == 2.
inline constexpr double kRegimeTolerance = 1e-12;

enum class Regime { Supercritical, Critical, Subcritical };

std::string_view to_string(Regime regime);

/// sigma = 2(1 - p)/(m - 1). Throws std::domain_error outside m > 1, 0 < p < 1.
double sigma_critical(double m, double p);

/// Exponents (m, p, N) of u_t = Δu^m + |x|^σ u^p with the weight fixed at the
/// critical value. Immutable once constructed.
class ModelParams {
public:
    ModelParams(double m, double p, int N);

    double m() const { return m_; }
    double p() const { return p_; }
    int N() const { return N_; }
    double sigma() const { return sigma_; }
    Regime regime() const { return regime_; }

    /// (m - p)/(m - 1), the power of X in the reaction term. Exactly 2 in the
    /// critical regime.
    double reaction_power() const { return reaction_power_; }

    /// (m + p - 2)/(m - 1), the power of z = 1/X in the chart at infinity.
    /// Exactly 0 in the critical regime.
    double chart_power() const { return chart_power_; }

private:
    double m_;
    double p_;
    int N_;
    double sigma_;
    Regime regime_;
    double reaction_power_;
    double chart_power_;
};

Regime regime(const ModelParams& params);

/// The shooting parameter K together with the self-similar exponents it fixes:
///   K = (1/m) (2m/alpha)^{(m-p)/(m-1)},   alpha = 2 beta/(m-1).
struct ShootingParam {
    double K;
    double alpha;
    double beta;
};

ShootingParam alpha_beta_from_k(const ModelParams& params, double K);
ShootingParam shooting_param_from_alpha(const ModelParams& params, double alpha);
double k_from_alpha(const ModelParams& params, double alpha);

/// Explicit threshold exponent 4 sqrt(m)/(m - 1) of the m + p = 2 case.
double alpha_star_critical(double m);

/// (m - 1)^2/4, the critical-regime threshold for K.
double k_star_critical(double m);

}  // namespace eternal
