#include "eternal/core.hpp"

#include <cmath>
#include <sstream>

namespace eternal {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Supercritical: return "supercritical";
        case Regime::Critical: return "critical";
        case Regime::Subcritical: return "subcritical";
    }
    return "unknown";
}

namespace {

void require_exponents(double m, double p) {
    if (!(m > 1.0) || !std::isfinite(m)) {
        std::ostringstream os;
        os << "diffusion exponent must satisfy m > 1, got m=" << m;
        throw std::domain_error(os.str());
    }
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "reaction exponent must satisfy 0 < p < 1, got p=" << p;
        throw std::domain_error(os.str());
    }
}

Regime classify_regime(double m, double p) {
    const double gap = m + p - 2.0;
    if (std::abs(gap) <= kRegimeTolerance * (m + p)) return Regime::Critical;
    return gap > 0.0 ? Regime::Supercritical : Regime::Subcritical;
}

}  // namespace

double sigma_critical(double m, double p) {
    require_exponents(m, p);
    return 2.0 * (1.0 - p) / (m - 1.0);
}

ModelParams::ModelParams(double m, double p, int N)
    : m_(m), p_(p), N_(N), sigma_(sigma_critical(m, p)), regime_(classify_regime(m, p)) {
    if (N < 1) {
        throw std::domain_error("dimension N must be a positive integer");
    }
    if (regime_ == Regime::Critical) {
        reaction_power_ = 2.0;
        chart_power_ = 0.0;
    } else {
        reaction_power_ = (m - p) / (m - 1.0);
        chart_power_ = (m + p - 2.0) / (m - 1.0);
    }
}

Regime regime(const ModelParams& params) { return params.regime(); }

ShootingParam alpha_beta_from_k(const ModelParams& params, double K) {
    if (!(K > 0.0) || !std::isfinite(K)) {
        throw std::domain_error("shooting parameter K must be positive");
    }
    const double m = params.m();
    const double alpha = 2.0 * m * std::pow(m * K, -1.0 / params.reaction_power());
    return {K, alpha, 0.5 * (m - 1.0) * alpha};
}

double k_from_alpha(const ModelParams& params, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::domain_error("self-similar exponent alpha must be positive");
    }
    const double m = params.m();
    return std::pow(2.0 * m / alpha, params.reaction_power()) / m;
}

ShootingParam shooting_param_from_alpha(const ModelParams& params, double alpha) {
    const double K = k_from_alpha(params, alpha);
    return {K, alpha, 0.5 * (params.m() - 1.0) * alpha};
}

double alpha_star_critical(double m) {
    if (!(m > 1.0)) throw std::domain_error("alpha_star_critical requires m > 1");
    return 4.0 * std::sqrt(m) / (m - 1.0);
}

double k_star_critical(double m) {
    if (!(m > 1.0)) throw std::domain_error("k_star_critical requires m > 1");
    return 0.25 * (m - 1.0) * (m - 1.0);
}

}  // namespace eternal
