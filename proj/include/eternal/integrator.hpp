#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eternal/core.hpp"
#include "eternal/phaseplane.hpp"

namespace eternal {

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_max = 0.5;        // in eta
    double eta_max = 1e3;
    double X_big = 1e4;        // escape radius; beyond it the orbit is followed in the chart
    double ratio_window = 0.15;
    double launch_offset = 1e-6;
    double Y_blow = 1e8;       // |Y| beyond this with X < X_big counts as a blow-up
    double settle_tol = 1e-10; // |dy/dtau| below which a critical-regime slope is settled
    double tau_max = 1e7;      // chart time budget
    long max_steps = 2'000'000;

    /// Throws std::domain_error when a field is nonpositive or X_big < 1e3.
    void validate() const;
};

enum class EndTag { ToQ1, ToQ4, ToQ3, Unresolved };

std::string_view to_string(EndTag tag);

struct OrbitEnd {
    EndTag tag = EndTag::Unresolved;
    double final_slope = 0.0;  // Y/X at the terminal state
    std::string diagnostics;
};

struct OrbitSample {
    double eta;
    double X;
    double Y;
};

struct Orbit {
    std::vector<OrbitSample> samples;
    OrbitEnd termination;
    long steps = 0;
};

/// Start of the distinguished orbit leaving P0: X = delta and
/// Y = (2/N) delta - K(m-1)/(N(m-1) + 2(1-p)) delta^{(m-p)/(m-1)}.
PhasePoint launch_from_p0(const ModelParams& params, double K, const IntegratorOptions& opts);

/// Integrates the autonomous system from `start` until its fate is decided.
/// Past X_big the orbit continues in y = Y/X, zeta = ln(1/X), time dtau = X deta.
Orbit integrate(const PhasePoint& start, const ModelParams& params, double K,
                const IntegratorOptions& opts);

/// True when the P0-orbit for K2 lies strictly below the one for K1 on a common
/// logarithmic X-grid. Requires 0 < K1 < K2.
bool orbit_monotonicity_check(const ModelParams& params, double K1, double K2,
                              const IntegratorOptions& opts);

}  // namespace eternal
