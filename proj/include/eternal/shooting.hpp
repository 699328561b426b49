#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eternal/core.hpp"
#include "eternal/integrator.hpp"

namespace eternal {

struct GridEntry {
    double K;
    EndTag tag;
    double final_slope;
};

struct ClassificationReport {
    ModelParams params;
    Regime regime;
    std::vector<GridEntry> K_grid;  // sorted by K
    std::optional<double> K_star;
    std::optional<std::pair<double, double>> K_star_bracket;
    std::optional<double> alpha_star;
    // Critical regime only: (m-1)^2/4 and the relative gap to K_star.
    std::optional<double> K_star_exact;
    std::optional<double> K_star_rel_error;
    int probes = 0;
    int unresolved = 0;
    // Subcritical sweep: every resolved tag is ToQ3.
    std::optional<bool> all_to_q3;
};

/// Launches the P0-orbit for this K and reports how it ends.
OrbitEnd classify(const ModelParams& params, double K, const IntegratorOptions& opts);

/// classify over a list of K values, evaluated concurrently; output keeps input order.
std::vector<GridEntry> classify_grid(const ModelParams& params, const std::vector<double>& Ks,
                                     const IntegratorOptions& opts);

/// Brackets the ToQ1/ToQ3 transition and bisects until (K_hi - K_lo) < tol_K K_lo.
/// Without `bracket` the search starts at K = 1 and moves by decades within [1e-6, 1e6].
ClassificationReport find_k_star(const ModelParams& params, double tol_K, const IntegratorOptions& opts,
                                 std::optional<std::pair<double, double>> bracket = std::nullopt);

/// Classifies every K of the grid for m + p < 2.
ClassificationReport nonexistence_sweep(const ModelParams& params, const std::vector<double>& Ks,
                                        const IntegratorOptions& opts);

/// Logarithmically spaced grid with `count` points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace eternal
