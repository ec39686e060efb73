#pragma once

#include <array>
#include <optional>
#include <vector>

namespace gridrisk {

// Value triples for a finite solution list: true first objective f, true
// second objective g, and the surrogate second objective g_hat.
struct Prop1Input {
    std::vector<double> f;
    std::vector<double> g;
    std::vector<double> g_hat;
};

enum class HFamily { affine, isotonic };

struct Prop1Report {
    double epsilon = 0.0;  // sup |g_hat - h(g)| used in the checks
    double L = 0.0;        // minimum slope of h used in the checks
    bool applicable = false;  // false when the fitted relationship has L <= 0
    double r2 = 0.0;          // fit quality of h on the scatter
    std::vector<int> pareto_true;    // Pareto set of (f, g)
    std::vector<int> pareto_approx;  // Pareto set of (f, g_hat)
    std::vector<int> violations_a;   // members of pareto_approx failing 2e/L-optimality
    std::vector<int> violations_b;   // members of pareto_true without a near-dominator
    std::vector<std::array<double, 3>> scatter;  // (g, g_hat, fitted h(g)) sorted by g
};

// Fits a monotone h within the family (piecewise-linear interpolant of the
// isotonic regression, or an affine map), takes epsilon as the sup residual
// and L as the minimum slope, enumerates both Pareto sets exactly, and checks
// that every approximate Pareto point is 2 epsilon / L Pareto optimal and
// that every true Pareto point is nearly dominated by an approximate one.
// A known (epsilon, L) certificate can replace the fitted one.
Prop1Report check_prop1(const Prop1Input& input, HFamily family,
                        std::optional<std::pair<double, double>> certificate = {});

}  // namespace gridrisk
