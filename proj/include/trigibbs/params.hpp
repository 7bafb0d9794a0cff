#pragma once

#include <cmath>

namespace trigibbs {

// Model parameters for the edge-activity / triangle-penalty measure on
// n-vertex graphs: weight(G) = lambda^{edges} * (1-zeta)^{triangles}.
// zeta = 0 is the unconditioned Bernoulli graph, zeta = 1 conditions on
// triangle-freeness.
struct GibbsParams {
    int n = 0;
    double lambda = 0.0;  // activity, >= 0
    double zeta = 0.0;    // penalty, in [0,1]

    double p() const { return lambda / (1.0 + lambda); }
    double c() const { return p() * std::sqrt(static_cast<double>(n)); }

    static GibbsParams from_scaled(int n, double c, double zeta) {
        double p = c / std::sqrt(static_cast<double>(n));
        return GibbsParams{n, p / (1.0 - p), zeta};
    }

    bool valid() const { return n > 0 && lambda >= 0.0 && zeta >= 0.0 && zeta <= 1.0; }
};

}  // namespace trigibbs
