#pragma once

#include <cstdint>

#include "trigibbs/graph.hpp"
#include "trigibbs/params.hpp"
#include "trigibbs/ratefn.hpp"

namespace trigibbs::estimators {

// Monte Carlo edge/triangle densities next to their asymptotic predictions,
// all derived from the same (c, zeta) through the rate-function module.
struct DensityReport {
    GibbsParams params;
    int chains = 0;
    std::int64_t sweeps = 0;
    double mean_edges = 0.0;
    double stderr_edges = 0.0;
    double mean_triangles = 0.0;
    double stderr_triangles = 0.0;
    double mean_degree = 0.0;          // 2 mean_edges / n
    double predicted_edges = 0.0;      // (1/2) sqrt(W(2 zeta c^2)/(2 zeta)) n^{3/2}
    double predicted_triangles = 0.0;  // ((1-zeta)/6) (W(2 zeta c^2)/(2 zeta))^{3/2} n^{3/2}
    double predicted_degree_coeff = 0.0;  // b: mean degree ~ b sqrt(n)
    ratefn::Regime regime = ratefn::Regime::inside_window;
    bool small_n = false;  // n < 50: predictions carry large (1+o(1)) slack
};

// Pools `chains` independent chains (batch-means errors combined in
// quadrature). Predictions use eta recovered from zeta via eta_of_zeta.
DensityReport estimate_densities(const GibbsParams& params, int chains, std::int64_t sweeps,
                                 std::uint64_t seed);

// Empirical residual of the degree fixed point 2 zeta b^2 = W(2 zeta c^2)
// with b = mean_degree/sqrt(n), relative to W. Requires zeta >= 1e-6.
double fixed_point_residual(const DensityReport& report, const GibbsParams& params);

struct IntegrationResult {
    double log_z = 0.0;
    double quadrature_error = 0.0;  // grid-halving discrepancy + analytic-head slack
    double mc_error = 0.0;          // propagated batch-means errors, one sigma
    double error_budget = 0.0;      // quadrature_error + 3 mc_error
    int grid = 0;
};

// log Z(lambda_max, zeta) with lambda_max = c_target/sqrt(n), by trapezoid
// integration of E_theta|G|/theta over a geometric theta-grid (ratio 2) with
// the analytic segment C(n,2) log(1+theta_0) below the smallest point.
// zeta = 0 short-circuits to the closed form C(n,2) log(1+lambda_max).
// grid >= 8. Internal measurement length: 200 sweeps per grid point per chain.
IntegrationResult log_z_by_integration(int n, double c_target, double zeta, int grid,
                                       int chains, std::uint64_t seed);

struct StructureReport {
    double maxcut = 0.0;        // mean max-cut fraction (local search lower bound)
    double cutnorm_norm = 0.0;  // mean cut-norm deviation from density q, / (q n^2)
    double degree_spread = 0.0; // mean of max_degree - min_degree
    double spread_bound = 0.0;  // 4 sqrt(n lambda) log n, informational at small n
    int states = 0;
};

// Observables of a single graph against reference density q.
StructureReport structure_of_graph(const Graph& g, double q, std::uint64_t seed);

// Averages structure_of_graph over sampled chain states (up to 10 per chain).
// q comes from conditional_edge_density_q at the recovered eta; outside the
// validity window it falls back to q = p.
StructureReport structure_report(const GibbsParams& params, int chains, std::int64_t sweeps,
                                 std::uint64_t seed);

struct TailEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::int64_t trials = 0;
};

// Fraction of G(n,p) draws with triangle count <= eta C(n,3) p^3, binomial
// stderr. Bit-parallel counting; SizeError for n > 64.
TailEstimate lower_tail_mc(int n, double p, double eta, std::int64_t trials,
                           std::uint64_t seed);

// Mean triangle count of uniform G(n,m) over `samples` draws.
double gnm_triangle_mean(int n, std::int64_t m, int samples, std::uint64_t seed);

}  // namespace trigibbs::estimators
