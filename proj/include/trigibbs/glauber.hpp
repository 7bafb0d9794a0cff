#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trigibbs/graph.hpp"
#include "trigibbs/params.hpp"
#include "trigibbs/rng.hpp"

namespace trigibbs::glauber {

// Default burn-in schedules, in single updates. The graph chain contracts at
// rate ~1/n^2 per step, the subset chain at ~1/n.
std::int64_t default_burnin_mu(int n);
std::int64_t default_burnin_nu(int n);

// Single-site dynamics on graphs: each step resamples one vertex pair,
// including the edge with probability w/(1+w), w = lambda (1-zeta)^codegree.
// Stationary distribution: lambda^{|G|} (1-zeta)^{triangles(G)}.
class MuChain {
  public:
    MuChain(const GibbsParams& params, CounterRng rng);
    MuChain(const GibbsParams& params, CounterRng rng, Graph init);

    void step();
    // Deterministic update from externally supplied randomness; used by the
    // coupling experiments so paired chains share (pair, uniform) draws.
    void step_with(int u, int v, double unif);

    const Graph& graph() const { return g_; }
    const GibbsParams& params() const { return params_; }
    std::int64_t step_index() const { return steps_; }

  private:
    GibbsParams params_;
    Graph g_;
    CounterRng rng_;
    std::vector<double> pw_;  // (1-zeta)^d lookup, d = 0..n-2
    std::int64_t steps_ = 0;
};

// Single-site dynamics on vertex subsets of a fixed host graph: each step
// resamples one vertex, occupying it with probability w/(1+w),
// w = lambda (1-zeta)^{occupied neighbors}. Stationary distribution:
// lambda^{|S|} (1-zeta)^{edges inside S}.
class NuChain {
  public:
    // The chain keeps a pointer to `host`, which must outlive it.
    NuChain(const Graph& host, double lambda, double zeta, CounterRng rng);
    NuChain(Graph&& host, double lambda, double zeta, CounterRng rng) = delete;

    void step();
    void step_with(int v, double unif);

    bool occupied(int v) const { return occ_[static_cast<std::size_t>(v)] != 0; }
    std::int64_t size() const { return size_; }
    std::int64_t internal_edges() const { return internal_; }
    const Graph& host() const { return *host_; }
    std::int64_t step_index() const { return steps_; }

  private:
    const Graph* host_;
    std::vector<char> occ_;
    std::int64_t size_ = 0;
    std::int64_t internal_ = 0;
    double lambda_;
    double zeta_;
    CounterRng rng_;
    std::vector<double> pw_;  // (1-zeta)^d lookup, d = 0..max_degree(host)
    std::int64_t steps_ = 0;
};

// Time series of observables measured every `thin` sweeps after burn-in.
// series[i] belongs to observables[i]. Deterministic given the seed fields.
struct RunRecord {
    GibbsParams params;
    std::uint64_t seed = 0;
    std::uint64_t chain_index = 0;
    std::int64_t burnin_steps = 0;
    std::int64_t steps_per_sweep = 0;
    std::int64_t sweeps = 0;
    std::int64_t thin = 1;
    std::vector<std::string> observables;
    std::vector<std::vector<double>> series;
};

// Graph-chain observables: edges, triangles, max_degree, min_degree,
// tagged_degree (vertex 0). Throws ConfigError on unknown names,
// std::domain_error on sweeps < 1 or thin < 1. burnin_steps < 0 selects the
// default schedule. init = nullptr starts from the empty graph.
RunRecord run_chain_mu(const GibbsParams& params, std::int64_t sweeps, std::int64_t thin,
                       const std::vector<std::string>& observables, std::uint64_t seed,
                       std::uint64_t chain_index = 0, const Graph* init = nullptr,
                       std::int64_t burnin_steps = -1);

// Subset-chain observables: size, internal_edges.
RunRecord run_chain_nu(const Graph& host, double lambda, double zeta, std::int64_t sweeps,
                       std::int64_t thin, const std::vector<std::string>& observables,
                       std::uint64_t seed, std::uint64_t chain_index = 0,
                       std::int64_t burnin_steps = -1);

// Samples graphs from the chain and, for each sample, compares two exact
// conditional laws of the degree of v given the rest of the graph: one by
// enumerating all 2^{n-1} neighborhoods with full-graph triangle recounts,
// one as the occupancy-size law of the subset measure on the sample minus v.
// Returns the largest total-variation distance seen (an identity: ~1e-16).
// SizeError when n > 6.
double local_conditioning_check(const GibbsParams& params, int v, int samples,
                                std::uint64_t seed);

struct CouplingRecord {
    std::vector<double> hamming_trace;  // mean edge-disagreement count per step
    double slope_estimate = 0.0;        // fitted d log(distance)/d step, <= 0
    double xi = 0.0;                    // 1 - 2 zeta c^2
    double bound_per_step = 0.0;        // -xi/n^2, the proven contraction rate
    bool contraction_regime = false;    // xi > 0
};

// Identically coupled chain pairs started one edge apart; mean Hamming
// distance decays like e^{slope * t}. xi <= 0 is reported, not an error.
CouplingRecord contraction_estimate(const GibbsParams& params, std::int64_t pairs,
                                    std::int64_t horizon, std::uint64_t seed);

// One shared-randomness update of a triangle-penalized chain and a zeta = 0
// reference chain with the same activity. Sharing (pair, uniform) draws keeps
// the penalized state edgewise below the reference state at every step.
// Returns the resampled pair.
std::pair<int, int> domination_step(MuChain& penalized, MuChain& reference, CounterRng& rng);

}  // namespace trigibbs::glauber
