#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "trigibbs/graph.hpp"

namespace trigibbs::cluster {

// Ordered tuple (v_1..v_k) of host vertices whose incompatibility graph on
// positions is connected. Positions i,j are joined when the entries coincide
// (weight -1) or are adjacent in the host (weight -zeta).
struct Cluster {
    struct Edge {
        int i, j;     // positions, i < j
        bool repeat;  // true: same vertex, weight -1; false: adjacent, weight -zeta
    };
    std::vector<int> vertices;
    std::vector<Edge> edges;

    int size() const { return static_cast<int>(vertices.size()); }
};

// Builds the incompatibility edges from the host adjacency. Throws
// std::invalid_argument when the incompatibility graph is disconnected.
Cluster make_cluster(const Graph& host, std::vector<int> tuple);

// Streams every cluster of size <= k_max exactly once: connected supports by
// canonical DFS, multiplicity vectors, then distinct orderings. Returns the
// number of clusters emitted. SizeError when k_max > 8; BudgetError (carrying
// the count reached) when the stream would exceed `budget` clusters.
std::int64_t enumerate_clusters(const Graph& host, int k_max,
                                const std::function<void(const Cluster&)>& visit,
                                std::int64_t budget = 10'000'000);

// Ursell coefficient: (1/k!) sum over connected spanning edge subsets of the
// incompatibility graph of prod w_e. Direct edge-subset enumeration for
// k <= 5, deletion-contraction for k = 6..8. SizeError above 8.
double ursell(const Cluster& gamma, double zeta);

// Same coefficient by subset convolution over positions (O(3^k)); used as the
// inner loop of truncated_log_xi and cross-checked against ursell in tests.
double ursell_convolution(const Cluster& gamma, double zeta);

// Weighted spanning-tree sum of the incompatibility graph with |w_e|
// (matrix-tree determinant). Dominates |k! * ursell|.
double penrose_bound(const Cluster& gamma, double zeta);

struct TruncationResult {
    double value = 0.0;       // sum of phi(Gamma) lambda^{|Gamma|} over |Gamma| <= k
    double tail_bound = 0.0;  // e n lambda gamma^k / (1-gamma), certified
    double gamma = 0.0;       // e lambda (1 + zeta Delta) (1 + 1e-9)
    std::vector<std::int64_t> counts_by_size;  // ordered clusters, index = size
    std::vector<double> signed_by_size;        // sum of phi lambda^j per size j
    std::vector<double> abs_by_size;           // sum of |phi| lambda^j per size j
};

// Truncated expansion of log Xi_host(lambda, zeta) through clusters of size
// <= k, grouped by vertex multiset (the coefficient is ordering-invariant).
// |value - log Xi| <= tail_bound inside the convergence region
// e lambda (1 + zeta Delta) < 1; outside it throws OutOfRegionError carrying
// the infimum admissible gamma.
TruncationResult truncated_log_xi(const Graph& host, double lambda, double zeta, int k);

struct TreeApprox {
    double Delta = 0.0;
    double f_value = 0.0;      // W(z)(2 + W(z)) / (2 zeta Delta), z = zeta Delta lambda
    double alpha_value = 0.0;  // W(z) / (zeta Delta)
    double rho_value = 0.0;    // Delta (1 - zeta) alpha^2 / 2
};

// Closed-form expansion values on the Delta-regular tree. Requires
// zeta in (0,1], Delta > 0, lambda >= 0. Identities lambda df/dlambda = alpha
// and -(1-zeta) df/dzeta = rho hold exactly.
TreeApprox tree_approx(double Delta, double lambda, double zeta);

struct TreeCount {
    std::int64_t count = 0;     // tree subgraphs on ell vertices containing v
    double prediction = 0.0;    // (Delta ell)^{ell-1} / ell!
};

// Exact count (connected-subset enumeration + matrix-tree per subset) against
// the first-order prediction. ell <= 6; BudgetError when the enumeration
// exceeds `budget` subsets.
TreeCount tree_count_check(const Graph& host, int ell, int v,
                           std::int64_t budget = 5'000'000);

}  // namespace trigibbs::cluster
