#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace trigibbs {

// Mutable labeled graph with sorted neighbor lists and exact incremental
// edge/triangle counters. Codegree (common-neighbor) queries are the
// inner-loop cost of the dynamics, hence the sorted representation.
class Graph {
  public:
    explicit Graph(int n);

    int n() const { return n_; }
    std::int64_t edge_count() const { return edges_; }
    std::int64_t triangle_count() const { return triangles_; }

    bool has_edge(int u, int v) const;
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int max_degree() const;
    int min_degree() const;

    // |N(u) ∩ N(v)|; unaffected by the presence of the edge {u,v} itself.
    int codegree(int u, int v) const;

    struct ToggleDelta {
        int edges;               // +1 or -1
        std::int64_t triangles;  // +-codegree(u,v)
    };
    // Flips edge {u,v} and updates counters incrementally.
    ToggleDelta toggle_edge(int u, int v);

    // Idempotent edge assignment.
    void set_edge(int u, int v, bool present);

    // Edge-list text format: header "n <edge_count>", then one "u v" line
    // per edge, 0-indexed.
    static Graph from_edge_list(std::istream& in);
    void to_edge_list(std::ostream& out) const;

  private:
    int n_;
    std::int64_t edges_ = 0;
    std::int64_t triangles_ = 0;
    std::vector<std::vector<int>> adj_;
};

Graph complete_graph(int n);
Graph complete_bipartite(int a, int b);
Graph cycle_graph(int n);
Graph path_graph(int n);

enum class CutMethod { exact, local_search, alternating };

struct CutStats {
    double maxcut_fraction = 0.0;
    double cutnorm_dev = 0.0;
    CutMethod method = CutMethod::exact;
};

// Best cut fraction (cut edges / total edges); 0 for an edgeless graph.
// exact mode enumerates bipartitions (n <= 24, SizeError above);
// local_search runs first-improvement single-vertex moves from random
// restarts and reports a lower bound. Deterministic given seed.
double max_cut_fraction(const Graph& g, CutMethod mode, int restarts, std::uint64_t seed);

// max over x,y in {0,1}^n of x^T (A - q(J-I)) y, the deviation of the
// adjacency from a constant density q (diagonal zeroed). exact mode
// enumerates x (n <= 14, SizeError above); alternating mode does seeded
// randomized alternating maximization and reports a lower bound.
double cut_norm_deviation(const Graph& g, double q, CutMethod mode, int restarts,
                          std::uint64_t seed);

}  // namespace trigibbs
