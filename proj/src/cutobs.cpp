#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "trigibbs/errors.hpp"
#include "trigibbs/graph.hpp"
#include "trigibbs/rng.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs {

namespace {

// cut delta when vertex v switches sides: same-side neighbors become cut,
// cut neighbors become same-side.
std::int64_t flip_delta(const Graph& g, const std::vector<std::uint8_t>& side, int v) {
    std::int64_t same = 0;
    for (int u : g.neighbors(v)) same += side[u] == side[v];
    return 2 * same - g.degree(v);
}

std::int64_t exact_max_cut(const Graph& g) {
    const int n = g.n();
    // vertex n-1 pinned to side 0; Gray walk over the rest
    std::vector<std::uint8_t> side(n, 0);
    std::int64_t cut = 0, best = 0;
    const std::uint64_t total = 1ULL << (n > 0 ? n - 1 : 0);
    for (std::uint64_t i = 1; i < total; ++i) {
        int v = std::countr_zero(i);
        cut += flip_delta(g, side, v);
        side[v] ^= 1;
        best = std::max(best, cut);
    }
    return best;
}

std::int64_t local_search_cut(const Graph& g, int restarts, std::uint64_t seed) {
    const int n = g.n();
    CounterRng rng(StreamKey{seed, fnv1a64("cut.local_search"), 0, 0});
    std::vector<std::uint8_t> side(n);
    std::int64_t best = 0;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::int64_t cut = 0;
        for (int v = 0; v < n; ++v) side[v] = static_cast<std::uint8_t>(rng.next_u64() & 1);
        for (int u = 0; u < n; ++u)
            for (int v : g.neighbors(u))
                if (u < v && side[u] != side[v]) ++cut;
        bool improved = true;
        while (improved) {
            improved = false;
            for (int v = 0; v < n; ++v) {
                std::int64_t d = flip_delta(g, side, v);
                if (d > 0) {
                    cut += d;
                    side[v] ^= 1;
                    improved = true;
                }
            }
        }
        best = std::max(best, cut);
    }
    return best;
}

}  // namespace

double max_cut_fraction(const Graph& g, CutMethod mode, int restarts, std::uint64_t seed) {
    if (mode == CutMethod::exact && g.n() > 24)
        throw SizeError("max_cut_fraction: exact mode limited to n <= 24");
    if (g.edge_count() == 0) return 0.0;  // convention for edgeless graphs
    std::int64_t best;
    if (mode == CutMethod::exact) {
        best = exact_max_cut(g);
    } else {
        best = local_search_cut(g, restarts, seed);
    }
    return static_cast<double>(best) / static_cast<double>(g.edge_count());
}

namespace {

// column sums s_j = sum_{i in x} M_ij for M = A - q(J-I)
double positive_part_sum(const std::vector<double>& s) {
    double v = 0.0;
    for (double x : s)
        if (x > 0.0) v += x;
    return v;
}

double exact_cut_norm(const Graph& g, double q) {
    const int n = g.n();
    std::vector<double> s(n, 0.0);
    std::vector<std::uint8_t> inx(n, 0);
    double best = 0.0;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        int v = std::countr_zero(i);
        double sign = inx[v] ? -1.0 : 1.0;
        inx[v] ^= 1;
        for (int j = 0; j < n; ++j)
            if (j != v) s[j] -= sign * q;
        for (int u : g.neighbors(v)) s[u] += sign;  // net M_vu = 1 - q on edges
        best = std::max(best, positive_part_sum(s));
    }
    return best;
}

double alternating_cut_norm(const Graph& g, double q, int restarts, std::uint64_t seed) {
    const int n = g.n();
    CounterRng rng(StreamKey{seed, fnv1a64("cut.alternating"), 0, 0});
    std::vector<std::uint8_t> x(n), y(n);
    std::vector<double> score(n);
    double best = 0.0;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        for (int v = 0; v < n; ++v) x[v] = static_cast<std::uint8_t>(rng.next_u64() & 1);
        double value = -1.0;
        for (int it = 0; it < 200; ++it) {
            // given x: s_j = (#neighbors of j in x) - q(|x| - x_j); pick y = {s > 0}
            std::fill(score.begin(), score.end(), 0.0);
            std::int64_t cx = 0;
            for (int v = 0; v < n; ++v)
                if (x[v]) {
                    ++cx;
                    for (int u : g.neighbors(v)) score[u] += 1.0;
                }
            for (int j = 0; j < n; ++j) score[j] -= q * static_cast<double>(cx - (x[j] ? 1 : 0));
            for (int j = 0; j < n; ++j) y[j] = score[j] > 0.0;
            // given y: symmetric update for x
            std::fill(score.begin(), score.end(), 0.0);
            std::int64_t cy = 0;
            for (int v = 0; v < n; ++v)
                if (y[v]) {
                    ++cy;
                    for (int u : g.neighbors(v)) score[u] += 1.0;
                }
            for (int i2 = 0; i2 < n; ++i2) score[i2] -= q * static_cast<double>(cy - (y[i2] ? 1 : 0));
            double nv = 0.0;
            for (int i2 = 0; i2 < n; ++i2) {
                x[i2] = score[i2] > 0.0;
                if (x[i2]) nv += score[i2];
            }
            if (nv <= value) break;  // fixpoint of the monotone objective
            value = nv;
        }
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

double cut_norm_deviation(const Graph& g, double q, CutMethod mode, int restarts,
                          std::uint64_t seed) {
    if (mode == CutMethod::exact) {
        if (g.n() > 14) throw SizeError("cut_norm_deviation: exact mode limited to n <= 14");
        return exact_cut_norm(g, q);
    }
    return alternating_cut_norm(g, q, restarts, seed);
}

}  // namespace trigibbs
