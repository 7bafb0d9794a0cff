#include "trigibbs/cluster.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "trigibbs/errors.hpp"
#include "trigibbs/specfun.hpp"

namespace trigibbs::cluster {

namespace {

constexpr std::array<double, 9> kFactorial = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};

double edge_weight(const Cluster::Edge& e, double zeta) { return e.repeat ? -1.0 : -zeta; }

// ---- connected vertex-subset enumeration --------------------------------

// DFS that visits every connected subset with a fixed root exactly once:
// candidates are consumed in list order, and a vertex entering any candidate
// list on the current path stays unavailable to later branches at that level.
class SubsetStream {
  public:
    SubsetStream(const Graph& host, int max_size, std::int64_t budget,
                 std::function<void(const std::vector<int>&)> visit)
        : host_(host), max_size_(max_size), budget_(budget), visit_(std::move(visit)),
          listed_(static_cast<std::size_t>(host.n()), 0) {}

    // Subsets whose minimum element equals root.
    void run_min_rooted(int root) {
        std::fill(listed_.begin(), listed_.end(), 0);
        for (int u = 0; u <= root; ++u) listed_[static_cast<std::size_t>(u)] = 1;
        start(root);
    }

    // Subsets containing root, any other vertices allowed.
    void run_containing(int root) {
        std::fill(listed_.begin(), listed_.end(), 0);
        listed_[static_cast<std::size_t>(root)] = 1;
        start(root);
    }

    std::int64_t visited() const { return visited_; }

  private:
    void start(int root) {
        current_.assign(1, root);
        std::vector<int> cand;
        for (int u : host_.neighbors(root))
            if (!listed_[static_cast<std::size_t>(u)]) {
                listed_[static_cast<std::size_t>(u)] = 1;
                cand.push_back(u);
            }
        recurse(cand);
        for (int u : cand) listed_[static_cast<std::size_t>(u)] = 0;
    }

    void recurse(const std::vector<int>& cand) {
        if (visited_ >= budget_)
            throw BudgetError("connected-subset enumeration budget exceeded", visited_);
        ++visited_;
        visit_(current_);
        if (static_cast<int>(current_.size()) == max_size_) return;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            int v = cand[i];
            current_.push_back(v);
            std::vector<int> next(cand.begin() + static_cast<std::ptrdiff_t>(i) + 1, cand.end());
            std::vector<int> added;
            for (int u : host_.neighbors(v))
                if (!listed_[static_cast<std::size_t>(u)]) {
                    listed_[static_cast<std::size_t>(u)] = 1;
                    added.push_back(u);
                    next.push_back(u);
                }
            recurse(next);
            for (int u : added) listed_[static_cast<std::size_t>(u)] = 0;
            current_.pop_back();
        }
    }

    const Graph& host_;
    int max_size_;
    std::int64_t budget_;
    std::function<void(const std::vector<int>&)> visit_;
    std::vector<char> listed_;
    std::vector<int> current_;
    std::int64_t visited_ = 0;
};

// For each multiplicity assignment (m_v >= 1 per support slot, total size in
// [|S|, k_max]) calls f(mult, total).
template <class F>
void for_each_multiplicity(std::size_t slots, int extra_left, std::vector<int>& mult,
                           std::size_t idx, int total, F&& f) {
    if (idx == slots) {
        f(mult, total);
        return;
    }
    for (int extra = 0; extra <= extra_left; ++extra) {
        mult[idx] = 1 + extra;
        for_each_multiplicity(slots, extra_left - extra, mult, idx + 1, total + 1 + extra,
                              std::forward<F>(f));
    }
}

// Sum over connected spanning edge subsets of prod w_e, for the position
// graph given as the (1+w) factor matrix: subset-convolution recursion
// C(T) = Z(T) - sum_{S cont. lowbit(T), S proper} C(S) Z(T\S),
// Z(T) = prod_{e inside T} (1+w_e).
double connected_sum_convolution(const std::array<std::array<double, 8>, 8>& f, int k) {
    const std::uint32_t full = (1u << k) - 1;
    std::vector<double> Z(full + 1), C(full + 1, 0.0);
    Z[0] = 1.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        int t = 31 - std::countl_zero(mask);
        std::uint32_t rest = mask ^ (1u << t);
        double z = Z[rest];
        for (std::uint32_t r = rest; r;) {
            int j = std::countr_zero(r);
            r &= r - 1;
            z *= f[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
        }
        Z[mask] = z;
    }
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::uint32_t low = mask & (~mask + 1);
        double c = Z[mask];
        for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask)
            if (sub & low) c -= C[sub] * Z[mask ^ sub];
        C[mask] = c;
    }
    return C[full];
}

std::array<std::array<double, 8>, 8> factor_matrix(const Cluster& g, double zeta) {
    std::array<std::array<double, 8>, 8> f{};
    for (auto& row : f) row.fill(1.0);
    for (const auto& e : g.edges) {
        double v = 1.0 + edge_weight(e, zeta);
        f[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.j)] = v;
        f[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.i)] = v;
    }
    return f;
}

// ---- Ursell coefficient, direct methods ----------------------------------

bool spanning_connected(int k, const std::vector<Cluster::Edge>& edges, std::uint32_t mask) {
    std::array<int, 8> parent{};
    std::iota(parent.begin(), parent.begin() + k, 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    int comps = k;
    for (std::size_t t = 0; t < edges.size(); ++t) {
        if (!(mask & (1u << t))) continue;
        int a = find(edges[t].i), b = find(edges[t].j);
        if (a != b) {
            parent[static_cast<std::size_t>(a)] = b;
            --comps;
        }
    }
    return comps == 1;
}

double ursell_by_edge_subsets(const Cluster& g, double zeta) {
    const int k = g.size();
    const std::uint32_t total = 1u << g.edges.size();
    double sum = 0.0;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        if (std::popcount(mask) < k - 1) continue;
        if (!spanning_connected(k, g.edges, mask)) continue;
        double prod = 1.0;
        for (std::size_t t = 0; t < g.edges.size(); ++t)
            if (mask & (1u << t)) prod *= edge_weight(g.edges[t], zeta);
        sum += prod;
    }
    return sum / kFactorial[static_cast<std::size_t>(k)];
}

struct DelConGraph {
    std::array<std::array<double, 8>, 8> w{};  // 0 = absent
    std::array<char, 8> alive{};
    int n = 0;
};

bool delcon_connected(const DelConGraph& g) {
    int start = -1, count = 0;
    for (int i = 0; i < g.n; ++i)
        if (g.alive[static_cast<std::size_t>(i)]) {
            if (start < 0) start = i;
            ++count;
        }
    if (count <= 1) return true;
    std::array<char, 8> seen{};
    std::array<int, 8> stack{};
    int top = 0;
    stack[top++] = start;
    seen[static_cast<std::size_t>(start)] = 1;
    int reached = 1;
    while (top) {
        int a = stack[--top];
        for (int b = 0; b < g.n; ++b)
            if (g.alive[static_cast<std::size_t>(b)] && !seen[static_cast<std::size_t>(b)] &&
                g.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0.0) {
                seen[static_cast<std::size_t>(b)] = 1;
                stack[top++] = b;
                ++reached;
            }
    }
    return reached == count;
}

// Connected spanning-subset sum by deletion-contraction with parallel-edge
// merging (w' = w1 + w2 + w1 w2) and a forced-edge shortcut at degree one.
double delcon_sum(DelConGraph g) {
    int nv = 0;
    for (int i = 0; i < g.n; ++i) nv += g.alive[static_cast<std::size_t>(i)];
    if (nv <= 1) return 1.0;
    if (!delcon_connected(g)) return 0.0;

    for (int a = 0; a < g.n; ++a) {
        if (!g.alive[static_cast<std::size_t>(a)]) continue;
        int deg = 0, nbr = -1;
        for (int b = 0; b < g.n; ++b)
            if (g.alive[static_cast<std::size_t>(b)] &&
                g.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0.0) {
                ++deg;
                nbr = b;
            }
        if (deg == 1) {
            double wt = g.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(nbr)];
            g.alive[static_cast<std::size_t>(a)] = 0;
            for (int b = 0; b < g.n; ++b) {
                g.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 0.0;
                g.w[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 0.0;
            }
            return wt * delcon_sum(g);
        }
    }

    int ea = -1, eb = -1;
    for (int a = 0; a < g.n && ea < 0; ++a)
        for (int b = a + 1; b < g.n && ea < 0; ++b)
            if (g.alive[static_cast<std::size_t>(a)] && g.alive[static_cast<std::size_t>(b)] &&
                g.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0.0) {
                ea = a;
                eb = b;
            }
    double wt = g.w[static_cast<std::size_t>(ea)][static_cast<std::size_t>(eb)];

    DelConGraph del = g;
    del.w[static_cast<std::size_t>(ea)][static_cast<std::size_t>(eb)] = 0.0;
    del.w[static_cast<std::size_t>(eb)][static_cast<std::size_t>(ea)] = 0.0;

    DelConGraph con = g;
    con.w[static_cast<std::size_t>(ea)][static_cast<std::size_t>(eb)] = 0.0;
    con.w[static_cast<std::size_t>(eb)][static_cast<std::size_t>(ea)] = 0.0;
    for (int x = 0; x < g.n; ++x) {
        if (!con.alive[static_cast<std::size_t>(x)] || x == ea || x == eb) continue;
        double wa = con.w[static_cast<std::size_t>(ea)][static_cast<std::size_t>(x)];
        double wb = con.w[static_cast<std::size_t>(eb)][static_cast<std::size_t>(x)];
        double merged = wa + wb + wa * wb;
        con.w[static_cast<std::size_t>(ea)][static_cast<std::size_t>(x)] = merged;
        con.w[static_cast<std::size_t>(x)][static_cast<std::size_t>(ea)] = merged;
        con.w[static_cast<std::size_t>(eb)][static_cast<std::size_t>(x)] = 0.0;
        con.w[static_cast<std::size_t>(x)][static_cast<std::size_t>(eb)] = 0.0;
    }
    con.alive[static_cast<std::size_t>(eb)] = 0;

    return delcon_sum(del) + wt * delcon_sum(con);
}

double ursell_by_deletion_contraction(const Cluster& g, double zeta) {
    DelConGraph dg;
    dg.n = g.size();
    for (int i = 0; i < dg.n; ++i) dg.alive[static_cast<std::size_t>(i)] = 1;
    for (const auto& e : g.edges) {
        double w = edge_weight(e, zeta);
        dg.w[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.j)] = w;
        dg.w[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.i)] = w;
    }
    return delcon_sum(dg) / kFactorial[static_cast<std::size_t>(g.size())];
}

// Determinant with partial pivoting; m x m stored in a fixed 8x8 frame.
double determinant(std::array<std::array<double, 8>, 8>& a, int m) {
    double det = 1.0;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        if (a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(col)]);
            det = -det;
        }
        double d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        det *= d;
        for (int r = col + 1; r < m; ++r) {
            double factor = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
            for (int c = col; c < m; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        }
    }
    return det;
}

}  // namespace

Cluster make_cluster(const Graph& host, std::vector<int> tuple) {
    Cluster g;
    g.vertices = std::move(tuple);
    const int k = g.size();
    if (k < 1) throw std::invalid_argument("make_cluster: empty tuple");
    for (int v : g.vertices)
        if (v < 0 || v >= host.n()) throw std::invalid_argument("make_cluster: vertex out of range");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            if (g.vertices[static_cast<std::size_t>(i)] == g.vertices[static_cast<std::size_t>(j)])
                g.edges.push_back({i, j, true});
            else if (host.has_edge(g.vertices[static_cast<std::size_t>(i)],
                                   g.vertices[static_cast<std::size_t>(j)]))
                g.edges.push_back({i, j, false});
        }
    if (k > 1 && !spanning_connected(k, g.edges, (1u << g.edges.size()) - 1))
        throw std::invalid_argument("make_cluster: incompatibility graph disconnected");
    return g;
}

std::int64_t enumerate_clusters(const Graph& host, int k_max,
                                const std::function<void(const Cluster&)>& visit,
                                std::int64_t budget) {
    if (k_max < 1 || k_max > 8) throw SizeError("enumerate_clusters supports k_max in 1..8");
    std::int64_t emitted = 0;
    auto per_support = [&](const std::vector<int>& support) {
        std::vector<int> mult(support.size());
        for_each_multiplicity(
            support.size(), k_max - static_cast<int>(support.size()), mult, 0, 0,
            [&](const std::vector<int>& m, int total) {
                std::vector<int> tuple;
                tuple.reserve(static_cast<std::size_t>(total));
                for (std::size_t s = 0; s < support.size(); ++s)
                    tuple.insert(tuple.end(), static_cast<std::size_t>(m[s]), support[s]);
                std::sort(tuple.begin(), tuple.end());
                do {
                    if (emitted >= budget)
                        throw BudgetError("cluster enumeration budget exceeded", emitted);
                    ++emitted;
                    visit(make_cluster(host, tuple));
                } while (std::next_permutation(tuple.begin(), tuple.end()));
            });
    };
    SubsetStream stream(host, k_max, budget, per_support);
    for (int r = 0; r < host.n(); ++r) stream.run_min_rooted(r);
    return emitted;
}

double ursell(const Cluster& gamma, double zeta) {
    const int k = gamma.size();
    if (k > 8) throw SizeError("ursell limited to clusters of size 8");
    if (k <= 5) return ursell_by_edge_subsets(gamma, zeta);
    return ursell_by_deletion_contraction(gamma, zeta);
}

double ursell_convolution(const Cluster& gamma, double zeta) {
    const int k = gamma.size();
    if (k > 8) throw SizeError("ursell_convolution limited to clusters of size 8");
    return connected_sum_convolution(factor_matrix(gamma, zeta), k) /
           kFactorial[static_cast<std::size_t>(k)];
}

double penrose_bound(const Cluster& gamma, double zeta) {
    const int k = gamma.size();
    if (k > 8) throw SizeError("penrose_bound limited to clusters of size 8");
    if (k == 1) return 1.0;
    std::array<std::array<double, 8>, 8> lap{};
    for (const auto& e : gamma.edges) {
        double w = std::abs(edge_weight(e, zeta));
        lap[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.j)] -= w;
        lap[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.i)] -= w;
        lap[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.i)] += w;
        lap[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.j)] += w;
    }
    // cofactor: drop the first row and column
    std::array<std::array<double, 8>, 8> minor{};
    for (int i = 1; i < k; ++i)
        for (int j = 1; j < k; ++j)
            minor[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                lap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return determinant(minor, k - 1);
}

TruncationResult truncated_log_xi(const Graph& host, double lambda, double zeta, int k) {
    if (k < 1 || k > 8) throw SizeError("truncated_log_xi supports k in 1..8");
    if (lambda < 0.0 || zeta < 0.0 || zeta > 1.0)
        throw std::domain_error("truncated_log_xi: invalid parameters");
    const double gamma_inf =
        std::exp(1.0) * lambda * (1.0 + zeta * static_cast<double>(host.max_degree()));
    TruncationResult res;
    res.gamma = gamma_inf * (1.0 + 1e-9);
    if (!(res.gamma < 1.0))
        throw OutOfRegionError("truncated_log_xi: e lambda (1 + zeta Delta) must be below 1",
                               gamma_inf);
    res.counts_by_size.assign(static_cast<std::size_t>(k) + 1, 0);
    res.signed_by_size.assign(static_cast<std::size_t>(k) + 1, 0.0);
    res.abs_by_size.assign(static_cast<std::size_t>(k) + 1, 0.0);

    std::vector<double> lam(static_cast<std::size_t>(k) + 1, 1.0);
    for (int j = 1; j <= k; ++j)
        lam[static_cast<std::size_t>(j)] = lam[static_cast<std::size_t>(j - 1)] * lambda;

    auto per_support = [&](const std::vector<int>& support) {
        std::vector<int> mult(support.size());
        for_each_multiplicity(
            support.size(), k - static_cast<int>(support.size()), mult, 0, 0,
            [&](const std::vector<int>& m, int total) {
                std::array<std::array<double, 8>, 8> f{};
                for (auto& row : f) row.fill(1.0);
                std::array<int, 8> pv{};
                int pos = 0;
                for (std::size_t s = 0; s < support.size(); ++s)
                    for (int rep = 0; rep < m[s]; ++rep) pv[static_cast<std::size_t>(pos++)] = support[s];
                for (int i = 0; i < total; ++i)
                    for (int j = i + 1; j < total; ++j) {
                        double v;
                        if (pv[static_cast<std::size_t>(i)] == pv[static_cast<std::size_t>(j)])
                            v = 0.0;
                        else if (host.has_edge(pv[static_cast<std::size_t>(i)],
                                               pv[static_cast<std::size_t>(j)]))
                            v = 1.0 - zeta;
                        else
                            continue;
                        f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                        f[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
                    }
                double u = connected_sum_convolution(f, total);
                double mfact = 1.0;
                for (int mv : m) mfact *= kFactorial[static_cast<std::size_t>(mv)];
                const auto sz = static_cast<std::size_t>(total);
                res.signed_by_size[sz] += lam[sz] * u / mfact;
                res.abs_by_size[sz] += lam[sz] * std::abs(u) / mfact;
                res.counts_by_size[sz] += static_cast<std::int64_t>(
                    std::llround(kFactorial[sz] / mfact));
            });
    };
    // Work is bounded by the class count, far below the ordered-cluster count;
    // the budget here only guards against pathological hosts.
    SubsetStream stream(host, k, 50'000'000, per_support);
    for (int r = 0; r < host.n(); ++r) stream.run_min_rooted(r);

    res.value = 0.0;
    for (double s : res.signed_by_size) res.value += s;
    res.tail_bound = std::exp(1.0) * static_cast<double>(host.n()) * lambda *
                     std::pow(res.gamma, k) / (1.0 - res.gamma);
    return res;
}

TreeApprox tree_approx(double Delta, double lambda, double zeta) {
    if (!(zeta > 0.0 && zeta <= 1.0)) throw std::domain_error("tree_approx: zeta must be in (0,1]");
    if (!(Delta > 0.0)) throw std::domain_error("tree_approx: Delta must be positive");
    if (lambda < 0.0) throw std::domain_error("tree_approx: lambda must be nonnegative");
    double w = specfun::lambert_w0(zeta * Delta * lambda);
    TreeApprox t;
    t.Delta = Delta;
    t.alpha_value = w / (zeta * Delta);
    t.f_value = w * (2.0 + w) / (2.0 * zeta * Delta);
    t.rho_value = 0.5 * Delta * (1.0 - zeta) * t.alpha_value * t.alpha_value;
    return t;
}

TreeCount tree_count_check(const Graph& host, int ell, int v, std::int64_t budget) {
    if (ell < 1 || ell > 6) throw SizeError("tree_count_check supports ell in 1..6");
    if (v < 0 || v >= host.n()) throw std::domain_error("tree_count_check: vertex out of range");
    TreeCount tc;
    tc.prediction = std::pow(static_cast<double>(host.max_degree()) * ell, ell - 1) /
                    kFactorial[static_cast<std::size_t>(ell)];
    auto per_subset = [&](const std::vector<int>& subset) {
        if (static_cast<int>(subset.size()) != ell) return;
        if (ell == 1) {
            ++tc.count;
            return;
        }
        std::array<std::array<double, 8>, 8> lap{};
        for (std::size_t a = 0; a < subset.size(); ++a)
            for (std::size_t b = a + 1; b < subset.size(); ++b)
                if (host.has_edge(subset[a], subset[b])) {
                    lap[a][b] -= 1.0;
                    lap[b][a] -= 1.0;
                    lap[a][a] += 1.0;
                    lap[b][b] += 1.0;
                }
        std::array<std::array<double, 8>, 8> minor{};
        for (int i = 1; i < ell; ++i)
            for (int j = 1; j < ell; ++j)
                minor[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                    lap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        tc.count += std::llround(determinant(minor, ell - 1));
    };
    SubsetStream stream(host, ell, budget, per_subset);
    stream.run_containing(v);
    return tc;
}

}  // namespace trigibbs::cluster
