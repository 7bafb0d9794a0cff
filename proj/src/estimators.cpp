#include "trigibbs/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "trigibbs/errors.hpp"
#include "trigibbs/glauber.hpp"
#include "trigibbs/rng.hpp"
#include "trigibbs/specfun.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs::estimators {

namespace {

// W(2 zeta c^2)/(2 zeta) with its zeta -> 0 limit c^2.
double w_ratio(double c, double zeta) {
    if (zeta == 0.0) return c * c;
    return specfun::lambert_w0(2.0 * zeta * c * c) / (2.0 * zeta);
}

struct Pooled {
    double mean = 0.0;
    double se = 0.0;
};

Pooled pool(const std::vector<BatchStats>& per_chain) {
    Pooled p;
    double var = 0.0;
    for (const auto& b : per_chain) {
        p.mean += b.mean;
        var += b.stderr_ * b.stderr_;
    }
    const double k = static_cast<double>(per_chain.size());
    p.mean /= k;
    p.se = std::sqrt(var) / k;
    return p;
}

}  // namespace

DensityReport estimate_densities(const GibbsParams& params, int chains, std::int64_t sweeps,
                                 std::uint64_t seed) {
    if (chains < 1) throw std::domain_error("estimate_densities: chains must be >= 1");
    if (sweeps < 32) throw std::domain_error("estimate_densities: need >= 32 sweeps for batch means");
    if (!(params.lambda > 0.0)) throw std::domain_error("estimate_densities: lambda must be positive");

    std::vector<BatchStats> edge_stats, tri_stats;
    for (int ch = 0; ch < chains; ++ch) {
        glauber::RunRecord rec =
            glauber::run_chain_mu(params, sweeps, 1, {"edges", "triangles"}, seed,
                                  static_cast<std::uint64_t>(ch));
        edge_stats.push_back(batch_means(rec.series[0]));
        tri_stats.push_back(batch_means(rec.series[1]));
    }
    Pooled e = pool(edge_stats), t = pool(tri_stats);

    DensityReport r;
    r.params = params;
    r.chains = chains;
    r.sweeps = sweeps;
    r.mean_edges = e.mean;
    r.stderr_edges = e.se;
    r.mean_triangles = t.mean;
    r.stderr_triangles = t.se;
    r.mean_degree = 2.0 * e.mean / static_cast<double>(params.n);

    const double c = params.c();
    const double ratio = w_ratio(c, params.zeta);
    const double n32 = std::pow(static_cast<double>(params.n), 1.5);
    r.predicted_edges = 0.5 * std::sqrt(ratio) * n32;
    r.predicted_triangles = (1.0 - params.zeta) / 6.0 * std::pow(ratio, 1.5) * n32;
    r.predicted_degree_coeff = std::sqrt(ratio);
    double eta = ratefn::eta_of_zeta(c, params.zeta);
    r.regime = c < ratefn::c_bar(eta) ? ratefn::Regime::inside_window
                                      : ratefn::Regime::outside_validity;
    r.small_n = params.n < 50;
    return r;
}

double fixed_point_residual(const DensityReport& report, const GibbsParams& params) {
    if (params.zeta < 1e-6)
        throw std::domain_error("fixed_point_residual: requires zeta >= 1e-6");
    const double c = params.c();
    const double w = specfun::lambert_w0(2.0 * params.zeta * c * c);
    const double b = report.mean_degree / std::sqrt(static_cast<double>(params.n));
    return std::abs(2.0 * params.zeta * b * b - w) / w;
}

IntegrationResult log_z_by_integration(int n, double c_target, double zeta, int grid,
                                       int chains, std::uint64_t seed) {
    if (grid < 8) throw std::domain_error("log_z_by_integration: grid must be >= 8");
    if (n < 2) throw std::domain_error("log_z_by_integration: n must be >= 2");
    if (chains < 1) throw std::domain_error("log_z_by_integration: chains must be >= 1");
    if (!(c_target > 0.0)) throw std::domain_error("log_z_by_integration: c_target must be positive");
    if (zeta < 0.0 || zeta > 1.0) throw std::domain_error("log_z_by_integration: zeta must be in [0,1]");

    IntegrationResult res;
    res.grid = grid;
    const double lambda_max = c_target / std::sqrt(static_cast<double>(n));
    const double pairs = static_cast<double>(comb2(n));
    if (zeta == 0.0) {
        // free case: E|G|/theta = C(n,2)/(1+theta) integrates in closed form
        res.log_z = pairs * std::log1p(lambda_max);
        return res;
    }

    constexpr std::int64_t kSweeps = 200;
    std::vector<double> theta(static_cast<std::size_t>(grid));
    std::vector<double> f(static_cast<std::size_t>(grid));   // E|G|/theta
    std::vector<double> fse(static_cast<std::size_t>(grid)); // its one-sigma error
    for (int j = 0; j < grid; ++j) {
        theta[static_cast<std::size_t>(j)] = std::ldexp(lambda_max, j - (grid - 1));
        GibbsParams pj{n, theta[static_cast<std::size_t>(j)], zeta};
        std::vector<BatchStats> stats;
        for (int ch = 0; ch < chains; ++ch) {
            glauber::RunRecord rec = glauber::run_chain_mu(
                pj, kSweeps, 1, {"edges"}, seed,
                static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(chains) +
                    static_cast<std::uint64_t>(ch));
            stats.push_back(batch_means(rec.series[0]));
        }
        Pooled p = pool(stats);
        f[static_cast<std::size_t>(j)] = p.mean / theta[static_cast<std::size_t>(j)];
        fse[static_cast<std::size_t>(j)] = p.se / theta[static_cast<std::size_t>(j)];
    }

    const double head = pairs * std::log1p(theta[0]);
    auto trapezoid = [&](const std::vector<int>& idx) {
        double t = 0.0;
        for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
            const auto i = static_cast<std::size_t>(idx[a]);
            const auto j = static_cast<std::size_t>(idx[a + 1]);
            t += 0.5 * (theta[j] - theta[i]) * (f[i] + f[j]);
        }
        return t;
    };
    std::vector<int> all(static_cast<std::size_t>(grid));
    for (int j = 0; j < grid; ++j) all[static_cast<std::size_t>(j)] = j;
    std::vector<int> half;
    for (int j = 0; j < grid; j += 2) half.push_back(j);
    if (half.back() != grid - 1) half.push_back(grid - 1);

    const double t_fine = trapezoid(all);
    res.log_z = head + t_fine;
    const double head_slack = std::abs(head - f[0] * theta[0]);
    res.quadrature_error = std::abs(t_fine - trapezoid(half)) + head_slack;

    double var = 0.0;
    for (int j = 0; j < grid; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        double lo = j == 0 ? theta[0] : theta[sj - 1];
        double hi = j == grid - 1 ? theta[sj] : theta[sj + 1];
        double w = 0.5 * (hi - lo);
        var += w * w * fse[sj] * fse[sj];
    }
    res.mc_error = std::sqrt(var);
    res.error_budget = res.quadrature_error + 3.0 * res.mc_error;
    return res;
}

StructureReport structure_of_graph(const Graph& g, double q, std::uint64_t seed) {
    StructureReport r;
    r.states = 1;
    r.maxcut = max_cut_fraction(g, CutMethod::local_search, 4, seed);
    double dev = cut_norm_deviation(g, q, CutMethod::alternating, 4, seed);
    const double n = static_cast<double>(g.n());
    r.cutnorm_norm = q > 0.0 ? dev / (q * n * n) : 0.0;
    r.degree_spread = static_cast<double>(g.max_degree() - g.min_degree());
    return r;
}

StructureReport structure_report(const GibbsParams& params, int chains, std::int64_t sweeps,
                                 std::uint64_t seed) {
    if (chains < 1) throw std::domain_error("structure_report: chains must be >= 1");
    if (sweeps < 1) throw std::domain_error("structure_report: sweeps must be >= 1");
    if (params.n > 2000) throw SizeError("structure_report limited to n <= 2000");
    if (!(params.lambda > 0.0)) throw std::domain_error("structure_report: lambda must be positive");

    const double c = params.c();
    const double eta = ratefn::eta_of_zeta(c, params.zeta);
    const double q = c < ratefn::c_bar(eta)
                         ? ratefn::conditional_edge_density_q(c, eta, params.n)
                         : params.p();

    constexpr int kStatesPerChain = 10;
    const std::int64_t spacing = std::max<std::int64_t>(1, sweeps / kStatesPerChain);
    StructureReport acc;
    for (int ch = 0; ch < chains; ++ch) {
        CounterRng rng(StreamKey{seed, fnv1a64("estimators.structure"),
                                 static_cast<std::uint64_t>(ch), 0});
        glauber::MuChain chain(params, rng);
        for (std::int64_t i = 0; i < glauber::default_burnin_mu(params.n); ++i) chain.step();
        for (int s = 0; s < kStatesPerChain; ++s) {
            for (std::int64_t i = 0; i < spacing * comb2(params.n); ++i) chain.step();
            StructureReport one = structure_of_graph(
                chain.graph(), q,
                derive_stream(StreamKey{seed, fnv1a64("estimators.structure.obs"),
                                        static_cast<std::uint64_t>(ch),
                                        static_cast<std::uint64_t>(s)}));
            acc.maxcut += one.maxcut;
            acc.cutnorm_norm += one.cutnorm_norm;
            acc.degree_spread += one.degree_spread;
            ++acc.states;
        }
    }
    acc.maxcut /= acc.states;
    acc.cutnorm_norm /= acc.states;
    acc.degree_spread /= acc.states;
    acc.spread_bound = 4.0 * std::sqrt(static_cast<double>(params.n) * params.lambda) *
                       std::log(static_cast<double>(params.n));
    return acc;
}

TailEstimate lower_tail_mc(int n, double p, double eta, std::int64_t trials,
                           std::uint64_t seed) {
    if (n > 64) throw SizeError("lower_tail_mc limited to n <= 64");
    if (n < 3) throw std::domain_error("lower_tail_mc: n must be >= 3");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("lower_tail_mc: p must be in (0,1)");
    if (eta < 0.0) throw std::domain_error("lower_tail_mc: eta must be >= 0");
    if (trials < 1) throw std::domain_error("lower_tail_mc: trials must be >= 1");

    const double threshold = eta * static_cast<double>(comb3(n)) * p * p * p;
    CounterRng rng(StreamKey{seed, fnv1a64("estimators.lower_tail"), 0, 0});
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n));
    std::vector<std::pair<int, int>> edges;
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::fill(row.begin(), row.end(), 0);
        edges.clear();
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) {
                    row[static_cast<std::size_t>(u)] |= 1ULL << v;
                    row[static_cast<std::size_t>(v)] |= 1ULL << u;
                    edges.emplace_back(u, v);
                }
        std::int64_t paths = 0;  // triangles counted once per edge
        for (auto [u, v] : edges)
            paths += std::popcount(row[static_cast<std::size_t>(u)] &
                                   row[static_cast<std::size_t>(v)]);
        if (static_cast<double>(paths / 3) <= threshold) ++hits;
    }
    TailEstimate est;
    est.trials = trials;
    est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    return est;
}

double gnm_triangle_mean(int n, std::int64_t m, int samples, std::uint64_t seed) {
    if (n < 3) throw std::domain_error("gnm_triangle_mean: n must be >= 3");
    if (m < 0 || m > comb2(n)) throw std::domain_error("gnm_triangle_mean: bad edge count");
    if (samples < 1) throw std::domain_error("gnm_triangle_mean: samples must be >= 1");

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(comb2(n)));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);

    CounterRng rng(StreamKey{seed, fnv1a64("estimators.gnm"), 0, 0});
    double total = 0.0;
    std::vector<char> used(pairs.size());
    for (int s = 0; s < samples; ++s) {
        std::fill(used.begin(), used.end(), 0);
        Graph g(n);
        std::int64_t placed = 0;
        while (placed < m) {
            auto idx = static_cast<std::size_t>(rng.next_below(pairs.size()));
            if (used[idx]) continue;
            used[idx] = 1;
            g.set_edge(pairs[idx].first, pairs[idx].second, true);
            ++placed;
        }
        total += static_cast<double>(g.triangle_count());
    }
    return total / samples;
}

}  // namespace trigibbs::estimators
