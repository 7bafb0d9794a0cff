#include "trigibbs/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trigibbs/errors.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs::glauber {

namespace {

// (1-zeta)^d for d = 0..max_d, computed once per chain. Handles zeta = 1
// exactly: entry 0 is 1, the rest are 0.
std::vector<double> penalty_powers(double zeta, int max_d) {
    std::vector<double> pw(static_cast<std::size_t>(max_d) + 1);
    pw[0] = 1.0;
    for (int d = 1; d <= max_d; ++d) pw[static_cast<std::size_t>(d)] = pw[static_cast<std::size_t>(d - 1)] * (1.0 - zeta);
    return pw;
}

double include_probability(double lambda, double penalty) {
    double w = lambda * penalty;
    return w / (1.0 + w);
}

}  // namespace

std::int64_t default_burnin_mu(int n) {
    double s = 20.0 * static_cast<double>(n) * static_cast<double>(n) * std::log(static_cast<double>(n));
    return static_cast<std::int64_t>(std::ceil(std::max(s, 0.0)));
}

std::int64_t default_burnin_nu(int n) {
    double s = 20.0 * static_cast<double>(n) * std::log(static_cast<double>(n));
    return static_cast<std::int64_t>(std::ceil(std::max(s, 0.0)));
}

MuChain::MuChain(const GibbsParams& params, CounterRng rng)
    : MuChain(params, rng, Graph(params.n)) {}

MuChain::MuChain(const GibbsParams& params, CounterRng rng, Graph init)
    : params_(params), g_(std::move(init)), rng_(rng) {
    if (!params_.valid() || params_.n < 2)
        throw std::domain_error("MuChain: invalid parameters");
    if (g_.n() != params_.n) throw std::domain_error("MuChain: init graph has wrong order");
    pw_ = penalty_powers(params_.zeta, std::max(params_.n - 2, 0));
}

void MuChain::step() {
    int u = static_cast<int>(rng_.next_below(static_cast<std::uint64_t>(params_.n)));
    int v = static_cast<int>(rng_.next_below(static_cast<std::uint64_t>(params_.n - 1)));
    if (v >= u) ++v;
    step_with(u, v, rng_.next_double());
}

void MuChain::step_with(int u, int v, double unif) {
    int d = g_.codegree(u, v);
    g_.set_edge(u, v, unif < include_probability(params_.lambda, pw_[static_cast<std::size_t>(d)]));
    ++steps_;
}

NuChain::NuChain(const Graph& host, double lambda, double zeta, CounterRng rng)
    : host_(&host), occ_(static_cast<std::size_t>(host.n()), 0), lambda_(lambda), zeta_(zeta), rng_(rng) {
    if (host.n() < 1) throw std::domain_error("NuChain: empty host");
    if (lambda < 0.0 || zeta < 0.0 || zeta > 1.0)
        throw std::domain_error("NuChain: invalid parameters");
    pw_ = penalty_powers(zeta_, host.max_degree());
}

void NuChain::step() {
    int v = static_cast<int>(rng_.next_below(static_cast<std::uint64_t>(host_->n())));
    step_with(v, rng_.next_double());
}

void NuChain::step_with(int v, double unif) {
    int d = 0;
    for (int u : host_->neighbors(v)) d += occ_[static_cast<std::size_t>(u)];
    bool now = unif < include_probability(lambda_, pw_[static_cast<std::size_t>(d)]);
    bool was = occ_[static_cast<std::size_t>(v)] != 0;
    if (now != was) {
        size_ += now ? 1 : -1;
        internal_ += now ? d : -d;
        occ_[static_cast<std::size_t>(v)] = now ? 1 : 0;
    }
    ++steps_;
}

namespace {

double measure_mu(const Graph& g, const std::string& name) {
    if (name == "edges") return static_cast<double>(g.edge_count());
    if (name == "triangles") return static_cast<double>(g.triangle_count());
    if (name == "max_degree") return static_cast<double>(g.max_degree());
    if (name == "min_degree") return static_cast<double>(g.min_degree());
    if (name == "tagged_degree") return static_cast<double>(g.degree(0));
    throw ConfigError("unknown graph observable: " + name);
}

double measure_nu(const NuChain& chain, const std::string& name) {
    if (name == "size") return static_cast<double>(chain.size());
    if (name == "internal_edges") return static_cast<double>(chain.internal_edges());
    throw ConfigError("unknown subset observable: " + name);
}

void check_run_args(std::int64_t sweeps, std::int64_t thin) {
    if (sweeps < 1) throw std::domain_error("run_chain: sweeps must be >= 1");
    if (thin < 1) throw std::domain_error("run_chain: thin must be >= 1");
}

}  // namespace

RunRecord run_chain_mu(const GibbsParams& params, std::int64_t sweeps, std::int64_t thin,
                       const std::vector<std::string>& observables, std::uint64_t seed,
                       std::uint64_t chain_index, const Graph* init, std::int64_t burnin_steps) {
    check_run_args(sweeps, thin);
    CounterRng rng(StreamKey{seed, fnv1a64("glauber.mu"), chain_index, 0});
    MuChain chain = init ? MuChain(params, rng, *init) : MuChain(params, rng);
    for (const auto& name : observables) measure_mu(chain.graph(), name);  // validate early

    RunRecord rec;
    rec.params = params;
    rec.seed = seed;
    rec.chain_index = chain_index;
    rec.burnin_steps = burnin_steps < 0 ? default_burnin_mu(params.n) : burnin_steps;
    rec.steps_per_sweep = comb2(params.n);
    rec.sweeps = sweeps;
    rec.thin = thin;
    rec.observables = observables;
    rec.series.resize(observables.size());

    for (std::int64_t i = 0; i < rec.burnin_steps; ++i) chain.step();
    for (std::int64_t s = 1; s <= sweeps; ++s) {
        for (std::int64_t k = 0; k < rec.steps_per_sweep; ++k) chain.step();
        if (s % thin == 0)
            for (std::size_t i = 0; i < observables.size(); ++i)
                rec.series[i].push_back(measure_mu(chain.graph(), observables[i]));
    }
    return rec;
}

RunRecord run_chain_nu(const Graph& host, double lambda, double zeta, std::int64_t sweeps,
                       std::int64_t thin, const std::vector<std::string>& observables,
                       std::uint64_t seed, std::uint64_t chain_index, std::int64_t burnin_steps) {
    check_run_args(sweeps, thin);
    CounterRng rng(StreamKey{seed, fnv1a64("glauber.nu"), chain_index, 0});
    NuChain chain(host, lambda, zeta, rng);
    for (const auto& name : observables) measure_nu(chain, name);  // validate early

    RunRecord rec;
    rec.params = GibbsParams{host.n(), lambda, zeta};
    rec.seed = seed;
    rec.chain_index = chain_index;
    rec.burnin_steps = burnin_steps < 0 ? default_burnin_nu(host.n()) : burnin_steps;
    rec.steps_per_sweep = host.n();
    rec.sweeps = sweeps;
    rec.thin = thin;
    rec.observables = observables;
    rec.series.resize(observables.size());

    for (std::int64_t i = 0; i < rec.burnin_steps; ++i) chain.step();
    for (std::int64_t s = 1; s <= sweeps; ++s) {
        for (std::int64_t k = 0; k < rec.steps_per_sweep; ++k) chain.step();
        if (s % thin == 0)
            for (std::size_t i = 0; i < observables.size(); ++i)
                rec.series[i].push_back(measure_nu(chain, observables[i]));
    }
    return rec;
}

namespace {

// Law of the degree of v when its incident edges are resampled conditionally
// on the rest of the sample: enumerate all neighborhoods, recount triangles
// on the full graph each time.
std::vector<double> degree_law_by_recount(const Graph& sample, int v, double lambda,
                                          double zeta) {
    const int n = sample.n();
    std::vector<int> others;
    for (int u = 0; u < n; ++u)
        if (u != v) others.push_back(u);
    Graph base = sample;
    for (int u : std::vector<int>(base.neighbors(v)))  // copy: set_edge mutates the list
        base.set_edge(v, u, false);

    std::vector<double> law(static_cast<std::size_t>(n), 0.0);
    const std::uint32_t total = 1u << (n - 1);
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        Graph g2 = base;
        int deg = 0;
        for (int b = 0; b < n - 1; ++b)
            if (mask & (1u << b)) {
                g2.set_edge(v, others[static_cast<std::size_t>(b)], true);
                ++deg;
            }
        double w = std::pow(lambda, deg) * std::pow(1.0 - zeta, static_cast<double>(g2.triangle_count()));
        law[static_cast<std::size_t>(deg)] += w;
    }
    double norm = 0.0;
    for (double x : law) norm += x;
    for (double& x : law) x /= norm;
    return law;
}

// Occupancy-size law of the subset measure on the host: weights
// lambda^{|S|} (1-zeta)^{edges of host inside S}.
std::vector<double> subset_size_law(const Graph& host, double lambda, double zeta) {
    const int m = host.n();
    std::vector<double> law(static_cast<std::size_t>(m) + 1, 0.0);
    const std::uint32_t total = 1u << m;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        int size = 0, inside = 0;
        for (int a = 0; a < m; ++a) {
            if (!(mask & (1u << a))) continue;
            ++size;
            for (int b = a + 1; b < m; ++b)
                if ((mask & (1u << b)) && host.has_edge(a, b)) ++inside;
        }
        law[static_cast<std::size_t>(size)] +=
            std::pow(lambda, size) * std::pow(1.0 - zeta, inside);
    }
    double norm = 0.0;
    for (double x : law) norm += x;
    for (double& x : law) x /= norm;
    return law;
}

Graph delete_vertex(const Graph& g, int v) {
    Graph h(g.n() - 1);
    for (int u = 0; u < g.n(); ++u) {
        if (u == v) continue;
        for (int w : g.neighbors(u)) {
            if (w == v || w <= u) continue;
            int a = u < v ? u : u - 1;
            int b = w < v ? w : w - 1;
            h.set_edge(a, b, true);
        }
    }
    return h;
}

}  // namespace

double local_conditioning_check(const GibbsParams& params, int v, int samples,
                                std::uint64_t seed) {
    if (params.n > 6) throw SizeError("local_conditioning_check limited to n <= 6");
    if (!params.valid() || params.n < 2) throw std::domain_error("local_conditioning_check: invalid params");
    if (v < 0 || v >= params.n) throw std::domain_error("local_conditioning_check: bad vertex");
    if (samples < 1) throw std::domain_error("local_conditioning_check: samples must be >= 1");

    CounterRng rng(StreamKey{seed, fnv1a64("glauber.local_conditioning"), 0, 0});
    MuChain chain(params, rng);
    for (std::int64_t i = 0; i < default_burnin_mu(params.n); ++i) chain.step();

    const std::int64_t spacing = comb2(params.n);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (std::int64_t k = 0; k < spacing; ++k) chain.step();
        std::vector<double> a =
            degree_law_by_recount(chain.graph(), v, params.lambda, params.zeta);
        std::vector<double> b =
            subset_size_law(delete_vertex(chain.graph(), v), params.lambda, params.zeta);
        double tv = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k) tv += std::abs(a[k] - b[k]);
        worst = std::max(worst, 0.5 * tv);
    }
    return worst;
}

CouplingRecord contraction_estimate(const GibbsParams& params, std::int64_t pairs,
                                    std::int64_t horizon, std::uint64_t seed) {
    if (!params.valid() || params.n < 2)
        throw std::domain_error("contraction_estimate: invalid params");
    if (pairs < 1 || horizon < 1)
        throw std::domain_error("contraction_estimate: pairs and horizon must be >= 1");

    const int n = params.n;
    CouplingRecord rec;
    double c = params.c();
    rec.xi = 1.0 - 2.0 * params.zeta * c * c;
    rec.bound_per_step = -rec.xi / (static_cast<double>(n) * static_cast<double>(n));
    rec.contraction_regime = rec.xi > 0.0;
    std::vector<double> total(static_cast<std::size_t>(horizon) + 1, 0.0);

    for (std::int64_t j = 0; j < pairs; ++j) {
        CounterRng rng(StreamKey{seed, fnv1a64("glauber.coupling"),
                                 static_cast<std::uint64_t>(j), 0});
        int u0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int v0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
        if (v0 >= u0) ++v0;
        Graph init(n);
        init.set_edge(u0, v0, true);
        // Private chain streams are never drawn from: every update below goes
        // through step_with on shared randomness.
        MuChain x(params, CounterRng(rng.next_u64()));
        MuChain y(params, CounterRng(rng.next_u64()), init);

        std::int64_t dist = 1;
        total[0] += static_cast<double>(dist);
        for (std::int64_t t = 1; t <= horizon; ++t) {
            int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
            if (v >= u) ++v;
            double unif = rng.next_double();
            bool before = x.graph().has_edge(u, v) != y.graph().has_edge(u, v);
            x.step_with(u, v, unif);
            y.step_with(u, v, unif);
            bool after = x.graph().has_edge(u, v) != y.graph().has_edge(u, v);
            dist += static_cast<int>(after) - static_cast<int>(before);
            total[static_cast<std::size_t>(t)] += static_cast<double>(dist);
        }
    }

    rec.hamming_trace.resize(total.size());
    for (std::size_t t = 0; t < total.size(); ++t)
        rec.hamming_trace[t] = total[t] / static_cast<double>(pairs);

    // Log-linear fit over the positive prefix of the mean trace.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::int64_t m = 0;
    for (std::size_t t = 0; t < rec.hamming_trace.size(); ++t) {
        if (rec.hamming_trace[t] <= 0.0) break;
        double xt = static_cast<double>(t), yt = std::log(rec.hamming_trace[t]);
        sx += xt;
        sy += yt;
        sxx += xt * xt;
        sxy += xt * yt;
        ++m;
    }
    double denom = static_cast<double>(m) * sxx - sx * sx;
    rec.slope_estimate = m >= 2 ? (static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;
    return rec;
}

std::pair<int, int> domination_step(MuChain& penalized, MuChain& reference, CounterRng& rng) {
    if (reference.params().zeta != 0.0 || reference.params().n != penalized.params().n ||
        reference.params().lambda != penalized.params().lambda)
        throw std::domain_error("domination_step: reference must share lambda at zeta = 0");
    const int n = penalized.params().n;
    int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
    if (v >= u) ++v;
    double unif = rng.next_double();
    penalized.step_with(u, v, unif);
    reference.step_with(u, v, unif);
    return {u, v};
}

}  // namespace trigibbs::glauber
