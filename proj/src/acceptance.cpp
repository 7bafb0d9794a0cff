#include "trigibbs/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "trigibbs/cluster.hpp"
#include "trigibbs/errors.hpp"
#include "trigibbs/estimators.hpp"
#include "trigibbs/exact.hpp"
#include "trigibbs/glauber.hpp"
#include "trigibbs/graph.hpp"
#include "trigibbs/ratefn.hpp"
#include "trigibbs/rng.hpp"
#include "trigibbs/specfun.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs::acceptance {

namespace {

std::string fm(double v, int prec = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

using Outcome = std::pair<bool, std::string>;

Outcome crit_constants(std::uint64_t) {
    const double es = ratefn::eta_star();
    const double gb = ratefn::gnm_threshold_b(0.0);
    const double cx = ratefn::crossing_point(0.0, [](double c) { return -c / 4.0; });
    const bool ok = std::abs(es - 0.49928) <= 1e-4 && std::abs(gb - 0.48117) <= 1e-4 &&
                    std::abs(cx - 4.342) <= 0.01;
    std::ostringstream d;
    d << "eta_star=" << fm(es, 7) << " (0.49928+-1e-4), threshold_b=" << fm(gb, 7)
      << " (0.48117+-1e-4), crossing=" << fm(cx, 6) << " (4.342+-0.01)";
    return {ok, d.str()};
}

Outcome crit_oracle_small(std::uint64_t seed) {
    double worst_z = 0.0;
    std::string worst_cell = "none";
    for (int n = 3; n <= 6; ++n)
        for (double lambda : {0.1, 0.3})
            for (double zeta : {0.0, 0.5, 1.0}) {
                GibbsParams pr{n, lambda, zeta};
                exact::ExactSummary ex = exact::exact_Z(pr);
                estimators::DensityReport rep =
                    estimators::estimate_densities(pr, 2, 6000, seed);
                auto zscore = [](double mean, double se, double target) {
                    double diff = std::abs(mean - target);
                    if (diff == 0.0) return 0.0;
                    return se > 0.0 ? diff / se : std::numeric_limits<double>::infinity();
                };
                double ze = zscore(rep.mean_edges, rep.stderr_edges, ex.expect_size);
                double zt = zscore(rep.mean_triangles, rep.stderr_triangles,
                                   ex.expect_conflicts);
                double z = std::max(ze, zt);
                if (z > worst_z) {
                    worst_z = z;
                    std::ostringstream cell;
                    cell << "(n=" << n << ",lambda=" << lambda << ",zeta=" << zeta << ")";
                    worst_cell = cell.str();
                }
            }
    // P(X = 0) under independent edges equals the triangle-free weight sum
    // times (1-p)^{C(n,2)}, with lambda = p/(1-p); n = 5, p = 0.2.
    const double lhs = exact::exact_lower_tail(5, 0.2, 0.0);
    const double rhs =
        std::exp(static_cast<double>(comb2(5)) * std::log1p(-0.2) +
                 exact::exact_Z({5, 0.25, 1.0}).log_partition);
    const double id_res = std::abs(lhs - rhs);
    const bool ok = worst_z <= 3.0 && id_res <= 1e-12;
    std::ostringstream d;
    d << "worst |mcmc-exact| = " << fm(worst_z, 4) << " se (<=3) at " << worst_cell
      << ", conditioning identity residual=" << fm(id_res, 3) << " (<=1e-12)";
    return {ok, d.str()};
}

Outcome crit_derivatives(std::uint64_t) {
    double worst = 0.0;
    const Graph host = cycle_graph(10);
    for (double lambda : {0.1, 0.3})
        for (double zeta : {0.0, 0.5}) {
            auto rz = exact::derivative_identity_check({5, lambda, zeta}, 1e-4);
            auto rx = exact::derivative_identity_check_subsets(host, lambda, zeta, 1e-4);
            worst = std::max({worst, rz.size, rz.conflicts, rx.size, rx.conflicts});
        }
    std::ostringstream d;
    d << "max residual=" << fm(worst, 4) << " (<=1e-6) at step 1e-4";
    return {worst <= 1e-6, d.str()};
}

Outcome crit_cluster(std::uint64_t seed) {
    static const double kFact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    CounterRng gen(StreamKey{seed, fnv1a64("acceptance.cluster"), 0, 0});
    const double zetas[3] = {0.3, 0.7, 1.0};
    bool ok = true;
    double worst_ratio = 0.0;       // |trunc - exact| / tail_bound
    double worst_penrose = -1e300;  // max of |k! phi| - bound
    std::int64_t clusters_checked = 0;
    for (int gidx = 0; gidx < 20; ++gidx) {
        const int n = 5 + static_cast<int>(gen.next_below(8));
        Graph h(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (h.degree(u) < 4 && h.degree(v) < 4 && gen.bernoulli(0.35))
                    h.set_edge(u, v, true);
        const double zeta = zetas[gidx % 3];
        const int delta = std::max(1, h.max_degree());
        const double lambda =
            0.8 * (0.4 + 0.6 * gen.next_double()) / (std::exp(1.0) * (1.0 + zeta * delta));

        cluster::TruncationResult tr = cluster::truncated_log_xi(h, lambda, zeta, 7);
        const double ex = exact::exact_Xi(h, lambda, zeta).log_partition;
        const double err = std::abs(tr.value - ex);
        if (!(err <= tr.tail_bound)) ok = false;
        if (tr.tail_bound > 0.0) worst_ratio = std::max(worst_ratio, err / tr.tail_bound);

        auto visit = [&](const cluster::Cluster& cl) {
            const int k = cl.size();
            const double lhs = std::abs(kFact[k] * cluster::ursell_convolution(cl, zeta));
            const double rhs = cluster::penrose_bound(cl, zeta);
            // 1e-9 relative headroom for the LU determinant rounding
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) ok = false;
            worst_penrose = std::max(worst_penrose, lhs - rhs);
            ++clusters_checked;
        };
        try {
            cluster::enumerate_clusters(h, 7, visit, 25000);
        } catch (const BudgetError&) {
            // budget cap reached; every cluster streamed before it was checked
        }
    }
    std::ostringstream d;
    d << "max |trunc-exact|/tail=" << fm(worst_ratio, 4) << " (<=1), penrose margin max="
      << fm(worst_penrose, 3) << " (<=0) over " << clusters_checked << " clusters";
    return {ok, d.str()};
}

Outcome crit_density(std::uint64_t seed) {
    const auto pa = GibbsParams::from_scaled(400, 0.4, 1.0);
    const auto ra = estimators::estimate_densities(pa, 2, 600, seed);
    const double bhat = ra.mean_degree / std::sqrt(400.0);
    const bool oka = std::abs(bhat / 0.3532 - 1.0) <= 0.05;

    const double zeta = ratefn::solve_zeta(0.5, 0.5);
    const auto pb = GibbsParams::from_scaled(400, 0.5, zeta);
    const auto rb = estimators::estimate_densities(pb, 2, 600, seed);
    const double n32 = std::pow(400.0, 1.5);
    const double tri_target = 0.5 * 0.125 / 6.0 * n32;
    const double edge_target =
        0.5 * std::sqrt(specfun::lambert_w0(2.0 * zeta * 0.25) / (2.0 * zeta)) * n32;
    const double tri_rel = rb.mean_triangles / tri_target - 1.0;
    const double edge_rel = rb.mean_edges / edge_target - 1.0;
    const bool okb = std::abs(tri_rel) <= 0.10 && std::abs(edge_rel) <= 0.05;

    std::ostringstream d;
    d << "degree/sqrt(n)=" << fm(bhat, 5) << " (0.3532+-5%), EX rel=" << fm(tri_rel, 3)
      << " (+-10%), E|G| rel=" << fm(edge_rel, 3) << " (+-5%)";
    return {oka && okb, d.str()};
}

Outcome crit_integration(std::uint64_t seed) {
    const auto ra = estimators::log_z_by_integration(400, 0.4, 1.0, 16, 2, seed);
    const double w = specfun::lambert_w0(2.0 * 0.16);
    const double target = (std::pow(w, 1.5) + 3.0 * std::sqrt(w)) / (6.0 * std::sqrt(2.0));
    const double rel = ra.log_z / std::pow(400.0, 1.5) / target - 1.0;
    const bool oka = std::abs(rel) <= 0.10;

    const double ex = exact::exact_Z({6, 0.3, 0.5}).log_partition;
    const auto rb =
        estimators::log_z_by_integration(6, 0.3 * std::sqrt(6.0), 0.5, 16, 2, seed);
    const double err = std::abs(rb.log_z - ex);
    const bool okb = err <= rb.error_budget;

    std::ostringstream d;
    d << "n=400 rel=" << fm(rel, 3) << " (+-10%), n=6 |err|=" << fm(err, 3)
      << " <= budget " << fm(rb.error_budget, 3);
    return {oka && okb, d.str()};
}

Outcome crit_structure(std::uint64_t seed) {
    const auto pa = GibbsParams::from_scaled(400, 0.4, 1.0);
    const auto rep = estimators::structure_report(pa, 2, 100, seed);
    const double q = ratefn::conditional_edge_density_q(0.4, 0.0, 400);
    CounterRng gen(StreamKey{seed, fnv1a64("acceptance.structure_null"), 0, 0});
    double null_cutnorm = 0.0;
    constexpr int kNullStates = 20;
    for (int s = 0; s < kNullStates; ++s) {
        Graph g(400);
        for (int u = 0; u < 400; ++u)
            for (int v = u + 1; v < 400; ++v)
                if (gen.bernoulli(2.0 * q)) g.set_edge(u, v, true);
        null_cutnorm += estimators::structure_of_graph(
                            g, q,
                            derive_stream(StreamKey{seed,
                                                    fnv1a64("acceptance.structure_null.obs"),
                                                    static_cast<std::uint64_t>(s), 0}))
                            .cutnorm_norm;
    }
    null_cutnorm /= kNullStates;
    const bool ok =
        rep.maxcut >= 0.5 && rep.maxcut <= 0.56 && rep.cutnorm_norm < null_cutnorm;
    std::ostringstream d;
    d << "maxcut=" << fm(rep.maxcut, 4) << " (in [0.5,0.56]), cutnorm/qn^2="
      << fm(rep.cutnorm_norm, 4) << " < null(p=2q)=" << fm(null_cutnorm, 4);
    return {ok, d.str()};
}

Outcome crit_dynamics(std::uint64_t seed) {
    // Detailed balance over the 8 graphs on 3 vertices; pairs indexed
    // e0=(0,1), e1=(0,2), e2=(1,2); third vertex gives the codegree.
    double db_worst = 0.0;
    for (auto [lambda, zeta] :
         {std::pair{0.3, 0.5}, std::pair{0.7, 0.25}, std::pair{0.3, 1.0}}) {
        double w[8], total = 0.0;
        for (int m = 0; m < 8; ++m) {
            int edges = __builtin_popcount(static_cast<unsigned>(m));
            w[m] = std::pow(lambda, edges) * (m == 7 ? 1.0 - zeta : 1.0);
            total += w[m];
        }
        auto has = [](int m, int e) { return (m >> e) & 1; };
        for (int m = 0; m < 8; ++m)
            for (int e = 0; e < 3; ++e) {
                // codegree of pair e is 1 iff both other pairs are present
                int others = 7 & ~(1 << e);
                int codeg = (m & others) == others ? 1 : 0;
                double winc = lambda * std::pow(1.0 - zeta, codeg);
                int to = m ^ (1 << e);
                double p_fwd = (has(to, e) ? winc / (1.0 + winc) : 1.0 / (1.0 + winc)) / 3.0;
                double p_bwd = (has(m, e) ? winc / (1.0 + winc) : 1.0 / (1.0 + winc)) / 3.0;
                db_worst = std::max(
                    db_worst, std::abs(w[m] / total * p_fwd - w[to] / total * p_bwd));
            }
    }
    const bool ok_db = db_worst <= 1e-12;

    // zeta = 1 support: the chain must never create a triangle.
    glauber::MuChain support({30, 0.5, 1.0},
                             CounterRng(StreamKey{seed, fnv1a64("acceptance.support"), 0, 0}));
    std::int64_t tri_seen = 0;
    for (std::int64_t t = 0; t < 10'000'000; ++t) {
        support.step();
        if (support.graph().triangle_count() != 0) ++tri_seen;
    }
    const bool ok_support = tri_seen == 0;

    // shared-randomness domination against the free chain
    glauber::MuChain pen({30, 0.4, 0.6},
                         CounterRng(StreamKey{seed, fnv1a64("acceptance.dom.pen"), 0, 0}));
    glauber::MuChain ref({30, 0.4, 0.0},
                         CounterRng(StreamKey{seed, fnv1a64("acceptance.dom.ref"), 0, 0}));
    CounterRng shared(StreamKey{seed, fnv1a64("acceptance.domination"), 0, 0});
    std::int64_t viol = 0;
    for (std::int64_t t = 0; t < 1'000'000; ++t) {
        auto [u, v] = glauber::domination_step(pen, ref, shared);
        if (pen.graph().has_edge(u, v) && !ref.graph().has_edge(u, v)) ++viol;
        if (t % 100'000 == 0)
            for (int a = 0; a < 30; ++a)
                for (int b : pen.graph().neighbors(a))
                    if (b > a && !ref.graph().has_edge(a, b)) ++viol;
    }
    const bool ok_dom = viol == 0;

    std::ostringstream d;
    d << "detailed balance max|pi P - pi P|=" << fm(db_worst, 3)
      << " (<=1e-12), triangles seen at zeta=1: " << tri_seen
      << "/1e7 steps, domination violations: " << viol << "/1e6 steps";
    return {ok_db && ok_support && ok_dom, d.str()};
}

Outcome crit_asymptotics(std::uint64_t) {
    const double ratio = ratefn::rate_gnp(0.1, 0.0).rate / ratefn::poisson_bound(0.1, 0.0);
    const bool ok1 = std::abs(ratio - 1.0) <= 0.02;
    const double diff =
        std::abs(ratefn::rate_gnp(100.0, 0.6).rate / 100.0 - ratefn::large_c_limit(0.6));
    const bool ok2 = diff <= 0.01;
    double worst = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double c = 0.05 * k;
        worst = std::max(worst,
                         std::abs(ratefn::rate_gnp(c, 0.0).rate - ratefn::rate_trianglefree(c)));
    }
    const bool ok3 = worst <= 1e-12;
    std::ostringstream d;
    d << "poisson ratio at c=0.1: " << fm(ratio, 5) << " (1+-0.02), large-c gap="
      << fm(diff, 3) << " (<=0.01), eta=0 identity max|diff|=" << fm(worst, 3)
      << " (<=1e-12)";
    return {ok1 && ok2 && ok3, d.str()};
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed, std::ostream& out) {
    static const char* kNames[11] = {"",
                                     "constants",
                                     "oracle-small",
                                     "derivatives",
                                     "cluster",
                                     "density",
                                     "integration",
                                     "structure",
                                     "dynamics",
                                     "asymptotics",
                                     "scope"};
    if (id < 1 || id > 10) throw std::invalid_argument("criterion id must be 1..10");
    CriterionResult r;
    r.id = id;
    r.name = kNames[id];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{true, ""};
    switch (id) {
        case 1: o = crit_constants(seed); break;
        case 2: o = crit_oracle_small(seed); break;
        case 3: o = crit_derivatives(seed); break;
        case 4: o = crit_cluster(seed); break;
        case 5: o = crit_density(seed); break;
        case 6: o = crit_integration(seed); break;
        case 7: o = crit_structure(seed); break;
        case 8: o = crit_dynamics(seed); break;
        case 9: o = crit_asymptotics(seed); break;
        case 10:
            r.informational = true;
            o = {true,
                 "direct simulation cannot reach the exp(-Theta(n^{3/2})) tail regime at "
                 "any feasible n; the headline limit claims rest on criteria 2, 5, 6, 9"};
            break;
    }
    r.pass = o.first;
    r.detail = o.second;
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[2048];
    std::snprintf(line, sizeof line, "%s %2d %s: %s [%.1f s]",
                  r.informational ? "NOTE" : (r.pass ? "PASS" : "FAIL"), r.id,
                  r.name.c_str(), r.detail.c_str(), r.seconds);
    out << line << std::endl;
    return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, std::ostream& out) {
    std::vector<CriterionResult> rs;
    for (int id = 1; id <= 10; ++id) rs.push_back(run_criterion(id, seed, out));
    return rs;
}

bool all_pass(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.informational && !r.pass) return false;
    return true;
}

}  // namespace trigibbs::acceptance
