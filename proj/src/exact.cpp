#include "trigibbs/exact.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "trigibbs/errors.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs::exact {

namespace {

// Online log-sum-exp accumulator for sum(exp(l_i) * v_i) alongside the
// partition sum; keeps everything scaled by the running max exponent.
struct LogAccum {
    double max_log = -std::numeric_limits<double>::infinity();
    double sum = 0.0;       // sum exp(l - max_log)
    double sum_size = 0.0;  // sum size * exp(l - max_log)
    double sum_conf = 0.0;  // sum conflicts * exp(l - max_log)

    void add(double l, double size, double conf) {
        if (l == -std::numeric_limits<double>::infinity()) return;
        if (l > max_log) {
            double scale = sum > 0.0 ? std::exp(max_log - l) : 0.0;
            sum = sum * scale + 1.0;
            sum_size = sum_size * scale + size;
            sum_conf = sum_conf * scale + conf;
            max_log = l;
        } else {
            double w = std::exp(l - max_log);
            sum += w;
            sum_size += size * w;
            sum_conf += conf * w;
        }
    }

    ExactSummary summary() const {
        return {max_log + std::log(sum), sum_size / sum, sum_conf / sum};
    }
};

// term log-weight; guards 0 * (-inf) when a count is zero
double weight_log(std::int64_t size, double log_a, std::int64_t conf, double log_b) {
    double l = 0.0;
    if (size > 0) l += static_cast<double>(size) * log_a;
    if (conf > 0) l += static_cast<double>(conf) * log_b;
    return l;
}

// Gray-code walk over all 2^C(n,2) graphs; visit(edges, triangles) is
// called for every state, starting with the empty graph.
template <class Visit>
void enumerate_graphs(int n, Visit&& visit) {
    if (n > 7) throw SizeError("exact enumeration limited to n <= 7");
    if (n < 1) throw SizeError("exact enumeration needs n >= 1");
    const int m = static_cast<int>(comb2(n));
    std::vector<std::pair<int, int>> pair_of(m);
    int idx = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pair_of[idx++] = {u, v};
    Graph g(n);
    visit(g.edge_count(), g.triangle_count());
    const std::uint64_t total = 1ULL << m;
    for (std::uint64_t i = 1; i < total; ++i) {
        auto [u, v] = pair_of[std::countr_zero(i)];
        g.toggle_edge(u, v);
        visit(g.edge_count(), g.triangle_count());
    }
}

}  // namespace

ExactSummary exact_Z(const GibbsParams& params) {
    if (!params.valid()) throw std::invalid_argument("exact_Z: invalid parameters");
    const double log_lambda = std::log(params.lambda);
    const double log_1mz = std::log1p(-params.zeta);
    LogAccum acc;
    enumerate_graphs(params.n, [&](std::int64_t e, std::int64_t t) {
        acc.add(weight_log(e, log_lambda, t, log_1mz), static_cast<double>(e),
                static_cast<double>(t));
    });
    return acc.summary();
}

namespace {

// Subset Gray walk shared by exact_Xi and its finite-difference probes;
// tolerates zeta slightly outside [0,1] (the sum stays well defined for
// zeta < 1, which central differences at the boundary need).
LogAccum xi_accumulate(const Graph& H, double lambda, double zeta) {
    const int n = H.n();
    if (n > 22) throw SizeError("exact_Xi limited to |V| <= 22");
    std::vector<std::uint32_t> nbr_mask(n, 0);
    for (int v = 0; v < n; ++v)
        for (int u : H.neighbors(v)) nbr_mask[v] |= 1u << u;

    const double log_lambda = std::log(lambda);
    const double log_1mz = std::log1p(-zeta);
    LogAccum acc;
    std::uint32_t in_set = 0;
    std::int64_t size = 0, internal = 0;
    acc.add(0.0, 0.0, 0.0);  // empty subset
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        int v = std::countr_zero(i);
        int touching = std::popcount(nbr_mask[v] & in_set);
        if (in_set & (1u << v)) {
            in_set ^= 1u << v;
            --size;
            internal -= touching;
        } else {
            in_set ^= 1u << v;
            ++size;
            internal += touching;
        }
        acc.add(weight_log(size, log_lambda, internal, log_1mz), static_cast<double>(size),
                static_cast<double>(internal));
    }
    return acc;
}

}  // namespace

ExactSummary exact_Xi(const Graph& H, double lambda, double zeta) {
    if (lambda < 0.0 || zeta < 0.0 || zeta > 1.0)
        throw std::invalid_argument("exact_Xi: invalid parameters");
    return xi_accumulate(H, lambda, zeta).summary();
}

double exact_lower_tail(int n, double p, double eta) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("exact_lower_tail: p must be in (0,1)");
    if (eta < 0.0) throw std::invalid_argument("exact_lower_tail: eta must be >= 0");
    const double lambda = p / (1.0 - p);
    const double log_lambda = std::log(lambda);
    const double threshold = eta * static_cast<double>(comb3(n)) * p * p * p;
    LogAccum all, tail;
    enumerate_graphs(n, [&](std::int64_t e, std::int64_t t) {
        double l = weight_log(e, log_lambda, 0, 0.0);
        all.add(l, 0.0, 0.0);
        if (static_cast<double>(t) <= threshold) tail.add(l, 0.0, 0.0);
    });
    // P = (1-p)^C(n,2) * sum lambda^{|G|} over qualifying graphs
    double log_p = static_cast<double>(comb2(n)) * std::log1p(-p) + tail.max_log +
                   std::log(tail.sum);
    return std::exp(log_p);
}

namespace {

double log_z_at(const GibbsParams& base, double lambda, double zeta) {
    // zeta may legitimately poke slightly below 0 in a central difference;
    // the partition sum is still well defined there.
    const double log_lambda = std::log(lambda);
    const double log_1mz = std::log1p(-zeta);
    LogAccum acc;
    enumerate_graphs(base.n, [&](std::int64_t e, std::int64_t t) {
        acc.add(weight_log(e, log_lambda, t, log_1mz), 0.0, 0.0);
    });
    return acc.max_log + std::log(acc.sum);
}

double log_xi_at(const Graph& H, double lambda, double zeta) {
    LogAccum acc = xi_accumulate(H, lambda, zeta);
    return acc.max_log + std::log(acc.sum);
}

}  // namespace

DerivativeResiduals derivative_identity_check(const GibbsParams& params, double step) {
    if (!(step > 0.0) || step > params.lambda / 10.0)
        throw std::domain_error("derivative_identity_check: step must be in (0, lambda/10]");
    ExactSummary s = exact_Z(params);
    DerivativeResiduals r;
    double dlam =
        (log_z_at(params, params.lambda + step, params.zeta) -
         log_z_at(params, params.lambda - step, params.zeta)) /
        (2.0 * step);
    r.size = std::abs(params.lambda * dlam - s.expect_size);
    if (params.zeta + step >= 1.0)
        throw std::domain_error("derivative_identity_check: zeta + step must stay below 1");
    double dzeta =
        (log_z_at(params, params.lambda, params.zeta + step) -
         log_z_at(params, params.lambda, params.zeta - step)) /
        (2.0 * step);
    r.conflicts = std::abs(-(1.0 - params.zeta) * dzeta - s.expect_conflicts);
    return r;
}

DerivativeResiduals derivative_identity_check_subsets(const Graph& H, double lambda, double zeta,
                                                      double step) {
    if (!(step > 0.0) || step > lambda / 10.0)
        throw std::domain_error("derivative_identity_check_subsets: step must be in (0, lambda/10]");
    ExactSummary s = exact_Xi(H, lambda, zeta);
    DerivativeResiduals r;
    double dlam = (log_xi_at(H, lambda + step, zeta) - log_xi_at(H, lambda - step, zeta)) /
                  (2.0 * step);
    r.size = std::abs(lambda * dlam - s.expect_size);
    if (zeta + step >= 1.0)
        throw std::domain_error("derivative_identity_check_subsets: zeta + step must stay below 1");
    double dzeta = (log_xi_at(H, lambda, zeta + step) - log_xi_at(H, lambda, zeta - step)) /
                   (2.0 * step);
    r.conflicts = std::abs(-(1.0 - zeta) * dzeta - s.expect_conflicts);
    return r;
}

}  // namespace trigibbs::exact
