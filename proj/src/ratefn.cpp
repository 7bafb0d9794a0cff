#include "trigibbs/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "trigibbs/errors.hpp"
#include "trigibbs/specfun.hpp"
#include "trigibbs/util.hpp"

namespace trigibbs::ratefn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_eta_open(double eta, const char* who) {
    if (!(eta >= 0.0 && eta < 1.0)) throw std::domain_error(std::string(who) + ": eta must be in [0,1)");
}

void require_eta_closed(double eta, const char* who) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error(std::string(who) + ": eta must be in [0,1]");
}

// Left side of the tilt equation; W(x)/x = e^{-W(x)} keeps it stable as zeta->0.
double tilt_lhs(double c, double zeta) {
    if (zeta == 0.0) return 1.0;
    return (1.0 - zeta) * std::exp(-1.5 * specfun::lambert_w0(2.0 * zeta * c * c));
}

}  // namespace

const char* to_string(Regime r) {
    return r == Regime::inside_window ? "inside_window" : "outside_validity";
}

double eta_star() {
    static const double v = std::exp(-1.5 * specfun::lambert_w0(2.0 / std::exp(1.0)));
    return v;
}

double c_bar(double eta) {
    require_eta_closed(eta, "c_bar");
    double es = eta_star();
    if (eta >= es) return kInf;
    return 1.0 / std::sqrt(std::exp(1.0) * (1.0 - eta / es));
}

double solve_zeta(double c, double eta) {
    if (!(c > 0.0)) throw std::domain_error("solve_zeta: c must be positive");
    require_eta_open(eta, "solve_zeta");
    if (eta == 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;  // tilt_lhs(lo) = 1 > eta, tilt_lhs(hi) = 0 < eta
    while (true) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (tilt_lhs(c, mid) > eta ? lo : hi) = mid;
    }
    return hi;
}

double eta_of_zeta(double c, double zeta) {
    if (!(c > 0.0)) throw std::domain_error("eta_of_zeta: c must be positive");
    if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::domain_error("eta_of_zeta: zeta must be in [0,1]");
    return tilt_lhs(c, zeta);
}

RateResult rate_gnp(double c, double eta) {
    if (!(c > 0.0)) throw std::domain_error("rate_gnp: c must be positive");
    require_eta_open(eta, "rate_gnp");
    RateResult r;
    r.zeta = solve_zeta(c, eta);
    double w = specfun::lambert_w0(2.0 * r.zeta * c * c);
    double sw = std::sqrt(w);
    double head = (w * sw + 3.0 * sw) / (3.0 * std::sqrt(2.0 * r.zeta));
    double tilt = eta == 0.0 ? 0.0 : std::log1p(-r.zeta) * eta * c * c * c / 3.0;
    r.rate = 0.5 * (head - tilt - c);
    r.q_coeff = c * std::exp(-0.5 * w);
    r.regime = c < c_bar(eta) ? Regime::inside_window : Regime::outside_validity;
    return r;
}

double rate_trianglefree(double c) {
    if (!(c > 0.0)) throw std::domain_error("rate_trianglefree: c must be positive");
    double w = specfun::lambert_w0(2.0 * c * c);
    double sw = std::sqrt(w);
    return 0.5 * ((w * sw + 3.0 * sw) / (3.0 * std::sqrt(2.0)) - c);
}

double rate_gnm(double b, double eta) {
    if (!(b > 0.0)) throw std::domain_error("rate_gnm: b must be positive");
    require_eta_open(eta, "rate_gnm");
    return -(b * b * b / 6.0) * specfun::entropy_h(eta);
}

Regime gnm_regime(double b, double eta) {
    return b < gnm_threshold_b(eta) ? Regime::inside_window : Regime::outside_validity;
}

double gnm_threshold_b(double eta) {
    require_eta_open(eta, "gnm_threshold_b");
    double target = c_bar(eta);
    if (!std::isfinite(target)) return kInf;
    auto value = [&](double b) { return b * std::exp((1.0 - eta) * b * b); };
    double lo = 0.0, hi = 1.0;
    while (value(hi) < target) hi *= 2.0;
    while (true) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (value(mid) < target ? lo : hi) = mid;
    }
    return hi;
}

double poisson_bound(double c, double eta) {
    if (!(c > 0.0)) throw std::domain_error("poisson_bound: c must be positive");
    require_eta_open(eta, "poisson_bound");
    return -(c * c * c / 6.0) * specfun::entropy_h(eta);
}

RsBound replica_symmetric_bound(std::int64_t n, double p, double eta) {
    if (n < 1) throw std::domain_error("replica_symmetric_bound: n must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("replica_symmetric_bound: p must be in (0,1)");
    require_eta_closed(eta, "replica_symmetric_bound");
    double r = std::cbrt(eta);
    RsBound out;
    out.value = static_cast<double>(comb2(n)) * specfun::rel_entropy_ip(r * p, p);
    double c = p * std::sqrt(static_cast<double>(n));
    out.normalized_limit = 0.5 * c * specfun::entropy_h(r);
    return out;
}

double conditional_edge_density_q(double c, double eta, std::int64_t n) {
    if (n < 1) throw std::domain_error("conditional_edge_density_q: n must be positive");
    if (!(c < c_bar(eta)))
        throw RegimeError("conditional_edge_density_q: requires c < c_bar(eta)");
    return q_sqrt_n_coeff(c, eta) / std::sqrt(static_cast<double>(n));
}

double q_sqrt_n_coeff(double c, double eta) {
    double zeta = solve_zeta(c, eta);
    return c * std::exp(-0.5 * specfun::lambert_w0(2.0 * zeta * c * c));
}

double large_c_limit(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("large_c_limit: eta must be in (0,1]");
    return -0.5 * specfun::entropy_h(std::cbrt(eta));
}

double crossing_point(double eta, const std::function<double(double)>& lower_bound) {
    double cb = c_bar(eta);
    double start = std::isfinite(cb) ? 0.5 * cb : 0.01;
    auto diff = [&](double c) { return rate_gnp(c, eta).rate - lower_bound(c); };
    constexpr double kStep = 0.01, kScanMax = 50.0;
    double prev_c = start, prev_d = diff(start);
    if (prev_d == 0.0) return prev_c;
    const long nsteps = static_cast<long>(std::ceil((kScanMax - start) / kStep));
    for (long k = 1; k <= nsteps; ++k) {
        double c = std::min(start + static_cast<double>(k) * kStep, kScanMax);
        double d = diff(c);
        if (d == 0.0) return c;
        if ((prev_d < 0.0) != (d < 0.0)) {
            double lo = prev_c, hi = c, flo = prev_d;
            while (hi - lo > 1e-6) {
                double mid = 0.5 * (lo + hi);
                double fm = diff(mid);
                if (fm == 0.0) return mid;
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_c = c;
        prev_d = d;
    }
    throw NoCrossingError("crossing_point: rate minus bound keeps one sign on the scan range");
}

namespace {

// Two-block profile: blocks of size na and n-na, probability q1 within blocks,
// q2 across. Cost and expected triangle count are closed forms in (na,q1,q2).
struct BlockGeom {
    double within_pairs;  // C(na,2) + C(n-na,2)
    double cross_pairs;   // na (n-na)
    double tri_within;    // C(na,3) + C(n-na,3), coefficient of q1^3
    double tri_mixed;     // C(na,2)(n-na) + na C(n-na,2), coefficient of q1 q2^2
};

BlockGeom block_geom(std::int64_t n, std::int64_t na) {
    std::int64_t nb = n - na;
    BlockGeom g;
    g.within_pairs = static_cast<double>(comb2(na) + comb2(nb));
    g.cross_pairs = static_cast<double>(na * nb);
    g.tri_within = static_cast<double>(comb3(na) + comb3(nb));
    g.tri_mixed = static_cast<double>(comb2(na) * nb + na * comb2(nb));
    return g;
}

double block_triangles(const BlockGeom& g, double q1, double q2) {
    return g.tri_within * q1 * q1 * q1 + g.tri_mixed * q1 * q2 * q2;
}

double block_cost(const BlockGeom& g, double p, double q1, double q2) {
    return g.within_pairs * specfun::rel_entropy_ip(q1, p) +
           g.cross_pairs * specfun::rel_entropy_ip(q2, p);
}

// Largest q2 in [0,p] keeping the triangle count at most budget; i_p decreases
// on [0,p], so the largest feasible value is also the cheapest.
double best_q2(const BlockGeom& g, double p, double q1, double budget) {
    double slack = budget - g.tri_within * q1 * q1 * q1;
    if (slack < 0.0) return -1.0;  // infeasible at this q1
    double coeff = g.tri_mixed * q1;
    if (coeff <= 0.0 || slack >= coeff * p * p) return p;
    return std::sqrt(slack / coeff);
}

// Largest q1 in [0,p] keeping the triangle count at most budget at fixed q2.
double best_q1(const BlockGeom& g, double p, double q2, double budget) {
    auto tri = [&](double q1) { return block_triangles(g, q1, q2); };
    if (tri(p) <= budget) return p;
    if (tri(0.0) > budget) return -1.0;
    double lo = 0.0, hi = p;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (tri(mid) <= budget ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

double two_block_bound(std::int64_t n, double p, double eta) {
    if (n < 2) throw std::domain_error("two_block_bound: n must be at least 2");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("two_block_bound: p must be in (0,1)");
    require_eta_closed(eta, "two_block_bound");
    const double budget = eta * static_cast<double>(comb3(n)) * p * p * p;

    double best = kInf;
    std::int64_t best_na = n / 2;
    double best_q1v = 0.0, best_q2v = p;
    auto consider = [&](std::int64_t na, double q1, double q2) {
        if (q1 < 0.0 || q2 < 0.0) return;
        double cost = block_cost(block_geom(n, na), p, q1, q2);
        if (cost < best) {
            best = cost;
            best_na = na;
            best_q1v = q1;
            best_q2v = q2;
        }
    };

    // Flat profile q1 = q2 = eta^{1/3} p meets the budget with equality by the
    // triangle decomposition, so it is always admissible.
    consider(n / 2, std::cbrt(eta) * p, std::cbrt(eta) * p);
    // Bipartite corner: no within-block edges, cross edges untouched.
    consider(n / 2, 0.0, p);

    constexpr int kGrid = 50;
    for (int ia = 0; ia < kGrid; ++ia) {
        std::int64_t na = static_cast<std::int64_t>(
            std::llround(static_cast<double>(ia) / (kGrid - 1) * static_cast<double>(n / 2)));
        BlockGeom g = block_geom(n, na);
        for (int i1 = 0; i1 < kGrid; ++i1) {
            double q1 = static_cast<double>(i1) / (kGrid - 1) * p;
            double q2 = best_q2(g, p, q1, budget);
            if (q2 >= 0.0) consider(na, q1, q2);
        }
    }

    for (int it = 0; it < 200; ++it) {
        bool moved = false;
        for (std::int64_t na : {best_na, best_na - 1, best_na + 1}) {
            if (na < 0 || na > n / 2) continue;
            BlockGeom g = block_geom(n, na);
            double q1 = best_q1(g, p, best_q2v, budget);
            double q2 = q1 < 0.0 ? -1.0 : best_q2(g, p, q1, budget);
            if (q2 < 0.0) continue;
            double cost = block_cost(g, p, q1, q2);
            if (cost < best - 1e-15 * (1.0 + std::abs(best))) {
                best = cost;
                best_na = na;
                best_q1v = q1;
                best_q2v = q2;
                moved = true;
            }
        }
        if (!moved) break;
    }
    return best;
}

}  // namespace trigibbs::ratefn
