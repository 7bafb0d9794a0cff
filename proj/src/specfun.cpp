#include "trigibbs/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace trigibbs::specfun {

namespace {

constexpr double kBranchPoint = -0.36787944117144233;  // -1/e

double w_residual(double w, double x) { return w * std::exp(w) - x; }

// Monotone fallback on [-1, hi]; w*e^w is increasing there, so plain
// bisection down to adjacent doubles cannot fail.
double bisect_w(double x) {
    double lo = -1.0;
    double hi;
    if (x <= 0.0) {
        hi = 0.0;
    } else {
        hi = 1.0;
        while (w_residual(hi, x) < 0.0) hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (w_residual(mid, x) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double initial_guess(double x) {
    if (x < -0.3235) {
        // series at the branch point in sqrt(2*(1 + e*x))
        double p = std::sqrt(2.0 * (1.0 + 2.718281828459045 * x));
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    }
    if (x < 1.0) {
        // W(x) = x - x^2 + 3/2 x^3 - ... near 0
        return x * (1.0 - x * (1.0 - 1.5 * x));
    }
    double l1 = std::log(x);
    double l2 = std::log(l1 > 1.0 ? l1 : 1.0);
    return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
    if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
    if (x < kBranchPoint) {
        if (x < kBranchPoint - 1e-12)
            throw std::domain_error("lambert_w0: argument below -1/e");
        x = kBranchPoint;
    }
    if (x == 0.0) return 0.0;

    double w = initial_guess(x);
    for (int i = 0; i < 60; ++i) {
        double ew = std::exp(w);
        double f = w * ew - x;
        if (f == 0.0) return w;
        // Halley step: f' = e^w (1+w), f'' = e^w (2+w)
        double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        if (denom == 0.0 || !std::isfinite(denom)) return bisect_w(x);
        double step = f / denom;
        double wn = w - step;
        if (!std::isfinite(wn) || wn < -1.0) return bisect_w(x);
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(wn))) return wn;
        w = wn;
    }
    return bisect_w(x);
}

double entropy_h(double x) {
    if (std::isnan(x) || x < 0.0) throw std::domain_error("entropy_h: negative argument");
    if (x == 0.0) return 1.0;
    // x*log1p(x-1) - (x-1) avoids cancellation near x = 1
    double u = x - 1.0;
    return x * std::log1p(u) - u;
}

double rel_entropy_ip(double q, double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::domain_error("rel_entropy_ip: p must be in (0,1)");
    if (!(q >= 0.0) || !(q <= 1.0)) throw std::domain_error("rel_entropy_ip: q must be in [0,1]");
    double r = 0.0;
    if (q > 0.0) r += q * std::log(q / p);
    // log((1-q)/(1-p)) = log1p((p-q)/(1-p)), stable for q near p
    if (q < 1.0) r += (1.0 - q) * std::log1p((p - q) / (1.0 - p));
    return r < 0.0 && r > -1e-15 ? 0.0 : r;
}

}  // namespace trigibbs::specfun
