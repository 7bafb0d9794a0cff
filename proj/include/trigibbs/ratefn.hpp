#pragma once

#include <cstdint>
#include <functional>

namespace trigibbs::ratefn {

// Below this lower-tail fraction the conditioned structure localizes.
// Tabulated constant (root of a univariate auxiliary problem), not computed here.
inline constexpr double kEtaLocalizationThreshold = 0.0091;

enum class Regime {
    inside_window,     // parameters satisfy the validity condition c < c_bar(eta)
    outside_validity,  // analytic continuation of the same formula
};

const char* to_string(Regime r);

// Scaled limit of the lower-tail log-probability together with the tilt
// parameters that achieve it.
struct RateResult {
    double rate;     // coefficient of n^{3/2} in log P, <= 0
    double zeta;     // solution of (1-zeta)(W(2 zeta c^2)/(2 zeta c^2))^{3/2} = eta
    double q_coeff;  // conditioned edge density times sqrt(n): c e^{-W(2 zeta c^2)/2}
    Regime regime;
};

// Relative-entropy cost of flattening the edge density to eta^{1/3} p.
struct RsBound {
    double value;             // C(n,2) * i_p(eta^{1/3} p), >= 0
    double normalized_limit;  // (c/2) h(eta^{1/3}) with c = p sqrt(n)
};

// (W(2/e)/(2/e))^{3/2} = e^{-3 W(2/e)/2}, the largest eta with a finite
// validity threshold.
double eta_star();

// Validity threshold in c: 1/sqrt(e (1 - eta/eta_star())) for eta < eta_star(),
// +inf otherwise. eta in [0,1].
double c_bar(double eta);

// Unique zeta in [0,1] with (1-zeta)(W(2 zeta c^2)/(2 zeta c^2))^{3/2} = eta.
// The left side is 1 at zeta=0 and decreases to 0 at zeta=1; bisection runs to
// adjacent doubles. eta=0 returns exactly 1.
double solve_zeta(double c, double eta);

// The tail fraction a given tilt realizes: (1-zeta) e^{-3 W(2 zeta c^2)/2},
// the left side of the equation solve_zeta inverts.
double eta_of_zeta(double c, double zeta);

// Scaled lower-tail rate at edge intensity c and tail fraction eta:
//   1/2 [ (W^{3/2} + 3 W^{1/2})/(3 sqrt(2 zeta)) - log(1-zeta) eta c^3/3 - c ]
// with W = W(2 zeta c^2). The log term is exactly 0 at eta=0.
RateResult rate_gnp(double c, double eta);

// eta=0 specialization: 1/2 [ (W(2c^2)^{3/2} + 3 W(2c^2)^{1/2})/(3 sqrt 2) - c ].
double rate_trianglefree(double c);

// Fixed-density analogue at m = b n^{3/2}/2 edges: -(b^3/6)(1 - eta + eta log eta).
double rate_gnm(double b, double eta);

// inside_window iff b < gnm_threshold_b(eta).
Regime gnm_regime(double b, double eta);

// Unique b with b e^{(1-eta) b^2} = c_bar(eta); +inf when c_bar(eta) = +inf.
double gnm_threshold_b(double eta);

// First-moment comparison bound: -(c^3/6)(1 - eta + eta log eta).
double poisson_bound(double c, double eta);

// Flat tilt to q = eta^{1/3} p over all C(n,2) pairs. eta in [0,1].
RsBound replica_symmetric_bound(std::int64_t n, double p, double eta);

// Edge density of the conditioned measure: q_sqrt_n_coeff(c,eta)/sqrt(n).
// Throws RegimeError when c >= c_bar(eta).
double conditional_edge_density_q(double c, double eta, std::int64_t n);

// sqrt(W(2 zeta c^2)/(2 zeta)) = c e^{-W(2 zeta c^2)/2}.
double q_sqrt_n_coeff(double c, double eta);

// lim_{c->inf} rate_gnp(c,eta).rate / c = -h(eta^{1/3})/2. eta in (0,1].
double large_c_limit(double eta);

// Smallest c in the scan range where rate_gnp(.,eta).rate crosses lower_bound:
// scan from c_bar(eta)/2 (or 0.01 when c_bar is infinite) to 50 in steps of
// 0.01, then bisect the bracket to 1e-6. Throws NoCrossingError when the
// difference never changes sign.
double crossing_point(double eta, const std::function<double(double)>& lower_bound);

// Minimum relative-entropy cost over two-block edge-probability profiles
// (split size, within-block q1, cross q2) subject to the block-model expected
// triangle count staying below eta times the unconstrained mean. Grid-seeded
// coordinate descent; the flat point q1=q2=eta^{1/3}p is always a candidate,
// so the result never exceeds replica_symmetric_bound(n,p,eta).value + 1e-9.
// eta in [0,1].
double two_block_bound(std::int64_t n, double p, double eta);

}  // namespace trigibbs::ratefn
