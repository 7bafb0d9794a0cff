#pragma once

namespace trigibbs::specfun {

// Principal branch of the inverse of x = w*e^w, defined for x >= -1/e
// (arguments up to 1e-12 below -1/e are clamped to the branch point).
// Relative error <= 1e-12; returns w >= -1.
// Throws std::domain_error for x < -1/e - 1e-12.
double lambert_w0(double x);

// h(x) = x*log(x) - x + 1 with the limit convention h(0) = 1.
// Throws std::domain_error for x < 0.
double entropy_h(double x);

// Bernoulli relative entropy i_p(q) = q*log(q/p) + (1-q)*log((1-q)/(1-p)).
// Nonnegative, zero iff q == p. Requires p in (0,1), q in [0,1];
// throws std::domain_error otherwise.
double rel_entropy_ip(double q, double p);

}  // namespace trigibbs::specfun
