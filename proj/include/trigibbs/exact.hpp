#pragma once

#include <cstdint>

#include "trigibbs/graph.hpp"
#include "trigibbs/params.hpp"

namespace trigibbs::exact {

// Exact summary of a finite Gibbs measure obtained by full enumeration.
// For the graph measure: expect_size = E|edges|, expect_conflicts = E|triangles|.
// For the subset measure on a host graph: expect_size = E|S|,
// expect_conflicts = E|E(S)| (edges induced inside S).
struct ExactSummary {
    double log_partition = 0.0;
    double expect_size = 0.0;
    double expect_conflicts = 0.0;
};

// Full enumeration of all 2^C(n,2) labeled graphs (n <= 7; SizeError above).
// Gray-code walk with incremental triangle updates; log-space accumulation.
ExactSummary exact_Z(const GibbsParams& params);

// Full enumeration of all vertex subsets of H (|V| <= 22; SizeError above);
// weight(S) = lambda^{|S|} (1-zeta)^{edges inside S}. zeta = 1 reduces to the
// independence polynomial.
ExactSummary exact_Xi(const Graph& H, double lambda, double zeta);

// P(triangle count <= eta * C(n,3) p^3) under independent edges (n <= 7).
double exact_lower_tail(int n, double p, double eta);

// Central finite-difference check of the derivative identities
//   lambda d/dlambda log Z = E[size]   and   -(1-zeta) d/dzeta log Z = E[conflicts]
// against exact expectations; returns absolute residuals.
// The zeta-side difference needs zeta + step < 1 (throws std::domain_error).
struct DerivativeResiduals {
    double size = 0.0;       // lambda-derivative identity
    double conflicts = 0.0;  // zeta-derivative identity
};
DerivativeResiduals derivative_identity_check(const GibbsParams& params, double step);
DerivativeResiduals derivative_identity_check_subsets(const Graph& H, double lambda, double zeta,
                                                      double step);

}  // namespace trigibbs::exact
