#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "trigibbs/errors.hpp"
#include "trigibbs/estimators.hpp"
#include "trigibbs/exact.hpp"
#include "trigibbs/graph.hpp"
#include "trigibbs/params.hpp"
#include "trigibbs/ratefn.hpp"
#include "trigibbs/specfun.hpp"
#include "trigibbs/util.hpp"

using namespace trigibbs;

namespace {
constexpr std::uint64_t kSeed = 31337;
}

TEST_CASE("density estimates agree with exact expectations at n=5") {
    GibbsParams pr{5, 0.3, 0.5};
    auto ex = exact::exact_Z(pr);
    auto rep = estimators::estimate_densities(pr, 2, 3000, kSeed);
    CHECK(std::abs(rep.mean_edges - ex.expect_size) <= 4 * rep.stderr_edges);
    CHECK(std::abs(rep.mean_triangles - ex.expect_conflicts) <= 4 * rep.stderr_triangles);
    CHECK(rep.small_n);
    CHECK(rep.chains == 2);
    CHECK(rep.mean_degree == doctest::Approx(2 * rep.mean_edges / 5).epsilon(1e-12));
}

TEST_CASE("predictions carry the tilted edge and triangle coefficients") {
    double zeta = ratefn::solve_zeta(0.5, 0.5);
    GibbsParams pr = GibbsParams::from_scaled(25, 0.5, zeta);
    auto rep = estimators::estimate_densities(pr, 1, 32, kSeed);
    double n32 = std::pow(25.0, 1.5);
    CHECK(rep.predicted_edges / n32 ==
          doctest::Approx(0.23113023418020862).epsilon(1e-10));
    // the triangle prediction collapses to eta c^3/6 by the tilt identity
    CHECK(rep.predicted_triangles / n32 ==
          doctest::Approx(0.5 * 0.125 / 6.0).epsilon(1e-9));
    CHECK(rep.predicted_degree_coeff ==
          doctest::Approx(2 * 0.23113023418020862).epsilon(1e-9));
}

TEST_CASE("free-measure predictions reduce to the binomial coefficients") {
    GibbsParams pr = GibbsParams::from_scaled(30, 0.4, 0.0);
    auto rep = estimators::estimate_densities(pr, 1, 32, kSeed);
    double n32 = std::pow(30.0, 1.5);
    // ratio -> c^2 as zeta -> 0: edges ~ c/2 n^{3/2}, triangles ~ c^3/6 n^{3/2}
    CHECK(rep.predicted_edges / n32 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rep.predicted_triangles / n32 == doctest::Approx(0.064 / 6).epsilon(1e-12));
}

TEST_CASE("degree fixed point residual") {
    GibbsParams pr = GibbsParams::from_scaled(100, 0.5, 0.4);
    double w = specfun::lambert_w0(2 * 0.4 * 0.25);
    estimators::DensityReport rep;
    rep.mean_degree = std::sqrt(w / (2 * 0.4)) * 10.0;
    CHECK(estimators::fixed_point_residual(rep, pr) <= 1e-13);
    rep.mean_degree *= 1.1;
    CHECK(estimators::fixed_point_residual(rep, pr) ==
          doctest::Approx(0.21).epsilon(1e-10));
    GibbsParams free_pr{100, 0.3, 0.0};
    CHECK_THROWS_AS(estimators::fixed_point_residual(rep, free_pr), std::domain_error);
}

TEST_CASE("thermodynamic integration short-circuits at zeta=0") {
    auto res = estimators::log_z_by_integration(30, 0.4, 0.0, 16, 2, kSeed);
    double lambda_max = 0.4 / std::sqrt(30.0);
    CHECK(res.log_z ==
          doctest::Approx(static_cast<double>(comb2(30)) * std::log1p(lambda_max))
              .epsilon(1e-14));
    CHECK(res.quadrature_error == 0.0);
    CHECK(res.mc_error == 0.0);
    CHECK(res.error_budget == 0.0);
}

TEST_CASE("thermodynamic integration matches exact enumeration at n=6") {
    double c_target = 0.3 * std::sqrt(6.0);  // lambda_max = 0.3
    auto res = estimators::log_z_by_integration(6, c_target, 0.5, 16, 2, kSeed);
    double exact_val = exact::exact_Z({6, 0.3, 0.5}).log_partition;
    CHECK(std::abs(res.log_z - exact_val) <= res.error_budget);
    // conservative by construction (3 sigma + grid halving); just not vacuous
    CHECK(res.error_budget < 1.0);
    CHECK(res.grid == 16);
    CHECK_THROWS_AS(estimators::log_z_by_integration(6, 0.5, 0.5, 7, 1, kSeed),
                    std::domain_error);
}

TEST_CASE("structure observables of fixed graphs") {
    auto bip = estimators::structure_of_graph(complete_bipartite(8, 8), 0.25, kSeed);
    CHECK(bip.maxcut == 1.0);
    CHECK(bip.states == 1);
    CHECK(bip.degree_spread == 0.0);
    auto empty = estimators::structure_of_graph(Graph(10), 0.0, kSeed);
    CHECK(empty.maxcut == 0.0);
    CHECK(empty.cutnorm_norm == 0.0);
}

TEST_CASE("structure report pools chain states") {
    GibbsParams pr = GibbsParams::from_scaled(40, 0.4, 0.5);
    auto rep = estimators::structure_report(pr, 2, 20, kSeed);
    CHECK(rep.states == 20);
    CHECK(rep.maxcut >= 0.5);
    CHECK(rep.maxcut <= 1.0);
    CHECK(std::isfinite(rep.cutnorm_norm));
    CHECK(rep.degree_spread >= 0.0);
    CHECK(rep.spread_bound ==
          doctest::Approx(4 * std::sqrt(40 * pr.lambda) * std::log(40.0)).epsilon(1e-12));
    CHECK_THROWS_AS(estimators::structure_report(pr, 0, 20, kSeed), std::domain_error);
    GibbsParams big = GibbsParams::from_scaled(2001, 0.4, 0.5);
    CHECK_THROWS_AS(estimators::structure_report(big, 1, 20, kSeed), SizeError);
}

TEST_CASE("direct lower-tail Monte Carlo") {
    // threshold 2 C(n,3) admits every graph
    double p = 0.5;
    auto full = estimators::lower_tail_mc(12, p, 2.0 / (p * p * p), 200, kSeed);
    CHECK(full.estimate == 1.0);
    CHECK(full.stderr_ == 0.0);
    CHECK(full.trials == 200);

    auto mc = estimators::lower_tail_mc(6, 0.3, 0.0, 100000, kSeed);
    double exact_val = exact::exact_lower_tail(6, 0.3, 0.0);
    CHECK(std::abs(mc.estimate - exact_val) <= 4 * mc.stderr_ + 1e-9);
    CHECK(mc.stderr_ > 0.0);

    CHECK_THROWS_AS(estimators::lower_tail_mc(65, 0.3, 0.0, 10, kSeed), SizeError);
    CHECK_THROWS_AS(estimators::lower_tail_mc(10, 1.2, 0.0, 10, kSeed), std::domain_error);
}

TEST_CASE("fixed-edge-count triangle mean") {
    // complete graph is forced at m = C(n,2)
    CHECK(estimators::gnm_triangle_mean(6, comb2(6), 5, kSeed) ==
          doctest::Approx(20.0).epsilon(1e-15));
    CHECK(estimators::gnm_triangle_mean(6, 0, 5, kSeed) == 0.0);
    // hypergeometric mean: 120 * (20*19*18)/(45*44*43)
    double mean10 = estimators::gnm_triangle_mean(10, 20, 4000, kSeed);
    CHECK(mean10 == doctest::Approx(9.6406).epsilon(0.05));
    CHECK_THROWS_AS(estimators::gnm_triangle_mean(6, 16, 5, kSeed), std::domain_error);
}

TEST_CASE("sparse fixed-density scaling at n=400") {
    // m = b n^{3/2}/2 with b=0.3: mean triangles ~ b^3 n^{3/2}/6 = 36
    double mean = estimators::gnm_triangle_mean(400, 1200, 200, kSeed);
    double predicted = 0.027 * 8000.0 / 6.0;
    // exact hypergeometric mean: C(n,3) m(m-1)(m-2)/(M(M-1)(M-2)), M = C(n,2)
    double M = static_cast<double>(comb2(400));
    double exact_mean = static_cast<double>(comb3(400)) *
                        (1200.0 * 1199.0 * 1198.0) / (M * (M - 1) * (M - 2));
    CHECK(mean == doctest::Approx(exact_mean).epsilon(0.10));
    CHECK(exact_mean == doctest::Approx(predicted).epsilon(0.02));
}
