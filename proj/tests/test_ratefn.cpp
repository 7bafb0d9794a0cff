#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "trigibbs/errors.hpp"
#include "trigibbs/ratefn.hpp"
#include "trigibbs/specfun.hpp"
#include "trigibbs/util.hpp"

using namespace trigibbs;

TEST_CASE("eta_star = exp(-(3/2) W(2/e))") {
    CHECK(ratefn::eta_star() == doctest::Approx(0.49928247059734396).epsilon(1e-13));
}

TEST_CASE("c_bar(eta) = 1/sqrt(e (1 - eta/eta_star)) below eta_star, infinite above") {
    CHECK(ratefn::c_bar(0.0) == doctest::Approx(0.60653065971263342).epsilon(1e-13));
    CHECK(ratefn::c_bar(0.25) == doctest::Approx(0.85838090540437822).epsilon(1e-13));
    CHECK(std::isinf(ratefn::c_bar(ratefn::eta_star())));
    CHECK(std::isinf(ratefn::c_bar(0.9)));
    CHECK(std::isinf(ratefn::c_bar(1.0)));
    CHECK(ratefn::c_bar(0.1) < ratefn::c_bar(0.2));
    CHECK(ratefn::c_bar(0.3) < ratefn::c_bar(0.45));
    CHECK_THROWS_AS(ratefn::c_bar(-0.1), std::domain_error);
    CHECK_THROWS_AS(ratefn::c_bar(1.1), std::domain_error);
}

TEST_CASE("solve_zeta satisfies the tilt equation (1-z)(W(2zc^2)/(2zc^2))^{3/2} = eta") {
    for (double c : {0.3, 0.5, 1.0, 2.0, 5.0})
        for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double z = ratefn::solve_zeta(c, eta);
            double lhs = (1.0 - z) * std::exp(-1.5 * specfun::lambert_w0(2.0 * z * c * c));
            CHECK(std::abs(lhs - eta) <= 1e-10);
        }
    CHECK(ratefn::solve_zeta(0.5, 0.5) ==
          doctest::Approx(0.3672680681532643).epsilon(1e-12));
    CHECK(ratefn::solve_zeta(0.7, 0.0) == 1.0);
    CHECK_THROWS_AS(ratefn::solve_zeta(0.5, 1.0), std::domain_error);
}

TEST_CASE("solve_zeta monotonicity: decreasing in eta, zeta c^2 increasing in c") {
    for (double c : {0.4, 1.0, 3.0}) {
        double prev = 2.0;
        for (double eta : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            double z = ratefn::solve_zeta(c, eta);
            CHECK(z < prev);
            prev = z;
        }
    }
    for (double eta : {0.2, 0.5}) {
        double prev = -1.0;
        for (double c : {0.2, 0.5, 1.0, 2.0, 4.0}) {
            double zc2 = ratefn::solve_zeta(c, eta) * c * c;
            CHECK(zc2 > prev);
            prev = zc2;
        }
    }
}

TEST_CASE("eta_of_zeta inverts solve_zeta") {
    for (double c : {0.4, 1.3})
        for (double eta : {0.05, 0.5, 0.9})
            CHECK(ratefn::eta_of_zeta(c, ratefn::solve_zeta(c, eta)) ==
                  doctest::Approx(eta).epsilon(1e-10));
    CHECK(ratefn::eta_of_zeta(0.7, 0.0) == 1.0);
    CHECK(ratefn::eta_of_zeta(0.7, 1.0) == 0.0);
}

TEST_CASE("triangle-free rate values") {
    CHECK(ratefn::rate_trianglefree(0.1) ==
          doctest::Approx(-1.642233660473903e-4).epsilon(1e-12));
    CHECK(ratefn::rate_trianglefree(0.5) ==
          doctest::Approx(-0.015733463670497893).epsilon(1e-12));
    CHECK(ratefn::rate_gnp(4.342, 0.0).rate ==
          doctest::Approx(-1.0855467090294385).epsilon(1e-12));
}

TEST_CASE("rate_gnp at eta=0 coincides with the triangle-free rate") {
    for (int k = 1; k <= 100; ++k) {
        double c = 0.05 * k;
        CHECK(std::abs(ratefn::rate_gnp(c, 0.0).rate - ratefn::rate_trianglefree(c)) <=
              1e-12);
    }
}

TEST_CASE("rate_gnp structure: negative, increasing in eta, regime flag") {
    for (double c : {0.3, 0.6, 2.0}) {
        double prev = -1e9;
        for (double eta : {0.0, 0.2, 0.4, 0.6, 0.8}) {
            auto r = ratefn::rate_gnp(c, eta);
            CHECK(r.rate <= 0.0);
            CHECK(r.rate >= prev);  // weaker conditioning costs less
            prev = r.rate;
        }
    }
    CHECK(ratefn::rate_gnp(0.4, 0.0).regime == ratefn::Regime::inside_window);
    CHECK(ratefn::rate_gnp(0.7, 0.0).regime == ratefn::Regime::outside_validity);
    CHECK(ratefn::rate_gnp(5.0, 0.6).regime == ratefn::Regime::inside_window);
}

TEST_CASE("rate_gnp is continuous across eta_star") {
    double es = ratefn::eta_star();
    for (double c : {0.9, 1.5}) {
        double below = ratefn::rate_gnp(c, es - 1e-9).rate;
        double above = ratefn::rate_gnp(c, es + 1e-9).rate;
        CHECK(std::abs(below - above) <= 1e-6);
    }
}

TEST_CASE("conditioned edge density q = c e^{-W(2 zeta c^2)/2} per sqrt(n)") {
    CHECK(ratefn::q_sqrt_n_coeff(0.4, 0.0) ==
          doctest::Approx(0.35310950593117617).epsilon(1e-12));
    CHECK(ratefn::conditional_edge_density_q(0.4, 0.0, 400) ==
          doctest::Approx(0.35310950593117617 / 20.0).epsilon(1e-12));
    CHECK_THROWS_AS(ratefn::conditional_edge_density_q(0.7, 0.0, 100), RegimeError);
    // q/p stays in (eta^{1/3}, 1] inside the window
    for (double c : {0.5, 1.0, 3.0, 6.0}) {
        double ratio = ratefn::q_sqrt_n_coeff(c, 0.5) / c;
        CHECK(ratio < 1.0);
        CHECK(ratio > std::cbrt(0.5));
    }
}

TEST_CASE("poisson bound -(c^3/6) h(eta) and small-c agreement") {
    CHECK(ratefn::poisson_bound(0.1, 0.0) == doctest::Approx(-1e-3 / 6.0).epsilon(1e-13));
    double ratio = ratefn::rate_gnp(0.1, 0.0).rate / ratefn::poisson_bound(0.1, 0.0);
    CHECK(ratio == doctest::Approx(0.98534019628434177).epsilon(1e-10));
    CHECK(ratefn::rate_gnp(0.05, 0.3).rate / ratefn::poisson_bound(0.05, 0.3) ==
          doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("rate is sandwiched between the bounds") {
    for (double c : {0.1, 0.3, 0.5})
        for (double eta : {0.0, 0.3, 0.6}) {
            auto r = ratefn::rate_gnp(c, eta);
            CHECK(r.rate >= ratefn::poisson_bound(c, eta) - 1e-15);
            double rs = -0.5 * c * specfun::entropy_h(std::cbrt(eta));
            CHECK(r.rate >= rs - 1e-15);
        }
}

TEST_CASE("fixed-edge-count rate and threshold") {
    CHECK(ratefn::rate_gnm(0.4, 0.5) ==
          doctest::Approx(-0.0016365483703469583).epsilon(1e-12));
    double b = ratefn::gnm_threshold_b(0.0);
    CHECK(b == doctest::Approx(0.48117331252135589).epsilon(1e-12));
    // threshold solves b e^{(1-eta) b^2} = c_bar(eta); at eta=0 also 2b^2 = W(2/e)
    CHECK(b * std::exp(b * b) == doctest::Approx(ratefn::c_bar(0.0)).epsilon(1e-12));
    CHECK(2.0 * b * b ==
          doctest::Approx(specfun::lambert_w0(2.0 / std::exp(1.0))).epsilon(1e-12));
    CHECK(std::isinf(ratefn::gnm_threshold_b(0.6)));
    CHECK(ratefn::gnm_regime(0.4, 0.0) == ratefn::Regime::inside_window);
    CHECK(ratefn::gnm_regime(0.5, 0.0) == ratefn::Regime::outside_validity);
}

TEST_CASE("replica symmetric bound: finite-n value approaches the normalized limit") {
    auto rs = ratefn::replica_symmetric_bound(1000000, 0.5e-3, 0.5);
    double n32 = std::pow(1e6, 1.5);
    CHECK(rs.value / n32 == doctest::Approx(rs.normalized_limit).epsilon(1e-3));
    CHECK(rs.normalized_limit ==
          doctest::Approx(0.5 * 0.5 * specfun::entropy_h(std::cbrt(0.5))).epsilon(1e-13));
    CHECK(rs.value >= 0.0);
}

TEST_CASE("large-c limit values and consistency with rate_gnp") {
    CHECK(ratefn::large_c_limit(0.5) ==
          doctest::Approx(-0.011457856708812741).epsilon(1e-13));
    CHECK(ratefn::large_c_limit(0.6) ==
          doctest::Approx(-0.0064758311228956947).epsilon(1e-13));
    CHECK(std::abs(ratefn::rate_gnp(100.0, 0.6).rate / 100.0 -
                   ratefn::large_c_limit(0.6)) <= 1e-6);
    CHECK(ratefn::large_c_limit(1.0) == 0.0);
    CHECK_THROWS_AS(ratefn::large_c_limit(0.0), std::domain_error);
}

TEST_CASE("crossing of the analytic rate with structural lower bounds") {
    double cx = ratefn::crossing_point(0.0, [](double c) { return -c / 4.0; });
    CHECK(cx == doctest::Approx(4.3416019599754087).epsilon(1e-5));
    CHECK(std::abs(ratefn::rate_trianglefree(cx) + cx / 4.0) <= 1e-5);
    // -c/2 lies below the rate everywhere; no crossing on the scan range
    CHECK_THROWS_AS(ratefn::crossing_point(0.0, [](double c) { return -c / 2.0; }),
                    NoCrossingError);
    // at eta_star the replica-symmetric line is the large-c asymptote itself
    double es = ratefn::eta_star();
    double slope = ratefn::large_c_limit(es);
    CHECK_THROWS_AS(ratefn::crossing_point(es, [&](double c) { return slope * c; }),
                    NoCrossingError);
}

namespace {

// Independent re-derivation of the two-block optimum: exhaustive na sweep and
// a fine q1 grid, q2 pushed to the feasibility boundary (relative entropy
// decreases toward p, so the largest feasible q2 is the cheapest).
double two_block_reference(std::int64_t n, double p, double eta) {
    double budget = eta * static_cast<double>(comb3(n)) * p * p * p;
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t na = 0; na <= n / 2; ++na) {
        std::int64_t nb = n - na;
        double wp = static_cast<double>(comb2(na) + comb2(nb));
        double cp = static_cast<double>(na * nb);
        double tw = static_cast<double>(comb3(na) + comb3(nb));
        double tm = static_cast<double>(comb2(na) * nb + na * comb2(nb));
        for (int i = 0; i <= 4000; ++i) {
            double q1 = p * i / 4000.0;
            double slack = budget - tw * q1 * q1 * q1;
            if (slack < 0.0) break;
            double coeff = tm * q1;
            double q2 = (coeff <= 0.0 || slack >= coeff * p * p) ? p
                                                                 : std::sqrt(slack / coeff);
            double cost = wp * specfun::rel_entropy_ip(q1, p) +
                          cp * specfun::rel_entropy_ip(q2, p);
            best = std::min(best, cost);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("two-block profile beats replica symmetric in the localized phase") {
    double n = 200;
    double p = 10.0 / std::sqrt(n);
    double eta = 0.005;
    double tb = ratefn::two_block_bound(200, p, eta);
    double rs = ratefn::replica_symmetric_bound(200, p, eta).value;
    CHECK(rs == doctest::Approx(14977.45).epsilon(0.01));
    CHECK(tb < rs);
    CHECK(tb == doctest::Approx(two_block_reference(200, p, eta)).epsilon(0.005));
}

TEST_CASE("two-block bound never exceeds replica symmetric") {
    struct Case {
        std::int64_t n;
        double p, eta;
    };
    for (auto [n, p, eta] : {Case{50, 0.1, 0.3}, Case{100, 0.05, 0.1}, Case{60, 0.3, 0.8}}) {
        CHECK(ratefn::two_block_bound(n, p, eta) <=
              ratefn::replica_symmetric_bound(n, p, eta).value + 1e-9);
    }
}

TEST_CASE("localization threshold constant") {
    CHECK(ratefn::kEtaLocalizationThreshold == 0.0091);
    CHECK(std::string(ratefn::to_string(ratefn::Regime::inside_window)) == "inside_window");
}
