#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "trigibbs/cluster.hpp"
#include "trigibbs/errors.hpp"
#include "trigibbs/exact.hpp"
#include "trigibbs/graph.hpp"

using namespace trigibbs;

namespace {
constexpr double kE = 2.718281828459045;

std::int64_t factorial(int k) {
    std::int64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}
}  // namespace

TEST_CASE("cluster counts on small hosts") {
    Graph v1(1);
    std::int64_t n1 = cluster::enumerate_clusters(v1, 3, [](const cluster::Cluster&) {});
    CHECK(n1 == 3);  // (v), (v,v), (v,v,v)

    Graph k2 = complete_graph(2);
    std::int64_t n2 = cluster::enumerate_clusters(k2, 2, [](const cluster::Cluster&) {});
    CHECK(n2 == 6);  // a, b, aa, bb, ab, ba
}

TEST_CASE("ursell coefficients of the smallest clusters") {
    Graph k2 = complete_graph(2);
    double zeta = 0.6;
    CHECK(cluster::ursell(cluster::make_cluster(k2, {0}), zeta) == 1.0);
    CHECK(cluster::ursell(cluster::make_cluster(k2, {0, 0}), zeta) == -0.5);
    CHECK(cluster::ursell(cluster::make_cluster(k2, {0, 1}), zeta) ==
          doctest::Approx(-zeta / 2).epsilon(1e-15));
    CHECK(cluster::ursell(cluster::make_cluster(k2, {0, 0, 0}), zeta) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    // two copies of a plus an adjacent b: phi = 2 zeta / 3!
    CHECK(cluster::ursell(cluster::make_cluster(k2, {0, 0, 1}), zeta) ==
          doctest::Approx(zeta / 3).epsilon(1e-15));
}

TEST_CASE("make_cluster rejects disconnected tuples") {
    Graph p3 = path_graph(3);
    CHECK_THROWS_AS(cluster::make_cluster(p3, {0, 2}), std::invalid_argument);
}

TEST_CASE("subset convolution agrees with direct edge enumeration") {
    Graph host = complete_bipartite(4, 4);
    int checked = 0;
    std::int64_t idx = 0;
    try {
        cluster::enumerate_clusters(
            host, 5,
            [&](const cluster::Cluster& gamma) {
                if (idx++ % 311 != 0) return;
                double a = cluster::ursell(gamma, 0.37);
                double b = cluster::ursell_convolution(gamma, 0.37);
                CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
                ++checked;
            },
            150000);
    } catch (const BudgetError&) {
    }
    CHECK(checked >= 80);
}

TEST_CASE("deletion-contraction agrees with convolution at sizes 6 to 8") {
    Graph c8 = cycle_graph(8);
    std::vector<std::vector<int>> tuples = {
        {0, 1, 2, 3, 4, 5},          // path support, size 6
        {0, 0, 1, 1, 2, 2},          // repeats, size 6
        {0, 0, 1, 2, 3, 4, 5},       // size 7
        {0, 1, 2, 3, 4, 5, 6, 7},    // full cycle, size 8
        {0, 0, 1, 1, 2, 2, 3, 3},    // size 8 with repeats
    };
    for (const auto& t : tuples) {
        auto gamma = cluster::make_cluster(c8, t);
        for (double zeta : {0.25, 1.0}) {
            double a = cluster::ursell(gamma, zeta);
            double b = cluster::ursell_convolution(gamma, zeta);
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
            double pb = cluster::penrose_bound(gamma, zeta);
            CHECK(pb + 1e-12 >=
                  std::abs(static_cast<double>(factorial(gamma.size())) * a));
        }
    }
    Graph c12 = cycle_graph(12);
    CHECK_THROWS_AS(
        cluster::ursell(cluster::make_cluster(c12, {0, 1, 2, 3, 4, 5, 6, 7, 8}), 0.5),
        SizeError);
}

TEST_CASE("single-vertex host recovers the log(1+lambda) series") {
    Graph v1(1);
    double lambda = 0.3;
    auto res = cluster::truncated_log_xi(v1, lambda, 1.0, 6);
    double partial = 0.0;
    for (int j = 1; j <= 6; ++j)
        partial += (j % 2 ? 1.0 : -1.0) * std::pow(lambda, j) / j;
    CHECK(res.value == doctest::Approx(partial).epsilon(1e-12));
    CHECK(std::abs(res.value - std::log1p(lambda)) <= res.tail_bound);
}

TEST_CASE("two-vertex truncation at k=2 is 2 lambda - (1+zeta) lambda^2") {
    Graph k2 = complete_graph(2);
    auto res = cluster::truncated_log_xi(k2, 0.1, 0.5, 2);
    CHECK(res.value == doctest::Approx(0.185).epsilon(1e-14));
    CHECK(res.signed_by_size[1] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(res.signed_by_size[2] == doctest::Approx(-0.015).epsilon(1e-14));
    CHECK(res.counts_by_size[1] == 2);
    CHECK(res.counts_by_size[2] == 4);
}

TEST_CASE("truncation error on a cycle is certified by the tail bound") {
    Graph c10 = cycle_graph(10);
    double lambda = 0.05, zeta = 0.5;
    double exact_val = exact::exact_Xi(c10, lambda, zeta).log_partition;
    double prev_tail = 1e100;
    for (int k = 2; k <= 5; ++k) {
        auto res = cluster::truncated_log_xi(c10, lambda, zeta, k);
        CHECK(std::abs(res.value - exact_val) <= res.tail_bound);
        CHECK(res.tail_bound < prev_tail);
        prev_tail = res.tail_bound;
        if (k == 2) {
            CHECK(res.counts_by_size[1] == 10);
            CHECK(res.counts_by_size[2] == 30);
        }
        for (int j = 1; j <= k; ++j) {
            CHECK(std::abs(res.signed_by_size[j]) <= res.abs_by_size[j] + 1e-15);
            CHECK(res.abs_by_size[j] <=
                  kE * 10 * lambda * std::pow(res.gamma, j - 1) * (1 + 1e-9));
        }
    }
}

TEST_CASE("outside the convergence region the truncation refuses") {
    try {
        cluster::truncated_log_xi(complete_graph(4), 1.0, 1.0, 3);
        CHECK(false);
    } catch (const OutOfRegionError& e) {
        CHECK(e.gamma_infimum >= 1.0);
        CHECK(e.gamma_infimum == doctest::Approx(4 * kE).epsilon(1e-12));
    }
}

TEST_CASE("enumeration budgets carry the count reached") {
    try {
        cluster::enumerate_clusters(complete_bipartite(4, 4), 6,
                                    [](const cluster::Cluster&) {}, 100);
        CHECK(false);
    } catch (const BudgetError& e) {
        CHECK(e.reached == 100);
    }
    CHECK_THROWS_AS(
        cluster::enumerate_clusters(complete_graph(2), 9, [](const cluster::Cluster&) {}),
        SizeError);
}

TEST_CASE("tree closed form and its derivative identities") {
    auto t = cluster::tree_approx(20, 0.01, 0.5);
    CHECK(t.f_value == doctest::Approx(0.0095442229366136078).epsilon(1e-13));
    CHECK(t.alpha_value == doctest::Approx(0.0091276527160862264).epsilon(1e-13));
    CHECK(t.rho_value == doctest::Approx(0.00041657022052738133).epsilon(1e-13));

    double h = 1e-6;
    double dfl = (cluster::tree_approx(20, 0.01 + h, 0.5).f_value -
                  cluster::tree_approx(20, 0.01 - h, 0.5).f_value) /
                 (2 * h);
    CHECK(std::abs(0.01 * dfl - t.alpha_value) <= 1e-8);
    double dfz = (cluster::tree_approx(20, 0.01, 0.5 + h).f_value -
                  cluster::tree_approx(20, 0.01, 0.5 - h).f_value) /
                 (2 * h);
    CHECK(std::abs(-(1 - 0.5) * dfz - t.rho_value) <= 1e-8);

    CHECK_THROWS_AS(cluster::tree_approx(20, 0.01, 0.0), std::domain_error);
    CHECK_THROWS_AS(cluster::tree_approx(0, 0.01, 0.5), std::domain_error);
}

TEST_CASE("tree subgraph counts against the first-order prediction") {
    auto t1 = cluster::tree_count_check(complete_bipartite(3, 3), 1, 0);
    CHECK(t1.count == 1);
    CHECK(t1.prediction == doctest::Approx(1.0).epsilon(1e-15));

    auto t2 = cluster::tree_count_check(complete_bipartite(3, 3), 2, 0);
    CHECK(t2.count == 3);
    CHECK(t2.prediction == doctest::Approx(3.0).epsilon(1e-15));

    auto t3 = cluster::tree_count_check(complete_bipartite(8, 8), 3, 0);
    CHECK(t3.count == 84);
    CHECK(t3.prediction == doctest::Approx(96.0).epsilon(1e-12));
    double ratio = static_cast<double>(t3.count) / t3.prediction;
    CHECK(ratio >= 0.8);
    CHECK(ratio <= 1.2);

    CHECK_THROWS_AS(cluster::tree_count_check(complete_graph(4), 7, 0), SizeError);
}
