#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopgas/cluster.hpp"
#include "loopgas/constants.hpp"

#include <cmath>
#include <random>

using namespace loopgas;

namespace {

WeightFn loop_weight(int d) {
    return [d](const Polymer& p) -> Rat {
        Rat base = rat_pow(Rat(1, 3), (d + 1) * p.length() - 1);
        if (p.kind == Polymer::Loop) return base;
        return Rat(0);  // scalar surrogate: drop walks
    };
}

}  // namespace

TEST_CASE("Ursell function: singletons, pairs, and identical copies") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 8);
    REQUIRE(fam.members.size() >= 2);
    const Polymer& p = fam.members.front();
    CHECK(ursell({p}) == Rat(1));
    // m identical copies: complete graph, phi_c = (−1)^{m−1}/m
    for (int m = 2; m <= 8; ++m) {
        std::vector<Polymer> seq(m, p);
        Rat expect = Rat((m % 2) ? 1 : -1, m);
        CHECK(ursell(seq) == expect);
    }
    // disconnected pair vanishes
    for (const Polymer& q : fam.members)
        if (!connectivity(p, q)) {
            CHECK(ursell({p, q}) == Rat(0));
            break;
        }
}

TEST_CASE("Ursell subset DP equals the edge-subset brute force") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 10);
    std::vector<Polymer> pool(fam.members.begin(),
                              fam.members.begin() + std::min<std::size_t>(6, fam.members.size()));
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> U(0, pool.size() - 1);
    for (int it = 0; it < 30; ++it) {
        int m = 2 + (int)(it % 4);
        std::vector<Polymer> seq;
        for (int i = 0; i < m; ++i) seq.push_back(pool[U(rng)]);
        CHECK(ursell(seq) == ursell_bruteforce(seq));
    }
}

TEST_CASE("multiplicity-form Ursell equals the labeled subset DP") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 10);
    std::vector<Polymer> supp;
    for (const Polymer& p : fam.members) {
        if (supp.size() >= 3) break;
        bool conn_all = true;
        for (const Polymer& q : supp) conn_all = conn_all && connectivity(p, q);
        if (conn_all) supp.push_back(p);
    }
    REQUIRE(supp.size() == 3);
    std::vector<std::vector<char>> adj(3, std::vector<char>(3, 1));
    for (std::vector<int> mult : std::vector<std::vector<int>>{
             {1, 1, 1}, {2, 1, 0}, {2, 2, 1}, {3, 0, 1}, {2, 2, 2}}) {
        std::vector<Polymer> seq;
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < mult[i]; ++c) seq.push_back(supp[i]);
        CHECK(ursell_multiplicity(adj, mult) == ursell(seq));
    }
}

TEST_CASE("Ursell growth: m!/prod X! |phi_c| <= e^{kappa * total length}") {
    double kappa = malyshev_kappa(mu_constant());
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 3, Variant::Bulk, 12);
    for_each_cluster(fam, 24, nullptr, [&](const std::vector<int>& supp,
                                           const std::vector<int>& mult) {
        int m = 0, total = 0;
        Rat perm = 1;
        std::vector<std::vector<char>> adj(supp.size(), std::vector<char>(supp.size()));
        for (std::size_t i = 0; i < supp.size(); ++i)
            for (std::size_t j = 0; j < supp.size(); ++j)
                adj[i][j] = i == j || connectivity(fam.members[supp[i]], fam.members[supp[j]]);
        for (std::size_t i = 0; i < supp.size(); ++i) {
            m += mult[i];
            total += mult[i] * fam.members[supp[i]].length();
            for (int c = 1; c <= mult[i]; ++c) perm *= c;
        }
        if (m > 6) return;
        Rat fact = 1;
        for (int c = 1; c <= m; ++c) fact *= c;
        double lhs = std::abs(rat_double(ursell_multiplicity(adj, mult) * fact / perm));
        CHECK(lhs <= std::exp(kappa * total) * (1 + 1e-12));
    });
}

TEST_CASE("exp identity: hard-core sum equals exp of the cluster log series") {
    // single polymer: log(1 + w) to truncation remainder
    {
        PolymerFamily fam = enumerate_family({0, 0}, 1, 0, 0, Variant::Bulk, -1);
        REQUIRE(fam.members.size() == 1);
        CHECK(verify_exp_identity(fam, loop_weight(3), 60) < 1e-12);
    }
    // three families with d = 3 weights
    // three families with d = 3 weights (w ~ 3^{-4l}, so modest cutoffs
    // already leave a remainder far below 1e-9)
    for (auto [cap, cutoff] : {std::pair{10, 20}, {14, 24}, {24, 24}}) {
        PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, cap);
        CHECK(verify_exp_identity(fam, loop_weight(3), cutoff) < 1e-9);
    }
}

TEST_CASE("truncated log series is stable under cutoff growth") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 10);
    Rat a = cluster_log_series(fam, loop_weight(3), 30);
    Rat b = cluster_log_series(fam, loop_weight(3), 40);
    CHECK(std::abs(rat_double(a - b)) < 1e-10);
}

TEST_CASE("convergence constants reproduce their stated values") {
    CHECK(mu_constant() == doctest::Approx(2 * std::pow(9.0, 0.2)).epsilon(1e-12));
    CHECK(mu_constant() == doctest::Approx(3.1037).epsilon(1e-4));
    CHECK(f_ratio(2 * std::exp(1.0) * mu_constant()) == doctest::Approx(0.0575).epsilon(1e-2));
    CHECK(cluster_ratio_r(0.03) == doctest::Approx(0.9424).epsilon(1e-3));
    double r = cluster_ratio_r(0.03);
    CHECK(r / (1 - r) < 17);
    CHECK(malyshev_kappa(mu_constant()) ==
          doctest::Approx(4 / std::exp(1.0) + std::log(mu_constant())));
    // r decreasing in epsilon
    double prev = cluster_ratio_r(0.03);
    for (double eps : {0.1, 0.3, 0.6, 1.0, 2.0}) {
        double cur = cluster_ratio_r(eps);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("convergence criterion: bound form") {
    UeltschiReport ok = ueltschi_criterion(3, 1.0);
    CHECK(ok.ok);
    CHECK(ok.sup_value < ok.epsilon);
    UeltschiReport bad = ueltschi_criterion(0, 1.0);
    CHECK_FALSE(bad.ok);
}

TEST_CASE("convergence criterion: enumeration never exceeds the bound form") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 14);
    for (int d : {2, 3}) {
        UeltschiReport enum_form = ueltschi_criterion(fam, d, 1.0);
        UeltschiReport bound_form = ueltschi_criterion(d, 1.0);
        CHECK(enum_form.sup_value <= bound_form.sup_value + 1e-12);
    }
}

TEST_CASE("restricted cluster bound holds and the threshold gate throws") {
    double a5 = alpha(5);
    RestrictedBound rb = restricted_cluster_bound(1, 5, a5, 0.03, 8);
    CHECK(rb.truncated_sum <= rb.paper_bound);
    CHECK(rb.r == doctest::Approx(0.9424).epsilon(1e-3));
    CHECK(rb.clusters > 0);
    CHECK_THROWS_AS(restricted_cluster_bound(1, 0, 0.0, 0.03, 8), UsageError);
}

TEST_CASE("scalar hard-core sum matches direct expansion on a tiny family") {
    PolymerFamily fam = enumerate_family({0, 0}, 1, 0, 0, Variant::Bulk, -1);
    REQUIRE(fam.members.size() == 1);
    Rat w = loop_weight(0)(fam.members.front());
    CHECK(hardcore_scalar_sum(fam, loop_weight(0)) == 1 + w);
}
