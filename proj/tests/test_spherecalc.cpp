#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopgas/spherecalc.hpp"

#include <cmath>
#include <random>

using namespace loopgas;

namespace {

DotPoly random_poly(std::mt19937_64& rng, int nvars, int nterms, int max_deg) {
    std::uniform_int_distribution<int> V(0, nvars - 1), D(1, max_deg), C(-5, 5);
    DotPoly p;
    for (int t = 0; t < nterms; ++t) {
        Mono m;
        int deg = D(rng);
        for (int e = 0; e < deg; ++e) {
            int i = V(rng), j = V(rng);
            if (i == j) continue;
            m.emplace_back(std::min(i, j), std::max(i, j));
        }
        std::sort(m.begin(), m.end());
        Rat c(C(rng), 1 + (t % 3));
        p[m] += c;
    }
    return dp_canonicalize(p, {});
}

std::map<VarId, std::array<double, 3>> random_assignment(std::mt19937_64& rng, int nvars) {
    std::normal_distribution<double> G;
    std::map<VarId, std::array<double, 3>> asg;
    for (int v = 0; v < nvars; ++v) {
        double x = G(rng), y = G(rng), z = G(rng);
        double n = std::sqrt(x * x + y * y + z * z);
        asg[v] = {x / n, y / n, z / n};
    }
    return asg;
}

}  // namespace

TEST_CASE("degree-2 moment: integral of (Omega.u)(Omega.v) is (1/3) u.v") {
    DotPoly p = dp_mul(dp_dot(0, 1), dp_dot(0, 2));
    DotPoly r = integrate_out(p, 0, {});
    DotPoly expect = dp_scale(dp_dot(1, 2), Rat(1, 3));
    CHECK(dp_sub(r, expect) == DotPoly{});
}

TEST_CASE("degree-4 moment identity (perfect matchings, weight 1/15)") {
    // ∫ (Ω·u1)(Ω·u2)(Ω·u3)(Ω·u4) = (1/15)[(u1·u2)(u3·u4)+(u1·u3)(u2·u4)+(u1·u4)(u2·u3)]
    DotPoly p = dp_mul(dp_mul(dp_dot(0, 1), dp_dot(0, 2)), dp_mul(dp_dot(0, 3), dp_dot(0, 4)));
    DotPoly r = integrate_out(p, 0, {});
    DotPoly expect = dp_scale(
        dp_add(dp_add(dp_mul(dp_dot(1, 2), dp_dot(3, 4)), dp_mul(dp_dot(1, 3), dp_dot(2, 4))),
               dp_mul(dp_dot(1, 4), dp_dot(2, 3))),
        Rat(1, 15));
    CHECK(dp_sub(r, expect) == DotPoly{});
}

TEST_CASE("odd moments vanish") {
    DotPoly p = dp_mul(dp_mul(dp_dot(0, 1), dp_dot(0, 2)), dp_dot(0, 3));
    CHECK(integrate_out(p, 0, {}) == DotPoly{});
}

TEST_CASE("even power moments: integral of (Omega.u)^{2m} = 1/(2m+1)") {
    // all (2m−1)!! matchings give (u·u)^m = 1, weight 1/(2m+1)!!.
    for (int m = 1; m <= 4; ++m) {
        DotPoly p = dp_const(Rat(1));
        for (int i = 0; i < 2 * m; ++i) p = dp_mul(p, dp_dot(0, 1));
        DotPoly r = integrate_out(p, 0, {});
        CHECK(dp_sub(r, dp_const(Rat(1, 2 * m + 1))) == DotPoly{});
    }
}

TEST_CASE("integrate_out agrees with Gauss-Legendre quadrature") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 6; ++it) {
        DotPoly p = random_poly(rng, 4, 5, 3);
        DotPoly r = integrate_out(p, 0, {});
        auto base = random_assignment(rng, 4);
        base.erase(0);
        double direct = dp_eval(r, base);
        double quad = quad_integrate([&](const auto& asg) { return dp_eval(p, asg); },
                                     {0}, 12, base);
        CHECK(std::abs(direct - quad) < 1e-10);
    }
}

TEST_CASE("fixed vectors fold exactly and match numeric evaluation") {
    FixedCtx ctx;
    ctx.vecs[1] = Vec3{Rat(3, 5), Rat(4, 5), Rat(0)};
    ctx.vecs[2] = Vec3{Rat(0), Rat(0), Rat(1)};
    DotPoly p = dp_mul(dp_dot(1, 2), dp_dot(1, 2));
    DotPoly c = dp_canonicalize(p, ctx);
    CHECK(dp_as_const(c) == Rat(0));  // orthogonal vectors

    // mixed free-fixed pair decomposes over the axis basis without changing
    // values: evaluate both at a random free assignment.
    DotPoly q = dp_mul(dp_dot(0, 1), dp_dot(0, 3));
    DotPoly qc = dp_canonicalize(q, ctx);
    std::mt19937_64 rng(23);
    auto asg = random_assignment(rng, 4);
    asg[1] = {0.6, 0.8, 0.0};
    asg[kAxisX] = {1, 0, 0};
    asg[kAxisY] = {0, 1, 0};
    asg[kAxisZ] = {0, 0, 1};
    CHECK(std::abs(dp_eval(q, asg) - dp_eval(qc, asg)) < 1e-12);
    // no monomial of the canonical form pairs a free var with a non-axis fixed var
    for (const auto& [mono, coef] : qc)
        for (const VPair& pr : mono) {
            bool a_fix = ctx.is_fixed(pr.first), b_fix = ctx.is_fixed(pr.second);
            if (a_fix != b_fix) {
                VarId fixed = a_fix ? pr.first : pr.second;
                CHECK(fixed < 0);  // axis variables only
            }
        }
}

TEST_CASE("integration with a fixed partner uses the bound vector") {
    FixedCtx ctx;
    ctx.vecs[1] = Vec3{Rat(0), Rat(0), Rat(1)};
    // ∫ (Ω·e_z)^2 = 1/3
    DotPoly p = dp_mul(dp_dot(0, 1), dp_dot(0, 1));
    DotPoly r = dp_canonicalize(integrate_out(p, 0, ctx), ctx);
    CHECK(dp_as_const(r) == Rat(1, 3));
}

TEST_CASE("eliminate_factors: greedy and explicit orders agree") {
    // ring of 6 edge factors, integrate all variables
    std::vector<DotPoly> factors;
    for (int i = 0; i < 6; ++i) factors.push_back(dp_edge_factor(i, (i + 1) % 6));
    std::vector<VarId> order{0, 1, 2, 3, 4, 5};
    DotPoly a = eliminate_factors(factors, order, {}, 0, true);
    DotPoly b = eliminate_factors(factors, order, {}, 0, false);
    std::vector<VarId> shuffled{3, 5, 1, 0, 4, 2};
    DotPoly c = eliminate_factors(factors, shuffled, {}, 0, false);
    CHECK(dp_sub(a, b) == DotPoly{});
    CHECK(dp_sub(a, c) == DotPoly{});
    // ∫ ∏(1 − Ω_i·Ω_{i+1}) over a 6-cycle = 1 + (1/3)^5 (only the full loop
    // term survives besides the constant).
    CHECK(dp_as_const(a) == 1 + rat_pow(Rat(1, 3), 5));
}

TEST_CASE("partial elimination leaves surviving variables symbolically") {
    std::vector<DotPoly> factors = {dp_edge_factor(0, 1), dp_edge_factor(1, 2)};
    DotPoly r = eliminate_factors(factors, {1}, {}, 0, true);
    // ∫dΩ_1 (1−Ω_0·Ω_1)(1−Ω_1·Ω_2) = 1 + (1/3)Ω_0·Ω_2
    DotPoly expect = dp_add(dp_const(Rat(1)), dp_scale(dp_dot(0, 2), Rat(1, 3)));
    CHECK(dp_sub(r, expect) == DotPoly{});
}

TEST_CASE("sup bound dominates sampled values") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 5; ++it) {
        DotPoly p = random_poly(rng, 4, 6, 3);
        double bound = rat_double(dp_sup_bound(p));
        for (int s = 0; s < 20; ++s)
            CHECK(std::abs(dp_eval(p, random_assignment(rng, 4))) <= bound + 1e-12);
    }
}

TEST_CASE("node budget triggers a resource error") {
    std::vector<DotPoly> factors;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) factors.push_back(dp_edge_factor(i, j));
    std::vector<VarId> order{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK_THROWS_AS(eliminate_factors(factors, order, {}, 50, true), ResourceLimitError);
}

TEST_CASE("dp_as_const rejects non-constant polynomials") {
    CHECK_THROWS_AS(dp_as_const(dp_dot(0, 1)), UsageError);
    CHECK(dp_as_const(dp_const(Rat(7, 3))) == Rat(7, 3));
}
