// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses only the public API.
#include "loopgas/cluster.hpp"
#include "loopgas/constants.hpp"
#include "loopgas/expansion.hpp"
#include "loopgas/lattice.hpp"
#include "loopgas/polymer.hpp"
#include "loopgas/spherecalc.hpp"
#include "loopgas/symbols.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace loopgas;

namespace {

struct Check {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

// 1. Counting exactness for 1 <= n <= 8, 0 <= d <= 4.
void c01(Check& c) {
    for (int n = 1; n <= 8; ++n)
        for (int d = 0; d <= 4; ++d) {
            Region r = build_volume({0, 0}, n, d);
            long expect = 3L * (3 * d + 2) * n * n - 3L * d * n;
            c.require((long)r.vertices.size() == expect,
                      "volume size n=" + std::to_string(n) + " d=" + std::to_string(d));
            c.require((long)boundary_size(r) == 6L * n,
                      "boundary size n=" + std::to_string(n) + " d=" + std::to_string(d));
        }
}

// 2. Partition audit: |I_n| = 4n^2 for n <= 4; same-part gap volumes disjoint.
void c02(Check& c) {
    for (int n = 1; n <= 4; ++n) {
        SeparatingPartition sp = separating_partition(n, 6 * n);
        c.require((int)sp.index_set.size() == 4 * n * n,
                  "index set size n=" + std::to_string(n));
    }
    for (int n : {2, 3})
        for (int d : {0, 1}) {
            SeparatingPartition sp = separating_partition(n, 6 * n);
            for (const auto& [idx, sites] : sp.parts) {
                std::set<Vertex> seen;
                for (const DualSite& s : sites) {
                    Region g = build_gap_volume(s, n, d);
                    for (const Vertex& v : g.vertices)
                        c.require(seen.insert(v).second,
                                  "gap-volume overlap n=" + std::to_string(n) +
                                      " d=" + std::to_string(d));
                }
            }
        }
}

// 3. Polymer counting lemmas on a Lambda_3-scale window.
void c03(Check& c) {
    // N = 4 so that the middle hexagon ring provides polymers touching neither
    // boundary; the annulus is still Lambda_3-sized.
    PolymerFamily fam = enumerate_family({0, 0}, 4, 1, 0, Variant::Interior, 8);
    Region reg = build_volume({0, 0}, 4, 0);
    // per-vertex bound 3(k+1)2^{k-2} for k <= 8
    for (int k = 1; k <= 8; ++k) {
        double bound = 3.0 * (k + 1) * std::pow(2.0, k - 2);
        for (const Vertex& v : reg.vertices)
            c.require((double)count_through_vertex(v.u, k, fam) <= bound,
                      "per-vertex bound k=" + std::to_string(k));
    }
    // n_k(p) <= C_k (l(p)+1), C_k = {1,4,5,10}, at every vertex class
    Window w = build_window({0, 0}, 4, 1);
    const int C[5] = {0, 1, 4, 5, 10};
    bool cls[4] = {false, false, false, false};  // interior, dK, dN, bridge
    for (const Polymer& p : fam.members) {
        bool hitK = false, hitN = false;
        for (const UVert& v : p.path) {
            hitK = hitK || w.dK.count(v);
            hitN = hitN || w.dN.count(v);
        }
        cls[hitK && hitN ? 3 : hitN ? 2 : hitK ? 1 : 0] = true;
        for (int k = 1; k <= 4; ++k)
            c.require((long)count_intersecting(p, k, fam) <= (long)C[k] * (p.length() + 1),
                      "n_k bound k=" + std::to_string(k));
    }
    for (int i = 0; i < 4; ++i)
        c.require(cls[i], "vertex class " + std::to_string(i) + " not represented");
}

// 4. Closed-form weights equal the defining sphere integrals; one-step and
// degree-4 moment identities.
void c04(Check& c) {
    for (int d : {0, 1}) {
        PolymerFamily fam =
            enumerate_family({0, 0}, 2, 1, d, Variant::Interior, 12 / (d + 1));
        VarRegistry reg;
        std::size_t checked = 0;
        for (const Polymer& p : fam.members) {
            std::vector<Edge> edges = raw_edges(p, d);
            if (edges.size() > 12) continue;
            std::vector<DotPoly> factors;
            std::set<VarId> interior;
            for (const Edge& e : edges) {
                VarId a = reg.id(e.a), b = reg.id(e.b);
                factors.push_back(dp_scale(dp_dot(a, b), Rat(-1)));
                interior.insert(a);
                interior.insert(b);
            }
            if (p.kind == Polymer::Walk) {
                interior.erase(reg.id(Vertex::base(p.path.front())));
                interior.erase(reg.id(Vertex::base(p.path.back())));
            }
            DotPoly integral = eliminate_factors(
                factors, std::vector<VarId>(interior.begin(), interior.end()), {});
            c.require(dp_sub(integral, weight(p, d, reg)) == DotPoly{}, "weight mismatch");
            ++checked;
        }
        c.require(checked > 10, "too few polymers checked at d=" + std::to_string(d));
    }
    // one integration step along a chain
    DotPoly r = eliminate_factors({dp_edge_factor(0, 1), dp_edge_factor(1, 2)}, {1}, {});
    c.require(dp_sub(r, dp_add(dp_const(Rat(1)), dp_scale(dp_dot(0, 2), Rat(1, 3)))) ==
                  DotPoly{},
              "one-step identity");
    // degree-4 moment against a fixed axis
    DotPoly m4 = eliminate_factors(
        {dp_dot(0, kAxisZ), dp_dot(0, kAxisZ), dp_dot(0, kAxisZ), dp_dot(0, kAxisZ)}, {0},
        {});
    c.require(dp_sub(m4, dp_const(Rat(1, 5))) == DotPoly{}, "degree-4 moment");
}

// 5. Partition function: hard-core route equals the cycle-space brute force.
void c05(Check& c) {
    c.require(Z_value({0, 0}, 1, 0) == (1 + rat_pow(Rat(1, 3), 5)) / 64,
              "Z_1^(0) closed form");
    for (auto [n, d] :
         {std::pair{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}}) {
        Region reg = build_volume({0, 0}, n, d);
        Rat cs = cycle_space_sum({0, 0}, n, d) / rat_pow(Rat(2), (long)reg.edges.size());
        c.require(Z_value({0, 0}, n, d) == cs,
                  "Z route mismatch n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
}

// 6. Bulk-boundary consistency at N=2, K=1, d=0 for A in {1, edge symbol}.
void c06(Check& c) {
    VarRegistry reg;
    Region rn = build_volume({0, 0}, 2, 0);
    std::vector<VarId> bdN;
    for (const Vertex& v : rn.boundary()) bdN.push_back(reg.id(v));
    DotPoly ring = phi_ring_engine({0, 0}, 2, 1, 0, reg);
    DotPoly phi = phi_engine({0, 0}, 2, 1, 0, reg);
    c.require(dp_sub(eliminate_factors({ring}, bdN, {}), phi) == DotPoly{},
              "A = 1: ring integral != bulk");
    Region rk = build_volume({0, 0}, 1, 0);
    const Edge& e = *rk.edges.begin();
    DotPoly A = dp_dot(reg.id(e.a), reg.id(e.b));
    std::vector<VarId> bdK;
    for (const Vertex& v : rk.boundary()) bdK.push_back(reg.id(v));
    Rat za = dp_as_const(eliminate_factors({phi, A}, bdK, {}));
    std::vector<VarId> all = bdK;
    all.insert(all.end(), bdN.begin(), bdN.end());
    Rat zb = dp_as_const(eliminate_factors({ring, A}, all, {}));
    c.require(za == zb, "A = edge symbol: integrals differ");
}

// 7. Cluster identity: exp of the truncated log series vs the hard-core sum.
void c07(Check& c) {
    auto loop_w = [](int d) {
        return WeightFn([d](const Polymer& p) -> Rat {
            if (p.kind != Polymer::Loop) return Rat(0);
            return rat_pow(Rat(1, 3), (d + 1) * p.length() - 1);
        });
    };
    {
        PolymerFamily fam = enumerate_family({0, 0}, 1, 0, 0, Variant::Bulk, -1);
        c.require(verify_exp_identity(fam, loop_w(3), 60) < 1e-12,
                  "single-polymer log(1+w)");
    }
    int fams = 0;
    for (auto [cap, cutoff] : {std::pair{10, 20}, {14, 24}, {24, 24}}) {
        PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, cap);
        c.require(verify_exp_identity(fam, loop_w(3), cutoff) < 1e-9,
                  "exp identity, cap=" + std::to_string(cap));
        ++fams;
    }
    c.require(fams >= 3, "need >= 3 families");
}

// 8. Convergence criterion.
void c08(Check& c) {
    c.require(ueltschi_criterion(3, 1.0).ok, "(eps,d)=(1,3) should pass");
    c.require(!ueltschi_criterion(0, 1.0).ok, "(eps,d)=(1,0) should fail");
}

// 9. Constants golden values with certified interval signs.
void c09(Check& c) {
    c.require(std::abs(alpha(5) - 0.0032) < 5e-4, "alpha(5)");
    ClusterRatio cr = cluster_ratio(0.03);
    c.require(std::abs(cr.r - 0.9424) < 1e-3, "r(0.03)");
    c.require(cr.r_over_1mr < 17, "r/(1-r)");
    for (int k = 1; k <= 10; ++k) c.require(102 * k == 17 * 6 * k, "102k = 17*6k");
    c.require(alpha_interval(5).certainly_positive(), "alpha(5) interval sign");
    c.require(alpha_interval(4).certainly_negative(), "alpha(4) interval sign");
    c.require(std::isfinite(log_C_alpha(5)), "ln C_alpha finite");
}

// 10. Symbol worked example, tensor powers, matrix-entry formula.
void c10(Check& c) {
    auto A = op_scale(normal_order({"du", "u"}, 2), Rat(1, 3));
    NormResult nr = operator_norm(A);
    c.require(nr.is_exact && nr.exact == Rat(1), "||A|| = 1");
    Symbol sym = symbol(A);
    c.require(symbol_sup_bound(sym) == Rat(4, 3), "sup|A(Omega)| = 4/3");
    Rat nn = 1, ss = 1;
    for (int t = 1; t <= 5; ++t) {
        nn *= nr.exact;
        ss *= symbol_sup_bound(sym);
        c.require(nn == Rat(1) && ss == rat_pow(Rat(4, 3), t),
                  "tensor power n=" + std::to_string(t));
    }
    for (int m : {2, 3}) {
        std::vector<PolyOperator> ops = {
            normal_order({"du", "u"}, m),
            op_add(normal_order({"v", "dv"}, m),
                   op_scale(normal_order({"u", "du"}, m), Rat(-1))),
            normal_order({"v", "du"}, m),
            normal_order({"u", "dv"}, m),
            normal_order({"u", "v", "du", "dv"}, m),
            normal_order({"u", "u", "dv", "dv"}, m)};
        for (const PolyOperator& op : ops) {
            Symbol s = symbol(op);
            for (int r = 0; r <= m; ++r)
                for (int t = 0; t <= m; ++t)
                    c.require(symbol_matrix_entry(s, m, r, t) == matrix_entry(op, r, t),
                              "matrix entry m=" + std::to_string(m));
        }
    }
}

// 11. Indistinguishability at desk scale: exact gap audit, d = 0, K = 1;
// dominated by the exact majorant and non-increasing from N = 2 to N = 3.
void c11(Check& c) {
    Region rk = build_volume({0, 0}, 1, 0);
    const Edge& e = *rk.edges.begin();
    double prev_max = 0;
    for (int N : {2, 3}) {
        VarRegistry reg;
        DotPoly A = dp_dot(reg.id(e.a), reg.id(e.b));
        GapReport rep = indistinguishability_gap(A, {0, 0}, N, 1, 0, reg, 42, 20);
        c.require(rep.exact_dominates, "majorant violated at N=" + std::to_string(N));
        c.require((int)rep.samples.size() == 20, "sample count at N=" + std::to_string(N));
        c.require(std::isfinite(rep.max_gap), "gap not finite");
        if (N == 3) c.require(rep.max_gap <= prev_max, "gap increased from N=2 to N=3");
        prev_max = rep.max_gap;
    }
}

// 12. Restricted cluster bound with d = 5 weights at cutoff 14.
void c12(Check& c) {
    RestrictedBound rb = restricted_cluster_bound(1, 5, alpha(5), 0.03, 14);
    c.require(rb.clusters > 0, "no clusters enumerated");
    c.require(rb.truncated_sum <= rb.paper_bound, "bound violated");
    c.require(std::isfinite(rb.tail_bound), "tail bound not finite");
}

// 13. Lieb-Robinson summability for 9 sampled pairs, d <= 2, two (a,a',theta,p)
// configurations.
void c13(Check& c) {
    int pairs = 0;
    for (int d = 0; d <= 2; ++d) {
        Region inner = build_volume({0, 0}, 1, d);
        std::vector<Vertex> vs(inner.vertices.begin(), inner.vertices.end());
        for (std::size_t off : {std::size_t{0}, vs.size() / 3, vs.size() - 2}) {
            const Vertex &x = vs[off], &y = vs[(off + 3) % vs.size()];
            c.require(f_norm_check(x, y, d, 1.0, 0.5, 1.0, 0.0, 40).ok,
                      "theta=1 pair at d=" + std::to_string(d));
            c.require(f_norm_check(x, y, d, 1.0, 0.5, 0.5, 2.0, 40).ok,
                      "theta=1/2 pair at d=" + std::to_string(d));
            ++pairs;
        }
    }
    c.require(pairs == 9, "expected 9 sampled pairs");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Check&)> fn;
    };
    std::vector<Criterion> cs = {
        {"counting exactness", c01},
        {"separating partition audit", c02},
        {"polymer counting lemmas", c03},
        {"weight/integral oracle", c04},
        {"hard-core representation of Z_N", c05},
        {"bulk-boundary consistency", c06},
        {"cluster exp identity", c07},
        {"convergence criterion", c08},
        {"constants golden values", c09},
        {"symbol worked example", c10},
        {"indistinguishability gap audit", c11},
        {"restricted cluster bound", c12},
        {"Lieb-Robinson summability", c13},
    };
    int failures = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        Check chk;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cs[i].fn(chk);
        } catch (const std::exception& ex) {
            chk.ok = false;
            chk.detail = std::string("exception: ") + ex.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %-36s %s (%.1fs)%s%s\n", i + 1, cs[i].name,
                    chk.ok ? "PASS" : "FAIL", secs, chk.ok ? "" : " -- ",
                    chk.ok ? "" : chk.detail.c_str());
        std::fflush(stdout);
        if (!chk.ok) ++failures;
    }
    std::printf("%d/13 criteria passed\n", 13 - failures);
    return failures == 0 ? 0 : 1;
}
