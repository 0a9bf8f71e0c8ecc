#include "loopgas/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

namespace loopgas {

DotPoly weight(const Polymer& p, int d, VarRegistry& reg) {
    long E = (long)(d + 1) * p.length();
    if (p.kind == Polymer::Loop) return dp_const(rat_pow(Rat(1, 3), E - 1));
    VarId a = reg.id(Vertex::base(p.path.front()));
    VarId b = reg.id(Vertex::base(p.path.back()));
    // (−1/3)^{E−1}·(−Ω_a·Ω_b)
    return dp_scale(dp_dot(a, b), -rat_pow(Rat(-1, 3), E - 1));
}

// ---------------------------------------------------------------- hard core

namespace {

struct HcItem {
    Mask128 mask;
    DotPoly w;
    Rat wc;       // constant value when `constant`
    bool constant;
    int len;
};

}  // namespace

HardCoreSum phi_hardcore(const PolymerFamily& family, VarRegistry& reg, int max_total_length,
                         bool literal, std::size_t node_budget, const FixedCtx* ctx) {
    Window w = build_window(family.center, family.N, family.K);
    if (w.vN.size() > 128)
        throw ResourceLimitError("phi_hardcore: substrate exceeds 128 vertices");
    std::map<UVert, int> bit;
    for (const UVert& v : w.vN) bit.emplace(v, (int)bit.size());

    std::set<UVert> fixed = w.dK;
    if (family.variant == Variant::Interior)
        fixed.insert(w.dN.begin(), w.dN.end());

    std::vector<HcItem> items;
    for (const Polymer& p : family.members) {
        if (!literal) {
            if (p.kind == Polymer::Loop) {
                int nfixed = 0;
                for (const UVert& v : p.path) nfixed += fixed.count(v) ? 1 : 0;
                if (nfixed >= 2) continue;  // arises as a pair of walks instead
            } else {
                bool pass_through = false;
                for (std::size_t i = 1; i + 1 < p.path.size(); ++i)
                    if (fixed.count(p.path[i])) pass_through = true;
                if (pass_through) continue;  // decomposes into shorter walks
            }
        }
        HcItem it;
        it.len = p.length();
        bool endpoint_exempt = !literal;
        for (std::size_t i = 0; i < p.path.size(); ++i) {
            bool is_ep = p.kind == Polymer::Walk && (i == 0 || i + 1 == p.path.size());
            if (endpoint_exempt && (is_ep || fixed.count(p.path[i])) &&
                fixed.count(p.path[i]))
                continue;  // fixed boundary sites may be shared
            it.mask.set(bit.at(p.path[i]));
        }
        it.w = weight(p, family.d, reg);
        if (ctx) it.w = dp_canonicalize(it.w, *ctx);
        it.constant = it.w.size() <= 1 && (it.w.empty() || it.w.begin()->first.empty());
        it.wc = it.constant ? dp_as_const(it.w) : Rat(0);
        items.push_back(std::move(it));
    }

    bool all_const = std::all_of(items.begin(), items.end(),
                                 [](const HcItem& i) { return i.constant; });
    // Weights of the form +3^{−e} admit a pure-integer histogram path.
    bool all_pow3 = all_const;
    std::vector<int> pow3e(items.size(), 0);
    for (std::size_t i = 0; all_pow3 && i < items.size(); ++i) {
        Int num = numerator(items[i].wc), den = denominator(items[i].wc);
        if (num != 1) {
            all_pow3 = false;
            break;
        }
        int e = 0;
        while (den % 3 == 0) {
            den /= 3;
            ++e;
        }
        if (den != 1) all_pow3 = false;
        pow3e[i] = e;
    }

    std::size_t nodes = 0;
    auto charge = [&] {
        if (++nodes > node_budget)
            throw ResourceLimitError("phi_hardcore: node budget exceeded");
    };

    HardCoreSum out;
    out.N = family.N;
    out.K = family.K;
    out.d = family.d;
    out.variant = family.variant;
    out.truncation = max_total_length;
    {
        Region rn = build_volume(family.center, family.N, family.d);
        std::size_t ek = 0;
        if (family.K > 0) ek = build_volume(family.center, family.K, family.d).edges.size();
        out.prefactor_log2 = (long)(rn.edges.size() - ek);
    }

    if (all_pow3) {
        // Histogram over the total exponent: collection weight = 3^{−Σe}.
        std::size_t n = items.size();
        std::vector<std::uint64_t> mlo(n), mhi(n);
        std::vector<int> len(n);
        int emax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mlo[i] = items[i].mask.lo;
            mhi[i] = items[i].mask.hi;
            len[i] = items[i].len;
            emax += pow3e[i];
        }
        std::vector<long long> hist((std::size_t)emax + 1, 0);
        struct Rec {
            const std::uint64_t *mlo, *mhi;
            const int *len, *e;
            std::size_t n;
            int cutoff;
            std::vector<long long>* hist;
            std::size_t* nodes;
            std::size_t budget;
            void run(std::size_t start, std::uint64_t lo, std::uint64_t hi, int l, int ex) {
                for (std::size_t j = start; j < n; ++j) {
                    if ((lo & mlo[j]) || (hi & mhi[j])) continue;
                    if (cutoff >= 0 && l + len[j] > cutoff) continue;
                    if (++*nodes > budget)
                        throw ResourceLimitError("phi_hardcore: node budget exceeded");
                    (*hist)[(std::size_t)(ex + e[j])]++;
                    run(j + 1, lo | mlo[j], hi | mhi[j], l + len[j], ex + e[j]);
                }
            }
        } rec{mlo.data(), mhi.data(), len.data(), pow3e.data(),
              n,          max_total_length, &hist, &nodes, node_budget};
        rec.run(0, 0, 0, 0, 0);
        Rat total = 1;
        for (std::size_t e = 0; e < hist.size(); ++e)
            if (hist[e]) total += Rat(hist[e]) * rat_pow(Rat(1, 3), (long)e);
        out.value = dp_const(total);
        return out;
    }

    if (all_const) {
        Rat total = 1;
        std::function<void(std::size_t, Mask128, const Rat&, int)> rec =
            [&](std::size_t start, Mask128 mask, const Rat& cur, int len) {
                for (std::size_t j = start; j < items.size(); ++j) {
                    if (max_total_length >= 0 && len + items[j].len > max_total_length)
                        continue;
                    if (mask.intersects(items[j].mask)) continue;
                    charge();
                    Rat nw = cur * items[j].wc;
                    total += nw;
                    rec(j + 1, mask | items[j].mask, nw, len + items[j].len);
                }
            };
        rec(0, Mask128{}, Rat(1), 0);
        out.value = dp_const(total);
        return out;
    }

    DotPoly total = dp_const(1);
    std::function<void(std::size_t, Mask128, const DotPoly&, int)> rec =
        [&](std::size_t start, Mask128 mask, const DotPoly& cur, int len) {
            for (std::size_t j = start; j < items.size(); ++j) {
                if (max_total_length >= 0 && len + items[j].len > max_total_length)
                    continue;
                if (mask.intersects(items[j].mask)) continue;
                charge();
                DotPoly nw = dp_mul(cur, items[j].w);
                total = dp_add(total, nw);
                rec(j + 1, mask | items[j].mask, nw, len + items[j].len);
            }
        };
    rec(0, Mask128{}, dp_const(1), 0);
    out.value = std::move(total);
    return out;
}

// --------------------------------------------------------- cycle-space oracle

Rat cycle_space_sum(DualSite center, int N, int d) {
    Window w = build_window(center, N, 0);
    std::vector<UEdge> edges(w.bN.begin(), w.bN.end());
    if (edges.size() > 128)
        throw ResourceLimitError("cycle_space_sum: more than 128 edges");
    std::map<UEdge, int> eidx;
    for (std::size_t i = 0; i < edges.size(); ++i) eidx.emplace(edges[i], (int)i);
    std::map<UVert, int> vidx;
    for (const UVert& v : w.vN) vidx.emplace(v, (int)vidx.size());

    // BFS spanning tree; fundamental cycle per non-tree edge.
    std::map<UVert, UVert> parent;
    std::map<UVert, int> depth;
    std::vector<UEdge> nontree;
    {
        std::set<UVert> seen;
        std::vector<UVert> q;
        std::set<UEdge> tree;
        for (const UVert& root : w.vN) {
            if (seen.count(root)) continue;
            seen.insert(root);
            depth[root] = 0;
            q.push_back(root);
            for (std::size_t h = q.size() - 1; h < q.size(); ++h) {
                UVert v = q[h];
                for (UVert n : uneighbors(v)) {
                    if (!w.bN.count(UEdge(v, n))) continue;
                    if (seen.count(n)) continue;
                    seen.insert(n);
                    parent[n] = v;
                    depth[n] = depth[v] + 1;
                    tree.insert(UEdge(v, n));
                    q.push_back(n);
                }
            }
        }
        for (const UEdge& e : edges)
            if (!tree.count(e)) nontree.push_back(e);
    }
    std::vector<Mask128> fc;
    for (const UEdge& e : nontree) {
        Mask128 m;
        m.set(eidx.at(e));
        UVert a = e.u, b = e.v;
        while (depth[a] > depth[b]) {
            m.set(eidx.at(UEdge(a, parent[a])));
            a = parent[a];
        }
        while (depth[b] > depth[a]) {
            m.set(eidx.at(UEdge(b, parent[b])));
            b = parent[b];
        }
        while (!(a == b)) {
            m.set(eidx.at(UEdge(a, parent[a])));
            m.set(eidx.at(UEdge(b, parent[b])));
            a = parent[a];
            b = parent[b];
        }
        fc.push_back(m);
    }

    int rank = (int)fc.size();
    if (rank > 30) throw ResourceLimitError("cycle_space_sum: cycle rank too large");

    // Gray-code walk over the cycle space, histogram of (components, edges).
    std::map<std::pair<int, int>, long long> hist;
    Mask128 cur;
    std::vector<int> uf(w.vN.size());
    for (std::uint64_t i = 1; i < (1ull << rank); ++i) {
        int b = std::countr_zero(i);
        cur.lo ^= fc[b].lo;
        cur.hi ^= fc[b].hi;
        int E = std::popcount(cur.lo) + std::popcount(cur.hi);
        // connected components via union-find over touched vertices
        std::iota(uf.begin(), uf.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        std::set<int> touched;
        int unions = 0;
        for (std::size_t j = 0; j < edges.size(); ++j) {
            bool on = j < 64 ? (cur.lo >> j) & 1 : (cur.hi >> (j - 64)) & 1;
            if (!on) continue;
            int a = vidx.at(edges[j].u), bb = vidx.at(edges[j].v);
            touched.insert(a);
            touched.insert(bb);
            int ra = find(a), rb = find(bb);
            if (ra != rb) {
                uf[ra] = rb;
                ++unions;
            }
        }
        int c = (int)touched.size() - unions;
        hist[{c, E}]++;
    }

    Rat total = 1;  // empty subgraph
    for (const auto& [ce, cnt] : hist) {
        auto [c, E] = ce;
        // c disjoint cycles with E undecorated edges: ∏ (1/3)^{(d+1)ℓᵢ−1}
        total += Rat(cnt) * rat_pow(Rat(3), c) * rat_pow(Rat(1, 3), (long)(d + 1) * E);
    }
    return total;
}

Rat Z_value(DualSite center, int N, int d) {
    PolymerFamily loops = enumerate_family(center, N, 0, d, Variant::Bulk);
    VarRegistry reg;
    HardCoreSum hc = phi_hardcore(loops, reg);
    return rat_pow(Rat(1, 2), hc.prefactor_log2) * dp_as_const(hc.value);
}

// ------------------------------------------------------------- engine routes

namespace {

std::vector<DotPoly> region_edge_factors(const Region& rn, const Region* rk,
                                         VarRegistry& reg) {
    std::vector<DotPoly> fs;
    for (const Edge& e : rn.edges) {
        if (rk && rk->edges.count(e)) continue;
        fs.push_back(dp_edge_factor(reg.id(e.a), reg.id(e.b)));
    }
    return fs;
}

void check_support(const DotPoly& A, const Region& allowed, const VarRegistry& reg,
                   const char* what) {
    for (const auto& [m, c] : A)
        for (const VPair& pr : m)
            for (VarId v : {pr.first, pr.second}) {
                if (v < 0 || v >= (VarId)reg.rev.size())
                    throw UsageError(std::string(what) + ": unknown variable in observable");
                if (!allowed.vertices.count(reg.rev[v]))
                    throw UsageError(std::string(what) +
                                     ": observable support outside allowed region");
            }
}

}  // namespace

DotPoly phi_engine(DualSite center, int N, int K, int d, VarRegistry& reg,
                   const FixedCtx& ctx, std::size_t node_budget) {
    if (!(0 <= K && K < N)) throw UsageError("phi_engine: need 0 <= K < N");
    Region rn = build_volume(center, N, d);
    Region rk;
    if (K > 0) rk = build_volume(center, K, d);
    std::vector<DotPoly> fs = region_edge_factors(rn, K > 0 ? &rk : nullptr, reg);
    std::vector<VarId> elim;
    for (const Vertex& v : rn.vertices)
        if (!(K > 0 && rk.vertices.count(v))) elim.push_back(reg.id(v));
    return eliminate_factors(fs, std::move(elim), ctx, node_budget, false);
}

DotPoly phi_ring_engine(DualSite center, int N, int K, int d, VarRegistry& reg,
                        const FixedCtx& ctx, std::size_t node_budget) {
    if (!(0 <= K && K < N)) throw UsageError("phi_ring_engine: need 0 <= K < N");
    if (N < 2) throw UsageError("phi_ring_engine: need N >= 2");
    Region rn = build_volume(center, N, d);
    Region rk;
    if (K > 0) rk = build_volume(center, K, d);
    std::set<Vertex> bd = rn.boundary();
    std::vector<DotPoly> fs = region_edge_factors(rn, K > 0 ? &rk : nullptr, reg);
    std::vector<VarId> elim;
    for (const Vertex& v : rn.vertices)
        if (!(K > 0 && rk.vertices.count(v)) && !bd.count(v)) elim.push_back(reg.id(v));
    return eliminate_factors(fs, std::move(elim), ctx, node_budget, false);
}

Rat bulk_expectation(const DotPoly& A, DualSite center, int N, int K, int d,
                     VarRegistry& reg, std::size_t node_budget) {
    if (!(0 <= K && K < N)) throw UsageError("bulk_expectation: need 0 <= K < N");
    Region rn = build_volume(center, N, d);
    Region rk = build_volume(center, std::max(K, 1), d);
    check_support(A, rk, reg, "bulk_expectation");
    std::vector<VarId> elim;
    for (const Vertex& v : rn.vertices) elim.push_back(reg.id(v));
    FixedCtx ctx;
    std::vector<DotPoly> fs = region_edge_factors(rn, nullptr, reg);
    Rat den = dp_as_const(eliminate_factors(fs, elim, ctx, node_budget, false));
    fs.push_back(A);
    Rat num = dp_as_const(eliminate_factors(fs, elim, ctx, node_budget, false));
    if (den == 0) throw std::runtime_error("bulk_expectation: zero partition function");
    return num / den;
}

Rat boundary_expectation(const DotPoly& A, DualSite center, int N, int K, int d,
                         VarRegistry& reg, const std::map<Vertex, Vec3>& boundary,
                         std::size_t node_budget) {
    if (!(0 <= K && K < N)) throw UsageError("boundary_expectation: need 0 <= K < N");
    if (N < 2) throw UsageError("boundary_expectation: need N >= 2");
    Region rn = build_volume(center, N, d);
    Region rk = build_volume(center, std::max(K, 1), d);
    check_support(A, rk, reg, "boundary_expectation");
    std::set<Vertex> bd = rn.boundary();
    FixedCtx ctx;
    for (const Vertex& v : bd) {
        auto it = boundary.find(v);
        if (it == boundary.end())
            throw UsageError("boundary_expectation: assignment misses a boundary site");
        if (!it->second.is_unit())
            throw UsageError("boundary_expectation: non-unit boundary vector");
        ctx.vecs[reg.id(v)] = it->second;
    }
    std::vector<VarId> elim;
    for (const Vertex& v : rn.vertices)
        if (!bd.count(v)) elim.push_back(reg.id(v));
    std::vector<DotPoly> fs = region_edge_factors(rn, nullptr, reg);
    Rat den = dp_as_const(eliminate_factors(fs, elim, ctx, node_budget, false));
    fs.push_back(A);
    Rat num = dp_as_const(eliminate_factors(fs, elim, ctx, node_budget, false));
    if (den == 0)
        throw std::runtime_error("boundary_expectation: zero boundary partition function");
    return num / den;
}

Rat ground_state_expectation(const DotPoly& A, DualSite center, int N, int d,
                             VarRegistry& reg, const std::vector<int>& signs,
                             std::size_t node_budget) {
    Region rn = build_volume(center, N, d);
    std::set<Vertex> bdset = rn.boundary();
    std::vector<Vertex> bd(bdset.begin(), bdset.end());
    if (signs.size() != bd.size())
        throw UsageError("ground_state_expectation: wrong number of boundary signs");
    // Auxiliary fixed direction ẑ for the product density |f|² ∝ ∏(1 ± Ω·ẑ).
    VarId zv = reg.id(Vertex::base(UVert{1000000002, 0}));
    FixedCtx ctx;
    ctx.vecs[zv] = Vec3{Rat(0), Rat(0), Rat(1)};
    std::vector<DotPoly> fs = region_edge_factors(rn, nullptr, reg);
    for (std::size_t i = 0; i < bd.size(); ++i) {
        if (signs[i] != 1 && signs[i] != -1)
            throw UsageError("ground_state_expectation: signs must be ±1");
        fs.push_back(dp_add(dp_const(1), dp_scale(dp_dot(reg.id(bd[i]), zv), signs[i])));
    }
    std::vector<VarId> elim;
    for (const Vertex& v : rn.vertices) elim.push_back(reg.id(v));
    Rat den = dp_as_const(eliminate_factors(fs, elim, ctx, node_budget, false));
    fs.push_back(A);
    Rat num = dp_as_const(eliminate_factors(fs, elim, ctx, node_budget, false));
    if (den == 0) throw std::runtime_error("ground_state_expectation: zero norm");
    return num / den;
}

GapReport indistinguishability_gap(const DotPoly& A, DualSite center, int N, int K, int d,
                                   VarRegistry& reg, std::uint64_t seed, int nsamples,
                                   std::size_t node_budget) {
    if (!(1 <= K && K < N)) throw UsageError("indistinguishability_gap: need 1 <= K < N");
    Region rk = build_volume(center, K, d);
    check_support(A, rk, reg, "indistinguishability_gap");
    Region rn = build_volume(center, N, d);
    std::set<Vertex> bdN = rn.boundary();

    FixedCtx none;
    // Λ_K integration data: edges of ℬ_K and all Λ_K variables.
    std::vector<DotPoly> gk = region_edge_factors(rk, nullptr, reg);
    std::vector<VarId> vk;
    for (const Vertex& v : rk.vertices) vk.push_back(reg.id(v));

    auto integrate_K = [&](const DotPoly& X, const FixedCtx& c) {
        std::vector<DotPoly> fs = gk;
        fs.push_back(X);
        return dp_as_const(eliminate_factors(fs, vk, c, node_budget, false));
    };

    // Bulk side, computed once (symbolic in the ∂Λ_K variables).
    DotPoly phi_raw = phi_engine(center, N, K, d, reg, none, node_budget);
    Rat I = integrate_K(phi_raw, none);
    Rat omega = integrate_K(dp_mul(A, phi_raw), none) / I;

    long EK = (long)rk.edges.size();
    Rat mu1 = rat_pow(Rat(1, 2), EK) * integrate_K(dp_const(1), none);  // μ(1) = Z_K
    Rat supA = dp_sup_bound(A);

    GapReport rep;
    rep.N = N;
    rep.K = K;
    rep.d = d;
    rep.exact_dominates = true;
    std::uint64_t state = seed;
    for (int s = 0; s < nsamples; ++s) {
        FixedCtx ctx;
        // Redraw if adjacent boundary sites collide: an equal pair zeroes the
        // edge factor (1 − Ω·Ω) and with it Z̊_N(∂Ω).
        for (bool ok = false; !ok;) {
            ctx.vecs.clear();
            for (const Vertex& v : bdN) ctx.vecs[reg.id(v)] = random_unit_vector(state);
            ok = true;
            for (const Edge& e : rn.edges) {
                auto ia = ctx.vecs.find(reg.id(e.a)), ib = ctx.vecs.find(reg.id(e.b));
                if (ia != ctx.vecs.end() && ib != ctx.vecs.end() &&
                    dot(ia->second, ib->second) == 1)
                    ok = false;
            }
        }
        DotPoly ring_raw = phi_ring_engine(center, N, K, d, reg, ctx, node_budget);
        Rat Ir = integrate_K(ring_raw, ctx);
        Rat omega_ring = integrate_K(dp_mul(A, ring_raw), ctx) / Ir;
        Rat gap = abs(omega_ring - omega);
        // h = Φ̊/Z̊ − Φ/Z = 2^{|ℬ_K|}(Φ̊raw/I̊ − Φraw/I), so
        // ‖h‖_{L¹(μ)} ≤ μ(1)·sup|h| ≤ μ(1)·2^{|ℬ_K|}·Σ|coeff|(h_rel).
        DotPoly h_rel = dp_sub(dp_scale(ring_raw, Rat(1) / Ir), dp_scale(phi_raw, Rat(1) / I));
        Rat majorant = supA * mu1 * rat_pow(Rat(2), EK) * dp_sup_bound(h_rel);
        if (gap > majorant) rep.exact_dominates = false;
        rep.max_gap = std::max(rep.max_gap, rat_double(gap));
        rep.max_majorant = std::max(rep.max_majorant, rat_double(majorant));
        rep.samples.push_back(GapSample{gap, majorant});
    }
    return rep;
}

}  // namespace loopgas
