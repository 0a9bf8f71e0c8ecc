#include "loopgas/spherecalc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loopgas {

namespace {

constexpr std::size_t kDefaultBudget = 100000000;  // node budget

void add_term(DotPoly& p, Mono m, const Rat& c) {
    if (c == 0) return;
    std::sort(m.begin(), m.end());
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(std::move(m), c);
    } else {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

}  // namespace

DotPoly dp_const(const Rat& c) {
    DotPoly p;
    if (c != 0) p[Mono{}] = c;
    return p;
}

DotPoly dp_dot(VarId i, VarId j) {
    if (i == j) return dp_const(1);
    DotPoly p;
    p[Mono{{std::min(i, j), std::max(i, j)}}] = 1;
    return p;
}

DotPoly dp_edge_factor(VarId i, VarId j) { return dp_sub(dp_const(1), dp_dot(i, j)); }

DotPoly dp_add(const DotPoly& a, const DotPoly& b) {
    DotPoly p = a;
    for (const auto& [m, c] : b) add_term(p, m, c);
    return p;
}

DotPoly dp_sub(const DotPoly& a, const DotPoly& b) {
    DotPoly p = a;
    for (const auto& [m, c] : b) add_term(p, m, -c);
    return p;
}

DotPoly dp_mul(const DotPoly& a, const DotPoly& b) {
    DotPoly p;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Mono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            add_term(p, std::move(m), ca * cb);
        }
    return p;
}

DotPoly dp_scale(const DotPoly& a, const Rat& c) {
    DotPoly p;
    if (c == 0) return p;
    for (const auto& [m, k] : a) p[m] = k * c;
    return p;
}

DotPoly dp_canonicalize(const DotPoly& p, const FixedCtx& ctx) {
    constexpr VarId axes[3] = {kAxisX, kAxisY, kAxisZ};
    DotPoly out;
    for (const auto& [m, c] : p) {
        // Expand each pair of a free variable with a non-axis bound one over
        // the axes; a monomial therefore fans out into a small sum of terms.
        std::vector<std::pair<Mono, Rat>> terms{{Mono{}, c}};
        for (const VPair& pr : m) {
            if (pr.first == pr.second) continue;  // Ω·Ω = 1
            bool f1 = ctx.is_fixed(pr.first), f2 = ctx.is_fixed(pr.second);
            if (f1 && f2) {
                Rat d = dot(ctx.vec(pr.first), ctx.vec(pr.second));
                if (d == 0) { terms.clear(); break; }
                for (auto& t : terms) t.second *= d;
            } else if ((f1 && pr.first >= 0) || (f2 && pr.second >= 0)) {
                VarId free_v = f1 ? pr.second : pr.first;
                Vec3 u = ctx.vec(f1 ? pr.first : pr.second);
                const Rat comp[3] = {u.x, u.y, u.z};
                std::vector<std::pair<Mono, Rat>> next;
                for (int a = 0; a < 3; ++a) {
                    if (comp[a] == 0) continue;
                    for (auto t : terms) {
                        t.first.push_back({axes[a], free_v});
                        t.second *= comp[a];
                        next.push_back(std::move(t));
                    }
                }
                terms = std::move(next);
            } else {
                for (auto& t : terms) t.first.push_back(pr);
            }
        }
        for (auto& [km, kc] : terms) add_term(out, std::move(km), kc);
    }
    return out;
}

namespace {

// Σ over perfect matchings of `partners` of ∏ dot-pairs, each matching with
// weight `w`; results accumulated into `out` together with `rest`.
void matchings(std::vector<VarId>& partners, Mono& acc, const Mono& rest, const Rat& w,
               const FixedCtx& ctx, DotPoly& out, Rat coef) {
    if (partners.empty()) {
        Mono m = rest;
        m.insert(m.end(), acc.begin(), acc.end());
        add_term(out, std::move(m), w * coef);
        return;
    }
    VarId a = partners.back();
    partners.pop_back();
    for (std::size_t i = 0; i < partners.size(); ++i) {
        VarId b = partners[i];
        std::swap(partners[i], partners.back());
        partners.pop_back();
        if (a == b) {
            matchings(partners, acc, rest, w, ctx, out, coef);
        } else if (ctx.is_fixed(a) && ctx.is_fixed(b)) {
            Rat d = dot(ctx.vec(a), ctx.vec(b));
            if (d != 0) matchings(partners, acc, rest, w, ctx, out, coef * d);
        } else {
            acc.push_back({std::min(a, b), std::max(a, b)});
            matchings(partners, acc, rest, w, ctx, out, coef);
            acc.pop_back();
        }
        partners.push_back(b);
        std::swap(partners[i], partners.back());
    }
    partners.push_back(a);
}

}  // namespace

DotPoly integrate_out(const DotPoly& p, VarId v, const FixedCtx& ctx) {
    if (ctx.is_fixed(v)) throw UsageError("integrate_out: variable is fixed");
    DotPoly out;
    for (const auto& [m, c] : p) {
        std::vector<VarId> partners;
        Mono rest;
        for (const VPair& pr : m) {
            if (pr.first == v && pr.second == v) continue;  // (Ω·Ω) = 1
            if (pr.first == v)
                partners.push_back(pr.second);
            else if (pr.second == v)
                partners.push_back(pr.first);
            else
                rest.push_back(pr);
        }
        std::size_t n = partners.size();
        if (n % 2 == 1) continue;  // odd moments vanish
        if (n == 0) {
            add_term(out, Mono(rest), c);
            continue;
        }
        // per-matching weight 1/(2m+1)!!
        Rat w = 1;
        for (std::size_t t = 3; t <= n + 1; t += 2) w /= Rat((long)t);
        Mono acc;
        matchings(partners, acc, rest, w, ctx, out, c);
    }
    return out;
}

DotPoly eliminate_factors(const std::vector<DotPoly>& factors, std::vector<VarId> elim,
                          const FixedCtx& ctx, std::size_t node_budget, bool greedy) {
    if (node_budget == 0) node_budget = kDefaultBudget;
    std::size_t used = 0;
    auto charge = [&](std::size_t n) {
        used += n;
        if (used > node_budget) throw ResourceLimitError("eliminate: node budget exceeded");
    };

    struct Pending {
        DotPoly poly;
        std::set<VarId> vars;  // free variables of the factor
    };
    std::vector<Pending> pending;
    for (const DotPoly& f : factors) {
        Pending pd{dp_canonicalize(f, ctx), {}};
        for (const auto& [m, c] : pd.poly)
            for (const VPair& pr : m) {
                if (!ctx.is_fixed(pr.first)) pd.vars.insert(pr.first);
                if (!ctx.is_fixed(pr.second)) pd.vars.insert(pr.second);
            }
        pending.push_back(std::move(pd));
    }

    DotPoly P = dp_const(1);
    std::set<VarId> todo(elim.begin(), elim.end());
    std::size_t oi = 0;

    while (!todo.empty()) {
        // Greedy: integrate the variable with the fewest distinct partners.
        VarId best = *todo.begin();
        if (greedy) {
            std::size_t best_cost = SIZE_MAX;
            for (VarId v : todo) {
                std::set<VarId> part;
                for (const auto& [m, c] : P)
                    for (const VPair& pr : m) {
                        if (pr.first == v) part.insert(pr.second);
                        if (pr.second == v) part.insert(pr.first);
                    }
                for (const Pending& pd : pending)
                    if (pd.vars.count(v)) part.insert(pd.vars.begin(), pd.vars.end());
                part.erase(v);
                if (part.size() < best_cost) {
                    best_cost = part.size();
                    best = v;
                }
            }
        } else {
            while (!todo.count(elim[oi])) ++oi;
            best = elim[oi++];
        }
        // Multiply in every pending factor touching `best`.
        for (auto it = pending.begin(); it != pending.end();) {
            if (it->vars.count(best)) {
                charge(P.size() * it->poly.size());
                P = dp_canonicalize(dp_mul(P, it->poly), ctx);
                it = pending.erase(it);
            } else {
                ++it;
            }
        }
        charge(P.size());
        P = integrate_out(P, best, ctx);
        todo.erase(best);
    }
    for (const Pending& pd : pending) {
        charge(P.size() * pd.poly.size());
        P = dp_canonicalize(dp_mul(P, pd.poly), ctx);
    }
    return dp_canonicalize(P, ctx);
}

DotPoly eliminate(const std::vector<VPair>& edges, std::vector<VarId> elim, const DotPoly& A,
                  const FixedCtx& ctx, std::size_t node_budget) {
    std::vector<DotPoly> factors{A};
    for (const VPair& e : edges) factors.push_back(dp_edge_factor(e.first, e.second));
    return eliminate_factors(factors, std::move(elim), ctx, node_budget);
}

Rat dp_as_const(const DotPoly& p) {
    if (p.empty()) return 0;
    if (p.size() == 1 && p.begin()->first.empty()) return p.begin()->second;
    throw UsageError("dp_as_const: polynomial is not constant");
}

Rat dp_sup_bound(const DotPoly& p) {
    Rat s = 0;
    for (const auto& [m, c] : p) s += abs(c);
    return s;
}

std::string dp_str(const DotPoly& p) {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c);
        for (const VPair& pr : m) os << "*(O" << pr.first << ".O" << pr.second << ")";
    }
    return os.str();
}

// ------------------------------------------------------------ numeric oracle

double dp_eval(const DotPoly& p, const std::map<VarId, std::array<double, 3>>& asg) {
    double total = 0;
    for (const auto& [m, c] : p) {
        double t = rat_double(c);
        for (const VPair& pr : m) {
            if (pr.first == pr.second) continue;
            const auto& a = asg.at(pr.first);
            const auto& b = asg.at(pr.second);
            t *= a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        }
        total += t;
    }
    return total;
}

namespace {

// Gauss–Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0);
    w.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1);
        x[i] = t;
        w[i] = 2.0 / ((1 - t * t) * dp * dp);
    }
}

}  // namespace

double quad_integrate(
    const std::function<double(const std::map<VarId, std::array<double, 3>>&)>& f,
    const std::vector<VarId>& vars, int order, std::map<VarId, std::array<double, 3>> base) {
    std::vector<double> gx, gw;
    gauss_legendre(order, gx, gw);
    int nphi = 2 * order + 1;  // trapezoid rule is exact for trig degree < nphi

    std::function<double(std::size_t)> rec = [&](std::size_t idx) -> double {
        if (idx == vars.size()) return f(base);
        double acc = 0;
        for (int i = 0; i < order; ++i) {
            double ct = gx[i], st = std::sqrt(std::max(0.0, 1 - ct * ct));
            double inner = 0;
            for (int j = 0; j < nphi; ++j) {
                double phi = 2 * M_PI * j / nphi;
                base[vars[idx]] = {st * std::cos(phi), st * std::sin(phi), ct};
                inner += rec(idx + 1);
            }
            acc += gw[i] * inner / nphi;
        }
        return acc / 2;  // normalized measure
    };
    return rec(0);
}

}  // namespace loopgas
