#include "loopgas/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace loopgas {

namespace {

Int factorial(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int b = 1;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

std::vector<std::vector<char>> adjacency(const std::vector<Polymer>& seq) {
    std::size_t m = seq.size();
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            adj[i][j] = adj[j][i] = connectivity(seq[i], seq[j]);
    return adj;
}

}  // namespace

Rat ursell(const std::vector<Polymer>& seq, std::size_t cap) {
    std::size_t m = seq.size();
    if (m == 0) throw UsageError("ursell: empty sequence");
    if (m > cap) throw ResourceLimitError("ursell: sequence longer than cap");
    if (m == 1) return 1;
    auto adj = adjacency(seq);
    // C[S] = Σ over connected spanning subgraphs of G_φ[S] of (−1)^{|E|},
    // computed by peeling off the connected component of the least index:
    // C[S] = indep[S] − Σ_{B ⊊ S, v0 ∈ B} C[B]·indep[S∖B].
    std::size_t full = (std::size_t(1) << m) - 1;
    std::vector<char> indep(full + 1, 1);
    for (std::size_t S = 1; S <= full; ++S)
        for (std::size_t i = 0; i < m && indep[S]; ++i)
            if (S >> i & 1)
                for (std::size_t j = i + 1; j < m; ++j)
                    if ((S >> j & 1) && adj[i][j]) {
                        indep[S] = 0;
                        break;
                    }
    std::vector<Int> C(full + 1, 0);
    for (std::size_t S = 1; S <= full; ++S) {
        std::size_t v0 = S & (~S + 1);  // lowest bit
        Int c = indep[S] ? 1 : 0;
        // proper submasks containing v0
        for (std::size_t B = (S - 1) & S; B; B = (B - 1) & S) {
            if (!(B & v0)) continue;
            if (indep[S ^ B]) c -= C[B];
        }
        C[S] = c;
    }
    return Rat(C[full], factorial((int)m));
}

Rat ursell_bruteforce(const std::vector<Polymer>& seq) {
    std::size_t m = seq.size();
    if (m == 0) throw UsageError("ursell_bruteforce: empty sequence");
    if (m == 1) return 1;
    auto adj = adjacency(seq);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (adj[i][j]) edges.push_back({(int)i, (int)j});
    if (edges.size() > 24) throw ResourceLimitError("ursell_bruteforce: too many edges");
    Int total = 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << edges.size()); ++mask) {
        // union-find over the m vertices with the selected edges
        std::vector<int> parent(m);
        for (std::size_t i = 0; i < m; ++i) parent[i] = (int)i;
        std::function<int(int)> find = [&](int x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        int parity = 0;
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (mask >> e & 1) {
                parent[find(edges[e].first)] = find(edges[e].second);
                parity ^= 1;
            }
        bool connected = true;
        for (std::size_t i = 1; i < m && connected; ++i)
            connected = find((int)i) == find(0);
        if (connected) total += parity ? -1 : 1;
    }
    return Rat(total, factorial((int)m));
}

Rat ursell_multiplicity(const std::vector<std::vector<char>>& adj,
                        const std::vector<int>& mult) {
    std::size_t s = mult.size();
    int m = 0;
    for (int x : mult) {
        if (x < 0) throw UsageError("ursell_multiplicity: negative multiplicity");
        m += x;
    }
    if (m == 0) throw UsageError("ursell_multiplicity: empty cluster");
    // E(Y) = ∅ iff every multiplicity is ≤ 1 and no two present polymers are
    // adjacent (identical copies are always adjacent to each other).
    auto indep = [&](const std::vector<int>& Y) {
        for (std::size_t i = 0; i < s; ++i) {
            if (Y[i] > 1) return false;
            if (Y[i])
                for (std::size_t j = i + 1; j < s; ++j)
                    if (Y[j] && adj[i][j]) return false;
        }
        return true;
    };
    std::map<std::vector<int>, Int> memo;
    std::function<Int(const std::vector<int>&)> c = [&](const std::vector<int>& Y) -> Int {
        int tot = 0;
        for (int x : Y) tot += x;
        if (tot == 1) return 1;
        auto it = memo.find(Y);
        if (it != memo.end()) return it->second;
        std::size_t v0 = 0;
        while (Y[v0] == 0) ++v0;
        Int acc = indep(Y) ? 1 : 0;
        // Peel an independent remainder R = Y − Z (each R_i ∈ {0,1}) with the
        // labeled copy of v0 staying inside Z: counts as binomials in copies.
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < s; ++i)
            if (Y[i] > 0 && !(i == v0 && Y[i] == 1)) support.push_back(i);
        std::size_t lim = std::size_t(1) << support.size();
        for (std::size_t mask = 1; mask < lim; ++mask) {
            std::vector<int> Z = Y;
            Int coef = 1;
            bool ok = true;
            std::vector<std::size_t> picked;
            for (std::size_t b = 0; b < support.size(); ++b)
                if (mask >> b & 1) picked.push_back(support[b]);
            for (std::size_t a = 0; a < picked.size() && ok; ++a) {
                std::size_t i = picked[a];
                for (std::size_t bb = a + 1; bb < picked.size(); ++bb)
                    if (adj[i][picked[bb]]) ok = false;
                Z[i] -= 1;
                coef *= (i == v0) ? Int(Y[i] - 1) : Int(Y[i]);
            }
            if (!ok || coef == 0) continue;
            acc -= coef * c(Z);
        }
        memo[Y] = acc;
        return acc;
    };
    return Rat(c(mult), factorial(m));
}

Rat hardcore_scalar_sum(const PolymerFamily& family, const WeightFn& w,
                        std::size_t node_budget) {
    std::size_t n = family.members.size();
    std::vector<Rat> wt(n);
    std::vector<std::set<UVert>> verts(n);
    for (std::size_t i = 0; i < n; ++i) {
        wt[i] = w(family.members[i]);
        verts[i].insert(family.members[i].path.begin(), family.members[i].path.end());
    }
    std::size_t nodes = 0;
    Rat total = 0;
    std::set<UVert> used;
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t i, Rat acc) {
        if (++nodes > node_budget)
            throw ResourceLimitError("hardcore_scalar_sum: node budget exceeded");
        if (i == n) {
            total += acc;
            return;
        }
        rec(i + 1, acc);  // skip φ_i
        if (wt[i] == 0) return;
        for (const UVert& v : verts[i])
            if (used.count(v)) return;
        used.insert(verts[i].begin(), verts[i].end());
        rec(i + 1, acc * wt[i]);
        for (const UVert& v : verts[i]) used.erase(v);
    };
    rec(0, Rat(1));
    return total;
}

void for_each_cluster(const PolymerFamily& family, int cutoff,
                      const std::set<UVert>* touch,
                      const std::function<void(const std::vector<int>&,
                                               const std::vector<int>&)>& cb,
                      std::size_t node_budget) {
    std::size_t n = family.members.size(), nodes = 0;
    auto charge = [&] {
        if (++nodes > node_budget)
            throw ResourceLimitError("for_each_cluster: node budget exceeded");
    };
    std::vector<int> len(n);
    std::vector<char> touches(n, touch == nullptr);
    std::map<UVert, std::vector<int>> vert2poly;
    for (std::size_t i = 0; i < n; ++i) {
        const Polymer& p = family.members[i];
        len[i] = (int)p.length();
        for (const UVert& v : p.path) {
            vert2poly[v].push_back((int)i);
            if (touch && touch->count(v)) touches[i] = 1;
        }
    }
    std::vector<std::vector<int>> nbr(n);
    for (auto& [v, ids] : vert2poly)
        for (int a : ids)
            for (int b : ids)
                if (a != b) nbr[a].push_back(b);
    for (auto& v : nbr) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    // Multiplicities ≥ 1 on a connected support S, Σ X_i·ℓ_i ≤ cutoff.
    auto emit = [&](const std::vector<int>& S) {
        if (touch) {
            bool ok = false;
            for (int i : S) ok = ok || touches[i];
            if (!ok) return;
        }
        int base = 0;
        for (int i : S) base += len[i];
        std::vector<int> X(S.size(), 1);
        std::function<void(std::size_t, int)> mrec = [&](std::size_t k, int tot) {
            if (k == S.size()) {
                charge();
                cb(S, X);
                return;
            }
            for (X[k] = 1; tot + (X[k] - 1) * len[S[k]] <= cutoff; ++X[k])
                mrec(k + 1, tot + (X[k] - 1) * len[S[k]]);
            X[k] = 1;
        };
        mrec(0, base);
    };

    // Connected supports by breadth-first growth with deduplication.
    std::set<std::vector<int>> seen;
    std::deque<std::pair<std::vector<int>, int>> queue;  // (sorted support, Σℓ)
    for (std::size_t i = 0; i < n; ++i)
        if (len[i] <= cutoff) {
            std::vector<int> S{(int)i};
            seen.insert(S);
            queue.push_back({S, len[i]});
        }
    while (!queue.empty()) {
        auto [S, tot] = queue.front();
        queue.pop_front();
        emit(S);
        for (int i : S)
            for (int j : nbr[i]) {
                charge();
                if (tot + len[j] > cutoff) continue;
                if (std::binary_search(S.begin(), S.end(), j)) continue;
                std::vector<int> T = S;
                T.insert(std::upper_bound(T.begin(), T.end(), j), j);
                if (seen.insert(T).second) queue.push_back({T, tot + len[j]});
            }
    }
}

Rat cluster_log_series(const PolymerFamily& family, const WeightFn& w,
                       int max_total_length, std::size_t node_budget) {
    std::size_t n = family.members.size();
    std::vector<Rat> wt(n);
    for (std::size_t i = 0; i < n; ++i) wt[i] = w(family.members[i]);
    Rat total = 0;
    for_each_cluster(
        family, max_total_length, nullptr,
        [&](const std::vector<int>& S, const std::vector<int>& X) {
            std::vector<std::vector<char>> adj(S.size(), std::vector<char>(S.size(), 0));
            for (std::size_t a = 0; a < S.size(); ++a)
                for (std::size_t b = a + 1; b < S.size(); ++b)
                    adj[a][b] = adj[b][a] =
                        connectivity(family.members[S[a]], family.members[S[b]]);
            int m = 0;
            Rat wx = 1;
            Int perm = 1;
            for (std::size_t k = 0; k < S.size(); ++k) {
                m += X[k];
                wx *= rat_pow(wt[S[k]], X[k]);
                perm *= factorial(X[k]);
            }
            if (wx == 0) return;
            Rat phi_c = ursell_multiplicity(adj, X);
            if (phi_c == 0) return;
            total += Rat(factorial(m), perm) * phi_c * wx;
        },
        node_budget);
    return total;
}

double verify_exp_identity(const PolymerFamily& family, const WeightFn& w, int cutoff,
                           std::size_t node_budget) {
    Rat hc = hardcore_scalar_sum(family, w, node_budget);
    Rat ls = cluster_log_series(family, w, cutoff, node_budget);
    return std::abs(rat_double(hc) - std::exp(rat_double(ls)));
}

// ---------------------------------------------------------------- convergence

double mu_constant() { return 2.0 * std::pow(9.0, 0.2); }

double f_ratio(double x) { return (x + 1 - std::sqrt(x * x + 1)) / x; }

double cluster_ratio_r(double epsilon) {
    double mu = mu_constant();
    double fe = f_ratio(2 * std::exp(1.0) * mu);
    double a = mu * fe * std::exp(1 - epsilon);
    double b = fe * std::exp(-epsilon);
    return a / ((1 - a) * (1 - b));
}

double beta_threshold(double epsilon) {
    double mu = mu_constant();
    return 4 / std::exp(1.0) + std::log(mu / f_ratio(2 * std::exp(1.0) * mu)) + epsilon;
}

double malyshev_kappa(double mu) { return 4 / std::exp(1.0) + std::log(mu); }

UeltschiReport ueltschi_criterion(int d, double epsilon) {
    UeltschiReport rep;
    rep.epsilon = epsilon;
    // Σ_k 3(ℓ+1)(k+1)2^{k−2}·3^{1−(d+1)k}·e^{εk} / ℓ, maximized at ℓ = 1:
    // (9/2)·Σ_{k≥1}(k+1)x^k = (9/2)(1/(1−x)² − 1) with x = 2e^ε/3^{d+1}.
    double x = 2 * std::exp(epsilon) / std::pow(3.0, d + 1);
    if (x >= 1) {
        rep.sup_value = std::numeric_limits<double>::infinity();
    } else {
        rep.sup_value = 4.5 * (1 / ((1 - x) * (1 - x)) - 1);
    }
    rep.ok = rep.sup_value < epsilon;
    rep.margin = epsilon - rep.sup_value;
    return rep;
}

UeltschiReport ueltschi_criterion(const PolymerFamily& family, int d, double epsilon) {
    UeltschiReport rep;
    rep.epsilon = epsilon;
    std::size_t n = family.members.size();
    std::map<UVert, std::vector<int>> vert2poly;
    for (std::size_t i = 0; i < n; ++i)
        for (const UVert& v : family.members[i].path) vert2poly[v].push_back((int)i);
    std::vector<double> wexp(n);
    for (std::size_t i = 0; i < n; ++i) {
        int k = (int)family.members[i].length();
        wexp[i] = std::pow(3.0, 1 - (double)(d + 1) * k) * std::exp(epsilon * k);
    }
    std::vector<int> stamp(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = wexp[i];  // g(φ,φ) = −1: a polymer intersects itself
        for (const UVert& v : family.members[i].path)
            for (int j : vert2poly[v])
                if (j != (int)i && stamp[j] != (int)i) {
                    stamp[j] = (int)i;
                    sum += wexp[j];
                }
        rep.sup_value = std::max(rep.sup_value, sum / (double)family.members[i].length());
    }
    rep.ok = rep.sup_value < epsilon;
    rep.margin = epsilon - rep.sup_value;
    return rep;
}

RestrictedBound restricted_cluster_bound(int K, int d, double alpha, double epsilon,
                                         int cutoff, std::size_t node_budget) {
    RestrictedBound out;
    out.K = K;
    out.d = d;
    out.cutoff = cutoff;
    out.beta = d * std::log(3.0) - alpha;
    if (out.beta < beta_threshold(epsilon))
        throw UsageError("restricted_cluster_bound: threshold-violation, "
                         "beta below the convergence threshold");
    out.r = cluster_ratio_r(epsilon);
    // Window large enough that no cluster of total length ≤ cutoff touching
    // ∂Λ_K can reach ∂Λ_N (crossing a hexagon ring takes at least 2 steps).
    out.window_N = K + cutoff / 2 + 2;
    Window w = build_window({0, 0}, out.window_N, K);
    PolymerFamily fam = enumerate_family({0, 0}, out.window_N, K, d, Variant::Interior,
                                         cutoff, node_budget);
    // Keep only polymers within reach of a cluster through ∂Λ_K.
    std::map<UVert, int> dist;
    std::deque<UVert> bfs(w.dK.begin(), w.dK.end());
    for (const UVert& v : w.dK) dist[v] = 0;
    while (!bfs.empty()) {
        UVert v = bfs.front();
        bfs.pop_front();
        if (dist[v] >= cutoff) continue;
        for (const UVert& u : uneighbors(v))
            if (w.vN.count(u) && !dist.count(u)) {
                dist[u] = dist[v] + 1;
                bfs.push_back(u);
            }
    }
    PolymerFamily near = fam;
    near.members.clear();
    for (const Polymer& p : fam.members) {
        bool keep = false;
        for (const UVert& v : p.path) keep = keep || dist.count(v);
        if (keep) near.members.push_back(p);
    }

    double bd = (double)w.dK.size();
    out.paper_bound = bd * out.r / (1 - out.r);
    // Tail: split off e^{−(ε/2)Σℓ} ≤ e^{−(ε/2)(cutoff+1)} from every discarded
    // cluster; the rest still converges at ε/2.
    double r2 = cluster_ratio_r(epsilon / 2);
    out.tail_bound = std::exp(-(epsilon / 2) * (cutoff + 1)) * bd * r2 / (1 - r2);

    for_each_cluster(
        near, cutoff, &w.dK,
        [&](const std::vector<int>& S, const std::vector<int>& X) {
            std::vector<std::vector<char>> adj(S.size(), std::vector<char>(S.size(), 0));
            for (std::size_t a = 0; a < S.size(); ++a)
                for (std::size_t b = a + 1; b < S.size(); ++b)
                    adj[a][b] = adj[b][a] =
                        connectivity(near.members[S[a]], near.members[S[b]]);
            Rat phi_c = ursell_multiplicity(adj, X);
            if (phi_c == 0) return;
            int m = 0, totlen = 0;
            double perm = 1;
            for (std::size_t k = 0; k < S.size(); ++k) {
                m += X[k];
                totlen += X[k] * (int)near.members[S[k]].length();
                for (int t = 2; t <= X[k]; ++t) perm *= t;
            }
            double mfact = 1;
            for (int t = 2; t <= m; ++t) mfact *= t;
            out.truncated_sum += (mfact / perm) * std::abs(rat_double(phi_c)) *
                                 std::exp(-out.beta * totlen);
            ++out.clusters;
        },
        node_budget);
    return out;
}

}  // namespace loopgas
