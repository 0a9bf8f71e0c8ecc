#include "loopgas/polymer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace loopgas {

Polymer canonicalize(Polymer p) {
    if (p.kind == Polymer::Walk) {
        if (!(p.path.front() < p.path.back()))
            std::reverse(p.path.begin(), p.path.end());
        return p;
    }
    // Loop: rotate the least vertex to the front, then pick the direction with
    // the lexicographically smaller sequence.
    auto mn = std::min_element(p.path.begin(), p.path.end());
    std::rotate(p.path.begin(), mn, p.path.end());
    std::vector<UVert> rev = p.path;
    std::reverse(rev.begin() + 1, rev.end());
    if (rev < p.path) p.path = std::move(rev);
    return p;
}

bool polymer_valid(const Polymer& p) {
    std::set<UVert> seen(p.path.begin(), p.path.end());
    if (seen.size() != p.path.size()) return false;
    auto adjacent = [](UVert a, UVert b) {
        auto nb = uneighbors(a);
        return std::find(nb.begin(), nb.end(), b) != nb.end();
    };
    for (const UVert& v : p.path)
        if (!uvert_valid(v)) return false;
    for (std::size_t i = 0; i + 1 < p.path.size(); ++i)
        if (!adjacent(p.path[i], p.path[i + 1])) return false;
    if (p.kind == Polymer::Loop)
        return p.path.size() >= 6 && p.path.size() % 2 == 0 &&
               adjacent(p.path.back(), p.path.front());
    return p.path.size() >= 2;
}

std::vector<Edge> raw_edges(const Polymer& p, int d) {
    std::vector<Edge> out;
    std::size_t n = p.path.size();
    std::size_t steps = p.kind == Polymer::Loop ? n : n - 1;
    for (std::size_t i = 0; i < steps; ++i) {
        UEdge e(p.path[i], p.path[(i + 1) % n]);
        Vertex prev = Vertex::base(e.u);
        for (int q = 1; q <= d; ++q) {
            Vertex s = Vertex::decoration(e, q);
            out.push_back(Edge(prev, s));
            prev = s;
        }
        out.push_back(Edge(prev, Vertex::base(e.v)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Polymer undecorate(const std::vector<Edge>& edges, int d) {
    // Recover the set of traversed undecorated edges, then walk the degree
    // sequence. Each undecorated edge contributes d+1 raw edges.
    std::set<UEdge> ue;
    std::map<UEdge, int> chain_count;
    for (const Edge& e : edges) {
        UEdge u = e.a.is_base() && e.b.is_base() ? UEdge(e.a.u, e.b.u)
                  : e.a.is_base()                ? UEdge(e.b.u, e.b.w)
                                                 : UEdge(e.a.u, e.a.w);
        if (!e.a.is_base() && !e.b.is_base() && UEdge(e.a.u, e.a.w) != UEdge(e.b.u, e.b.w))
            throw UsageError("undecorate: edge joins two different chains");
        chain_count[u]++;
        ue.insert(u);
    }
    for (const auto& [u, c] : chain_count)
        if (c != d + 1) throw UsageError("undecorate: incomplete decoration chain");
    // Build degree map over base vertices.
    std::map<UVert, std::vector<UVert>> adj;
    for (const UEdge& e : ue) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<UVert> ends;
    for (const auto& [v, ns] : adj) {
        if (ns.size() == 1) ends.push_back(v);
        else if (ns.size() != 2) throw UsageError("undecorate: bad degree");
    }
    Polymer p;
    UVert start;
    if (ends.empty()) {
        p.kind = Polymer::Loop;
        start = adj.begin()->first;
    } else if (ends.size() == 2) {
        p.kind = Polymer::Walk;
        start = ends[0];
    } else {
        throw UsageError("undecorate: not a single path or cycle");
    }
    std::set<UVert> used{start};
    p.path.push_back(start);
    UVert cur = start;
    for (;;) {
        bool moved = false;
        for (UVert n : adj[cur])
            if (!used.count(n)) {
                used.insert(n);
                p.path.push_back(n);
                cur = n;
                moved = true;
                break;
            }
        if (!moved) break;
    }
    if (used.size() != adj.size()) throw UsageError("undecorate: disconnected edge set");
    p = canonicalize(p);
    if (!polymer_valid(p)) throw UsageError("undecorate: invalid polymer");
    return p;
}

// ----------------------------------------------------------------- enumeration

namespace {

struct EnumCtx {
    const Window& w;
    bool loops_avoid_vK;   // loops must be vertex-disjoint from Λ_K
    std::set<UVert> endpoint_set;  // allowed walk endpoints (empty: no walks)
    int max_length;
    std::size_t budget;
    std::size_t nodes = 0;
    std::set<Polymer> out;

    void charge() {
        if (++nodes > budget)
            throw ResourceLimitError("enumerate_family: node budget exceeded");
    }
    bool edge_ok(UVert a, UVert b) const {
        UEdge e(a, b);
        return w.bN.count(e) && !w.bK.count(e);
    }
};

void dfs_loops(EnumCtx& c, std::vector<UVert>& path, std::set<UVert>& used) {
    c.charge();
    UVert cur = path.back(), root = path.front();
    for (UVert n : uneighbors(cur)) {
        if (n == root && path.size() >= 6) {
            // close; dedup direction: require path[1] < path.back()
            if (path[1] < path.back()) {
                Polymer p;
                p.kind = Polymer::Loop;
                p.path = path;
                c.out.insert(canonicalize(std::move(p)));
            }
            continue;
        }
        if (!(root < n) || used.count(n)) continue;
        if (!c.w.vN.count(n) || (c.loops_avoid_vK && c.w.vK.count(n))) continue;
        if (!c.edge_ok(cur, n)) continue;
        if (c.max_length >= 0 && (int)path.size() >= c.max_length) continue;
        path.push_back(n);
        used.insert(n);
        dfs_loops(c, path, used);
        used.erase(n);
        path.pop_back();
    }
}

void dfs_walks(EnumCtx& c, std::vector<UVert>& path, std::set<UVert>& used) {
    c.charge();
    UVert cur = path.back(), start = path.front();
    if (path.size() >= 2 && c.endpoint_set.count(cur) && start < cur) {
        Polymer p;
        p.kind = Polymer::Walk;
        p.path = path;
        c.out.insert(canonicalize(std::move(p)));
    }
    if (c.max_length >= 0 && (int)path.size() - 1 >= c.max_length) return;
    for (UVert n : uneighbors(cur)) {
        if (used.count(n) || !c.w.vN.count(n) || !c.edge_ok(cur, n)) continue;
        path.push_back(n);
        used.insert(n);
        dfs_walks(c, path, used);
        used.erase(n);
        path.pop_back();
    }
}

}  // namespace

PolymerFamily enumerate_family(DualSite center, int N, int K, int d, Variant variant,
                               int max_length, std::size_t node_budget) {
    Window w = build_window(center, N, K);
    if (d < 0) throw UsageError("enumerate_family: d must be >= 0");
    EnumCtx c{w, /*loops_avoid_vK=*/K > 0, {}, max_length, node_budget};
    if (K > 0) c.endpoint_set = w.dK;
    if (variant == Variant::Interior)
        c.endpoint_set.insert(w.dN.begin(), w.dN.end());

    // Loops: rooted at their least vertex.
    for (const UVert& root : w.vN) {
        if (c.loops_avoid_vK && w.vK.count(root)) continue;
        std::vector<UVert> path{root};
        std::set<UVert> used{root};
        dfs_loops(c, path, used);
    }
    // Walks: started from each allowed endpoint.
    for (const UVert& s : c.endpoint_set) {
        std::vector<UVert> path{s};
        std::set<UVert> used{s};
        dfs_walks(c, path, used);
    }

    PolymerFamily f;
    f.N = N;
    f.K = K;
    f.d = d;
    f.variant = variant;
    f.center = center;
    f.members.assign(c.out.begin(), c.out.end());
    return f;
}

std::size_t count_through_vertex(UVert v, int k, const PolymerFamily& family) {
    std::size_t n = 0;
    for (const Polymer& p : family.members)
        if (p.length() == k &&
            std::find(p.path.begin(), p.path.end(), v) != p.path.end())
            ++n;
    return n;
}

bool connectivity(const Polymer& p, const Polymer& q) {
    std::set<UVert> s(p.path.begin(), p.path.end());
    for (const UVert& v : q.path)
        if (s.count(v)) return true;
    return false;
}

std::size_t count_intersecting(const Polymer& p, int k, const PolymerFamily& family) {
    std::size_t n = 0;
    for (const Polymer& q : family.members)
        if (q.length() == k && connectivity(p, q)) ++n;
    return n;
}

std::string family_to_jsonl(const PolymerFamily& family) {
    std::ostringstream os;
    for (const Polymer& p : family.members) {
        os << "{\"kind\":\"" << (p.kind == Polymer::Loop ? "loop" : "walk")
           << "\",\"edges\":[";
        auto es = raw_edges(p, family.d);
        for (std::size_t i = 0; i < es.size(); ++i)
            os << (i ? "," : "") << "[\"" << vertex_str(es[i].a) << "\",\""
               << vertex_str(es[i].b) << "\"]";
        os << "],\"len\":" << p.length() << "}\n";
    }
    return os.str();
}

}  // namespace loopgas
