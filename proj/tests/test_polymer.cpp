#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopgas/polymer.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace loopgas;

namespace {

// Independent loop census: every simple cycle of the undecorated volume is a
// connected element of the cycle space with all degrees 2; enumerate the
// cycle space (2^rank elements) and count.
std::size_t cycle_space_loop_count(int n, std::map<int, std::size_t>* by_len = nullptr) {
    Region r = build_volume({0, 0}, n, 0);
    std::vector<UEdge> edges;
    std::map<UVert, int> vid;
    std::vector<UVert> verts;
    for (const Vertex& v : r.vertices) {
        vid[v.u] = (int)verts.size();
        verts.push_back(v.u);
    }
    for (const Edge& e : r.edges) edges.emplace_back(e.a.u, e.b.u);
    // spanning tree -> fundamental cycles
    int V = (int)verts.size();
    std::vector<int> parent(V, -1), comp(V, -1);
    std::vector<std::vector<bool>> basis;  // edge indicator vectors
    std::vector<int> root(V);
    // union-find
    std::vector<int> uf(V);
    for (int i = 0; i < V; ++i) uf[i] = i;
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    std::vector<int> tree_edges, chords;
    for (int ei = 0; ei < (int)edges.size(); ++ei) {
        int a = find(vid[edges[ei].u]), b = find(vid[edges[ei].v]);
        if (a != b) {
            uf[a] = b;
            tree_edges.push_back(ei);
        } else {
            chords.push_back(ei);
        }
    }
    // adjacency over tree for path finding
    std::map<int, std::vector<std::pair<int, int>>> tadj;  // v -> (nbr, edge)
    for (int ei : tree_edges) {
        int a = vid[edges[ei].u], b = vid[edges[ei].v];
        tadj[a].push_back({b, ei});
        tadj[b].push_back({a, ei});
    }
    auto tree_path = [&](int s, int t) {
        std::map<int, std::pair<int, int>> prev;  // v -> (from, edge)
        std::vector<int> stack{s};
        prev[s] = {-1, -1};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == t) break;
            for (auto [w, ei] : tadj[v])
                if (!prev.count(w)) {
                    prev[w] = {v, ei};
                    stack.push_back(w);
                }
        }
        std::vector<int> path;
        for (int v = t; prev[v].first != -1; v = prev[v].first) path.push_back(prev[v].second);
        return path;
    };
    for (int ci : chords) {
        std::vector<bool> vec(edges.size(), false);
        vec[ci] = true;
        for (int ei : tree_path(vid[edges[ci].u], vid[edges[ci].v])) vec[ei] = true;
        basis.push_back(vec);
    }
    std::size_t count = 0;
    int rank = (int)basis.size();
    REQUIRE(rank <= 20);
    for (std::size_t mask = 1; mask < (1ull << rank); ++mask) {
        std::vector<bool> sel(edges.size(), false);
        for (int b = 0; b < rank; ++b)
            if (mask >> b & 1)
                for (std::size_t e = 0; e < edges.size(); ++e)
                    if (basis[b][e]) sel[e] = !sel[e];
        // degrees
        std::map<UVert, int> deg;
        std::size_t ecount = 0;
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (sel[e]) {
                ++ecount;
                deg[edges[e].u]++;
                deg[edges[e].v]++;
            }
        bool ok = true;
        for (auto& [v, dg] : deg)
            if (dg != 2) ok = false;
        if (!ok || ecount == 0) continue;
        // connectivity: walk from any selected edge
        std::set<UVert> seen;
        std::vector<UVert> stack{deg.begin()->first};
        seen.insert(deg.begin()->first);
        while (!stack.empty()) {
            UVert v = stack.back();
            stack.pop_back();
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (sel[e] && (edges[e].u == v || edges[e].v == v)) {
                    UVert w = edges[e].u == v ? edges[e].v : edges[e].u;
                    if (seen.insert(w).second) stack.push_back(w);
                }
        }
        if (seen.size() == deg.size()) {
            ++count;
            if (by_len) (*by_len)[(int)ecount]++;
        }
    }
    return count;
}

}  // namespace

TEST_CASE("canonicalize is invariant under rotation and reflection of loops") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 10);
    REQUIRE(!fam.members.empty());
    for (const Polymer& p : fam.members) {
        REQUIRE(p.kind == Polymer::Loop);
        Polymer q = p;
        std::rotate(q.path.begin(), q.path.begin() + q.path.size() / 2, q.path.end());
        CHECK(canonicalize(q) == p);
        std::reverse(q.path.begin(), q.path.end());
        CHECK(canonicalize(q) == p);
        CHECK(canonicalize(p) == p);  // idempotent
        CHECK(polymer_valid(p));
    }
}

TEST_CASE("loop census matches the independent cycle-space oracle") {
    std::map<int, std::size_t> oracle_by_len;
    std::size_t oracle = cycle_space_loop_count(2, &oracle_by_len);
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, -1);
    CHECK(fam.members.size() == oracle);
    std::map<int, std::size_t> by_len;
    for (const Polymer& p : fam.members) by_len[p.length()]++;
    CHECK(by_len == oracle_by_len);
    CHECK(fam.members.size() == 94);
}

TEST_CASE("families are sorted, unique, and respect the length cap") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 1, 0, Variant::Bulk, 8);
    CHECK(std::is_sorted(fam.members.begin(), fam.members.end()));
    CHECK(std::adjacent_find(fam.members.begin(), fam.members.end()) == fam.members.end());
    for (const Polymer& p : fam.members) CHECK(p.length() <= 8);
}

TEST_CASE("bulk walks end on the inner boundary and avoid inner edges") {
    Window w = build_window({0, 0}, 2, 1);
    PolymerFamily fam = enumerate_family({0, 0}, 2, 1, 0, Variant::Bulk, -1);
    bool some_walk = false;
    for (const Polymer& p : fam.members) {
        if (p.kind != Polymer::Walk) {
            for (const UVert& v : p.path) CHECK(w.vK.count(v) == 0);
            continue;
        }
        some_walk = true;
        CHECK(w.dK.count(p.path.front()) == 1);
        CHECK(w.dK.count(p.path.back()) == 1);
        for (std::size_t i = 0; i + 1 < p.path.size(); ++i)
            CHECK(w.bK.count(UEdge(p.path[i], p.path[i + 1])) == 0);
    }
    CHECK(some_walk);
}

TEST_CASE("interior walks may also end on the outer boundary") {
    Window w = build_window({0, 0}, 2, 1);
    PolymerFamily bulk = enumerate_family({0, 0}, 2, 1, 0, Variant::Bulk, -1);
    PolymerFamily inter = enumerate_family({0, 0}, 2, 1, 0, Variant::Interior, -1);
    CHECK(inter.members.size() > bulk.members.size());
    for (const Polymer& p : inter.members)
        if (p.kind == Polymer::Walk) {
            CHECK((w.dK.count(p.path.front()) == 1 || w.dN.count(p.path.front()) == 1));
            CHECK((w.dK.count(p.path.back()) == 1 || w.dN.count(p.path.back()) == 1));
        }
}

TEST_CASE("raw_edges / undecorate round-trip") {
    for (int d : {0, 1, 3}) {
        PolymerFamily fam = enumerate_family({0, 0}, 2, 1, d, Variant::Bulk, 10);
        for (const Polymer& p : fam.members) {
            std::vector<Edge> edges = raw_edges(p, d);
            CHECK((int)edges.size() == (d + 1) * p.length());
            CHECK(undecorate(edges, d) == p);
        }
    }
}

TEST_CASE("per-vertex loop counts respect the 3(k+1)2^{k-2} bound") {
    PolymerFamily fam = enumerate_family({0, 0}, 3, 0, 0, Variant::Bulk, 8);
    Region reg = build_volume({0, 0}, 3, 0);
    for (int k = 4; k <= 8; ++k) {
        double bound = 3.0 * (k + 1) * std::pow(2.0, k - 2);
        for (const Vertex& v : reg.vertices)
            CHECK((double)count_through_vertex(v.u, k, fam) <= bound);
    }
}

TEST_CASE("connectivity and count_intersecting are consistent") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 10);
    const Polymer& p = fam.members.front();
    for (int k = 6; k <= 10; ++k) {
        std::size_t direct = 0;
        for (const Polymer& q : fam.members)
            if (q.length() == k && connectivity(p, q)) ++direct;
        CHECK(count_intersecting(p, k, fam) == direct);
    }
    CHECK(connectivity(p, p));
}

TEST_CASE("jsonl serialization is stable and one line per polymer") {
    PolymerFamily fam = enumerate_family({0, 0}, 2, 0, 0, Variant::Bulk, 8);
    std::string a = family_to_jsonl(fam), b = family_to_jsonl(fam);
    CHECK(a == b);
    CHECK((std::size_t)std::count(a.begin(), a.end(), '\n') == fam.members.size());
}

TEST_CASE("invalid polymers are rejected") {
    Polymer p;
    p.kind = Polymer::Loop;
    p.path = {{2, 0}, {4, 0}};  // too short
    CHECK_FALSE(polymer_valid(p));
    Polymer w;
    w.kind = Polymer::Walk;
    w.path = {{2, 0}, {2, 0}};  // repeated vertex
    CHECK_FALSE(polymer_valid(w));
}
