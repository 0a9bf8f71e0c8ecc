#include "loopgas/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>

namespace loopgas {

// ---------------------------------------------------------------- dual lattice

int dual_distance(DualSite a, DualSite b) {
    int k = a.k - b.k, l = a.l - b.l;
    // Neighbor steps are ±(1,0), ±(0,1), ±(1,1): same-sign components can be
    // covered by diagonal steps, opposite signs cannot.
    if ((long long)k * l >= 0) return std::max(std::abs(k), std::abs(l));
    return std::abs(k) + std::abs(l);
}

std::array<DualSite, 6> dual_neighbors(DualSite s) {
    return {DualSite{s.k + 1, s.l},     DualSite{s.k - 1, s.l},
            DualSite{s.k, s.l + 1},     DualSite{s.k, s.l - 1},
            DualSite{s.k + 1, s.l + 1}, DualSite{s.k - 1, s.l - 1}};
}

std::vector<DualSite> dual_ball(DualSite c, int n) {
    std::vector<DualSite> out;
    for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l) {
            DualSite s{c.k + k, c.l + l};
            if (dual_distance(s, c) <= n) out.push_back(s);
        }
    return out;
}

// ---------------------------------------------------------- undecorated layer

namespace {
// Corner offsets of a hexagon center in doubled coordinates, j = 0..5.
constexpr int CA[6] = {2, 1, -1, -2, -1, 1};
constexpr int CB[6] = {0, 1, 1, 0, -1, -1};

int mod3(int a) {
    int m = a % 3;
    return m < 0 ? m + 3 : m;
}
}  // namespace

bool uvert_valid(UVert v) {
    return mod3(v.a) != 0 && ((v.a + v.b) & 1) == 0;
}

std::array<UVert, 3> uneighbors(UVert v) {
    if (mod3(v.a) == 2)  // sublattice A
        return {UVert{v.a + 2, v.b}, UVert{v.a - 1, v.b + 1}, UVert{v.a - 1, v.b - 1}};
    // sublattice B
    return {UVert{v.a - 2, v.b}, UVert{v.a + 1, v.b + 1}, UVert{v.a + 1, v.b - 1}};
}

UVert hex_corner(DualSite c, int j) {
    return UVert{3 * (c.k - c.l) + CA[j], (c.k + c.l) + CB[j]};
}

std::array<UVert, 6> hex_corners(DualSite c) {
    std::array<UVert, 6> out;
    for (int j = 0; j < 6; ++j) out[j] = hex_corner(c, j);
    return out;
}

std::vector<DualSite> plaquettes_of(UVert v) {
    std::vector<DualSite> out;
    for (int j = 0; j < 6; ++j) {
        int ca = v.a - CA[j], cb = v.b - CB[j];
        // center (k,l) satisfies a = 3(k−l), b = k+l
        if (mod3(ca) != 0) continue;
        int diff = ca / 3, sum = cb;
        if (((diff + sum) & 1) != 0) continue;
        DualSite c{(sum + diff) / 2, (sum - diff) / 2};
        if (hex_corner(c, j) == v && std::find(out.begin(), out.end(), c) == out.end())
            out.push_back(c);
    }
    return out;
}

// ------------------------------------------------------------ decorated layer

std::string vertex_str(const Vertex& v) {
    std::ostringstream os;
    if (v.is_base())
        os << "b:" << v.u.a << "," << v.u.b;
    else
        os << "s:" << v.u.a << "," << v.u.b << ":" << v.w.a << "," << v.w.b << ":" << v.pos;
    return os.str();
}

std::vector<Vertex> lattice_neighbors(const Vertex& v, int d) {
    std::vector<Vertex> out;
    if (v.is_base()) {
        for (UVert n : uneighbors(v.u)) {
            if (d == 0) {
                out.push_back(Vertex::base(n));
            } else {
                UEdge e(v.u, n);
                out.push_back(Vertex::decoration(e, v.u == e.u ? 1 : d));
            }
        }
    } else {
        UEdge e(v.u, v.w);
        out.push_back(v.pos == 1 ? Vertex::base(e.u) : Vertex::decoration(e, v.pos - 1));
        out.push_back(v.pos == d ? Vertex::base(e.v) : Vertex::decoration(e, v.pos + 1));
    }
    return out;
}

// ---------------------------------------------------------------------- region

std::set<Vertex> Region::boundary() const {
    std::set<Vertex> out;
    for (const Vertex& v : vertices)
        for (const Vertex& n : lattice_neighbors(v, d))
            if (!edges.count(Edge(v, n))) {
                out.insert(v);
                break;
            }
    return out;
}

Region Region::interior() const {
    std::set<Vertex> bd = boundary();
    Region r;
    r.d = d;
    for (const Vertex& v : vertices)
        if (!bd.count(v)) r.vertices.insert(v);
    for (const Edge& e : edges)
        if (!bd.count(e.a) && !bd.count(e.b)) r.edges.insert(e);
    return r;
}

bool Region::contains(const Region& sub) const {
    if (sub.d != d) return false;
    return std::includes(vertices.begin(), vertices.end(), sub.vertices.begin(),
                         sub.vertices.end()) &&
           std::includes(edges.begin(), edges.end(), sub.edges.begin(), sub.edges.end());
}

Region region_union(const Region& x, const Region& y) {
    if (x.d != y.d) throw UsageError("region_union: mismatched decoration");
    Region r = x;
    r.vertices.insert(y.vertices.begin(), y.vertices.end());
    r.edges.insert(y.edges.begin(), y.edges.end());
    return r;
}

namespace {
// Adds the decorated chain of undecorated edge e (both base endpoints, the d
// decoration sites, and the d+1 raw edges) to a region.
void add_decorated_edge(Region& r, UEdge e, int d) {
    r.vertices.insert(Vertex::base(e.u));
    r.vertices.insert(Vertex::base(e.v));
    Vertex prev = Vertex::base(e.u);
    for (int p = 1; p <= d; ++p) {
        Vertex s = Vertex::decoration(e, p);
        r.vertices.insert(s);
        r.edges.insert(Edge(prev, s));
        prev = s;
    }
    r.edges.insert(Edge(prev, Vertex::base(e.v)));
}
}  // namespace

Region build_volume(DualSite center, int n, int d) {
    if (n < 1 || d < 0) throw UsageError("build_volume: need n >= 1, d >= 0");
    Region r;
    r.d = d;
    for (DualSite s : dual_ball(center, n - 1)) {
        auto cs = hex_corners(s);
        for (int j = 0; j < 6; ++j) add_decorated_edge(r, UEdge(cs[j], cs[(j + 1) % 6]), d);
    }
    return r;
}

Region build_gap_volume(DualSite center, int n, int d) {
    Region r = build_volume(center, n, d);
    // Collect the undecorated skeleton.
    std::set<UVert> base;
    std::set<UEdge> uedges;
    for (const Vertex& v : r.vertices)
        if (v.is_base()) base.insert(v.u);
    for (DualSite s : dual_ball(center, n - 1)) {
        auto cs = hex_corners(s);
        for (int j = 0; j < 6; ++j) uedges.insert(UEdge(cs[j], cs[(j + 1) % 6]));
    }
    // Y_v^{(d)}: for each outgoing undecorated edge, add the spin-1 chain of
    // length d emanating from v (excluding the far base site and final raw edge).
    for (UVert v : base)
        for (UVert nb : uneighbors(v)) {
            UEdge e(v, nb);
            if (uedges.count(e)) continue;
            Vertex prev = Vertex::base(v);
            bool from_u = (v == e.u);
            for (int i = 1; i <= d; ++i) {
                Vertex s = Vertex::decoration(e, from_u ? i : d + 1 - i);
                r.vertices.insert(s);
                r.edges.insert(Edge(prev, s));
                prev = s;
            }
        }
    return r;
}

std::size_t boundary_size(const Region& r) { return r.boundary().size(); }

SeparatingPartition separating_partition(int n, int window_radius) {
    if (n < 1) throw UsageError("separating_partition: need n >= 1");
    SeparatingPartition p;
    p.n = n;
    for (int k = 0; k < 2 * n; ++k)
        for (int l = 0; l < 2 * n; ++l) p.index_set.push_back(DualSite{k, l});
    int m = 2 * n;
    auto wrap = [&](int x) { return ((x % m) + m) % m; };
    for (DualSite s : dual_ball(DualSite{0, 0}, window_radius))
        p.parts[DualSite{wrap(s.k), wrap(s.l)}].push_back(s);
    return p;
}

// --------------------------------------------------- distances & misc queries

int region_distance(const Region& r, const Vertex& x, const Vertex& y) {
    if (!r.vertices.count(x) || !r.vertices.count(y)) return -1;
    std::map<Vertex, int> dist;
    std::deque<Vertex> q;
    dist[x] = 0;
    q.push_back(x);
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        if (v == y) return dist[v];
        for (const Vertex& nb : lattice_neighbors(v, r.d)) {
            if (!r.edges.count(Edge(v, nb)) || dist.count(nb)) continue;
            dist[nb] = dist[v] + 1;
            q.push_back(nb);
        }
    }
    return -1;
}

namespace {
std::vector<DualSite> admissible_plaquettes(const Vertex& v) {
    if (v.is_base()) return plaquettes_of(v.u);
    // Decoration site: the plaquettes sharing the subdivided edge.
    std::vector<DualSite> out;
    for (DualSite s : plaquettes_of(v.u)) {
        auto cs = hex_corners(s);
        for (int j = 0; j < 6; ++j)
            if (UEdge(cs[j], cs[(j + 1) % 6]) == UEdge(v.u, v.w)) {
                out.push_back(s);
                break;
            }
    }
    return out;
}
}  // namespace

bool distance_relation_check(const Region& patch, DualSite patch_center, int patch_n,
                             const Vertex& x, const Vertex& y, int d) {
    int D = region_distance(patch, x, y);
    if (D < 0) throw PatchTooSmallError("distance_relation_check: vertex outside patch");
    auto px = admissible_plaquettes(x), py = admissible_plaquettes(y);
    int r = 0;
    for (DualSite s : px) r = std::max(r, dual_distance(s, patch_center));
    for (DualSite s : py) r = std::max(r, dual_distance(s, patch_center));
    // A shortcut through the complement would have to reach ∂Λ_patch and come
    // back: length ≥ 2·2(d+1)(patch_n−1−r) by the distance relation itself.
    if (D >= 4 * (d + 1) * (patch_n - 1 - r))
        throw PatchTooSmallError("distance_relation_check: BFS distance may be truncated");
    // D/(2(d+1)) − 3/2 ≤ D̃ ≤ D/(2(d+1)), cleared of denominators. The lower
    // bound over all plaquette assignments is equivalent to the bound at the
    // minimizing pair (larger D̃ only helps), and the upper bound can only be
    // meant there: distinct plaquettes of one vertex already have D̃ = 1 > 0.
    int dmin = INT32_MAX;
    for (DualSite sx : px)
        for (DualSite sy : py) dmin = std::min(dmin, dual_distance(sx, sy));
    return 2 * D - 6 * (d + 1) <= 4 * (d + 1) * dmin && 4 * (d + 1) * dmin <= 2 * D;
}

Window build_window(DualSite center, int N, int K) {
    if (K < 0 || N <= K) throw UsageError("build_window: need 0 <= K < N");
    Window w;
    w.center = center;
    w.N = N;
    w.K = K;
    auto fill = [&](int n, std::set<UVert>& vs, std::set<UEdge>& es, std::set<UVert>& bd) {
        if (n == 0) return;
        for (DualSite s : dual_ball(center, n - 1)) {
            auto cs = hex_corners(s);
            for (int j = 0; j < 6; ++j) {
                vs.insert(cs[j]);
                es.insert(UEdge(cs[j], cs[(j + 1) % 6]));
            }
        }
        for (UVert v : vs)
            for (UVert nb : uneighbors(v))
                if (!es.count(UEdge(v, nb))) {
                    bd.insert(v);
                    break;
                }
    };
    fill(N, w.vN, w.bN, w.dN);
    fill(K, w.vK, w.bK, w.dK);
    return w;
}

std::string region_to_json(const Region& r, DualSite center, int n) {
    std::ostringstream os;
    os << "{\"d\":" << r.d << ",\"n\":" << n << ",\"center\":[" << center.k << "," << center.l
       << "],\"vertices\":[";
    bool first = true;
    for (const Vertex& v : r.vertices) {
        os << (first ? "" : ",") << "\"" << vertex_str(v) << "\"";
        first = false;
    }
    os << "],\"edges\":[";
    first = true;
    for (const Edge& e : r.edges) {
        os << (first ? "" : ",") << "[\"" << vertex_str(e.a) << "\",\"" << vertex_str(e.b)
           << "\"]";
        first = false;
    }
    os << "],\"boundary\":[";
    first = true;
    for (const Vertex& v : r.boundary()) {
        os << (first ? "" : ",") << "\"" << vertex_str(v) << "\"";
        first = false;
    }
    os << "]}";
    return os.str();
}

}  // namespace loopgas
