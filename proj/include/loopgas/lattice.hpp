// Decorated hexagonal lattice Γ^{(d)}, its dual triangular lattice, finite
// volumes Λ_n^{(d)}, gap volumes Γ_n^{(d)}, and the separating partition.
//
// Coordinate scheme
// -----------------
// Dual sites x̃ = k·v₊ + l·v₋ with v± = (±√3/2, 1/2) are stored as integer
// pairs (k,l). The hexagon (plaquette) centered at dual site (k,l) sits at
// doubled integer coordinates (a,b) = (3(k−l), k+l), and its six corners are
// the offsets (2,0),(1,1),(−1,1),(−2,0),(−1,−1),(1,−1). Every undecorated
// vertex thus has a unique integer encoding (a,b) — no aliasing — and the
// three neighbors of a vertex are O(1) offsets determined by a mod 3.
// Decorated sites are encoded by the undecorated edge they subdivide plus a
// position 1..d counted from the lexicographically smaller endpoint.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopgas {

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PatchTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- dual lattice

struct DualSite {
    int k = 0, l = 0;
    friend auto operator<=>(const DualSite&, const DualSite&) = default;
};

// Graph distance on the triangular dual lattice (neighbor steps ±(1,0),
// ±(0,1), ±(1,1)); closed form validated by BFS in the tests.
int dual_distance(DualSite a, DualSite b);

std::array<DualSite, 6> dual_neighbors(DualSite s);

// b_n(c): all dual sites within distance n of c.
std::vector<DualSite> dual_ball(DualSite c, int n);

// ---------------------------------------------------------- undecorated layer

struct UVert {
    int a = 0, b = 0;
    friend auto operator<=>(const UVert&, const UVert&) = default;
};

bool uvert_valid(UVert v);                      // lies on the hexagonal lattice
std::array<UVert, 3> uneighbors(UVert v);       // the three lattice neighbors
UVert hex_corner(DualSite c, int j);            // corner j (0..5) of plaquette c
std::array<UVert, 6> hex_corners(DualSite c);
std::vector<DualSite> plaquettes_of(UVert v);   // the 3 plaquettes containing v

struct UEdge {
    UVert u, v;  // canonical: u < v
    UEdge() = default;
    UEdge(UVert x, UVert y) : u(x < y ? x : y), v(x < y ? y : x) {}
    friend auto operator<=>(const UEdge&, const UEdge&) = default;
};

// ------------------------------------------------------------ decorated layer

// pos == 0: base (spin-3/2) site at u; w is ignored (set equal to u).
// pos in [1,d]: decoration (spin-1) site #pos, counted from u, on edge (u,w)
// with u < w.
struct Vertex {
    UVert u, w;
    int pos = 0;
    Vertex() = default;
    static Vertex base(UVert v) { return Vertex{v, v, 0}; }
    static Vertex decoration(UEdge e, int p) { return Vertex{e.u, e.v, p}; }
    bool is_base() const { return pos == 0; }
    friend auto operator<=>(const Vertex&, const Vertex&) = default;

private:
    Vertex(UVert uu, UVert ww, int p) : u(uu), w(ww), pos(p) {}
};

std::string vertex_str(const Vertex& v);

struct Edge {
    Vertex a, b;  // canonical: a < b
    Edge() = default;
    Edge(Vertex x, Vertex y) : a(x < y ? x : y), b(x < y ? y : x) {}
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Full-lattice neighbors of a vertex in Γ^{(d)} (3 for base sites, 2 for
// decoration sites).
std::vector<Vertex> lattice_neighbors(const Vertex& v, int d);

// ---------------------------------------------------------------------- region

struct Region {
    int d = 0;
    std::set<Vertex> vertices;
    std::set<Edge> edges;

    // ∂Λ: vertices with an incident Γ^{(d)} edge outside the edge set.
    std::set<Vertex> boundary() const;
    // Λ̊: drops boundary vertices and all edges incident to them.
    Region interior() const;
    bool contains(const Region& sub) const;

    friend Region region_union(const Region& x, const Region& y);
};

// Λ_n^{(d)}(x̃) = union of decorated plaquettes over b_{n−1}(x̃).
Region build_volume(DualSite center, int n, int d);

// Γ_n^{(d)}(x̃) = ⋃_{v ∈ Λ_n^{(0)}} Y_v^{(d)} (as a graph union with Λ_n^{(d)};
// each Y_v has 3d+1 sites: v plus three spin-1 chains of length d).
Region build_gap_volume(DualSite center, int n, int d);

std::size_t boundary_size(const Region& r);

// Separating partition: index set I_n = {(k,l) : 0 ≤ k,l ≤ 2n−1} and parts
// T_n^m = {m + 2n(k,l)} restricted to the window b_window(0).
struct SeparatingPartition {
    int n = 0;
    std::vector<DualSite> index_set;                       // |I_n| = 4n²
    std::map<DualSite, std::vector<DualSite>> parts;       // keyed by index site
};
SeparatingPartition separating_partition(int n, int window_radius);

// --------------------------------------------------- distances & misc queries

// BFS graph distance inside a region (-1 if unreachable).
int region_distance(const Region& r, const Vertex& x, const Vertex& y);

// Checks D_d(x,y)/(2(d+1)) − 3/2 ≤ D̃(x̃,ỹ) ≤ D_d(x,y)/(2(d+1)) for every
// admissible plaquette pair; the patch must be provably large enough that its
// BFS distance is the true lattice distance, otherwise PatchTooSmallError.
bool distance_relation_check(const Region& patch, DualSite patch_center, int patch_n,
                             const Vertex& x, const Vertex& y, int d);

// Undecorated window geometry for Λ_N ⊇ Λ_K around a common center: the
// substrate for polymer enumeration and the expansion integrals.
struct Window {
    DualSite center;
    int N = 0, K = 0;
    std::set<UVert> vN, vK;   // vertex sets of Λ_N^{(0)}, Λ_K^{(0)} (K=0: empty)
    std::set<UEdge> bN, bK;   // edge sets
    std::set<UVert> dN, dK;   // boundary vertex sets ∂Λ_N^{(0)}, ∂Λ_K^{(0)}
};
Window build_window(DualSite center, int N, int K);

// JSON serialization with stable ordering (sorted vertices/edges).
std::string region_to_json(const Region& r, DualSite center, int n);

}  // namespace loopgas
