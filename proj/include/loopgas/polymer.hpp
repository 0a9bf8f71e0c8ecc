// Closed loops and self-avoiding walks on the (decorated) hexagonal lattice,
// the constrained families 𝒫_{N,K} / 𝒫̊_{N,K}, and exhaustive enumeration.
//
// Polymers are stored on the undecorated substrate (the natural enumeration
// domain; the decoration map ι_d is a length-preserving bijection) as a
// canonical vertex sequence. `raw_edges` produces the decorated edge list.
#pragma once

#include "loopgas/lattice.hpp"

#include <string>
#include <vector>

namespace loopgas {

struct Polymer {
    enum Kind { Loop, Walk };
    Kind kind = Walk;
    // Loop: ℓ vertices, closed implicitly (last connects to first).
    // Walk: ℓ+1 vertices, endpoints = front/back.
    std::vector<UVert> path;

    int length() const {
        return kind == Loop ? (int)path.size() : (int)path.size() - 1;
    }
    friend auto operator<=>(const Polymer&, const Polymer&) = default;
};

// Unique representative: loops rotated to start at their least vertex, with
// the lexicographically smaller of the two traversal directions; walks
// oriented so the first endpoint is the smaller.
Polymer canonicalize(Polymer p);

// Structural validation: self-avoiding, consecutive vertices adjacent, loops
// closed with even length >= 6, walks with length >= 1.
bool polymer_valid(const Polymer& p);

// ι_d⁻¹: the raw edge list of p on Γ^{(d)} ((d+1)·ℓ edges).
std::vector<Edge> raw_edges(const Polymer& p, int d);

// ι_d: rebuilds the undecorated polymer from a raw decorated edge list.
// Throws UsageError on malformed input (wrong degrees, broken chains).
Polymer undecorate(const std::vector<Edge>& edges, int d);

enum class Variant { Bulk, Interior };

struct PolymerFamily {
    int N = 0, K = 0, d = 0;
    Variant variant = Variant::Bulk;
    DualSite center;
    std::vector<Polymer> members;  // sorted canonical order
};

// Exhaustive enumeration of 𝒫_{N,K} (Bulk) or 𝒫̊_{N,K} (Interior) around
// `center`, restricted to ℓ ≤ max_length (max_length < 0: unbounded).
// Loops: contained in Λ_N, vertex-disjoint from Λ_K. Walks: edges in
// ℬ_N \ ℬ_K; endpoints in ∂Λ_K (Bulk) or ∂Λ_K ∪ ∂Λ_N (Interior). For K = 0
// the Bulk family has no walks and Interior walks end on ∂Λ_N.
PolymerFamily enumerate_family(DualSite center, int N, int K, int d, Variant variant,
                               int max_length = -1, std::size_t node_budget = 100000000);

// |{φ ∈ family : ℓ(φ) = k, φ passes through v}| for an undecorated site v.
std::size_t count_through_vertex(UVert v, int k, const PolymerFamily& family);

// True iff p ∪ q is connected (they share a vertex; for decorated polymers
// this can only happen at spin-3/2 sites, so the undecorated test is exact).
bool connectivity(const Polymer& p, const Polymer& q);

// n_k(p) = |{φ′ ∈ family : φ′ connected to p, ℓ(φ′) = k}|.
std::size_t count_intersecting(const Polymer& p, int k, const PolymerFamily& family);

// JSON-lines serialization: one polymer per line, canonical sorted order.
std::string family_to_jsonl(const PolymerFamily& family);

}  // namespace loopgas
