// Exact calculus of polynomials in dot products Ω_i·Ω_j of unit vectors on S².
//
// A DotPoly is a rational linear combination of monomials, each monomial a
// sorted multiset of variable pairs (i,j), i < j, meaning ∏ (Ω_i·Ω_j).
// Integration of one variable over the normalized sphere measure is exact:
//
//   ∫ dΩ (Ω·u₁)(Ω·u₂)...(Ω·u_{2m}) = (1/(2m+1)!!) Σ_matchings ∏ (u_a·u_b),
//
// and vanishes for odd degree. Variables may be bound to explicit rational
// unit vectors (FixedCtx); pairs of bound variables fold into the coefficient.
//
// `eliminate` computes ∫ dΩ^{elim} ∏_{(i,j)∈edges} (1 − Ω_i·Ω_j) · A by
// integrating one variable at a time in a greedy low-connectivity order,
// multiplying in each edge factor only when one of its endpoints is about to
// be integrated. On planar regions the intermediate polynomials stay small.
#pragma once

#include "loopgas/lattice.hpp"
#include "loopgas/rational.hpp"

#include <array>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace loopgas {

using VarId = int;
using VPair = std::pair<VarId, VarId>;  // canonical: first < second
using Mono = std::vector<VPair>;        // sorted, duplicates = powers
using DotPoly = std::map<Mono, Rat>;

// Reserved axis variables, permanently bound to the coordinate unit vectors.
// Canonicalization rewrites any pair of a free variable with a bound one as a
// sum over axes, so distinct bound vectors never multiply the monomial basis.
inline constexpr VarId kAxisX = -3, kAxisY = -2, kAxisZ = -1;

// Variables bound to explicit rational unit vectors.
struct FixedCtx {
    std::map<VarId, Vec3> vecs;
    bool is_fixed(VarId v) const { return v < 0 || vecs.count(v) != 0; }
    Vec3 vec(VarId v) const {
        if (v == kAxisX) return {1, 0, 0};
        if (v == kAxisY) return {0, 1, 0};
        if (v == kAxisZ) return {0, 0, 1};
        return vecs.at(v);
    }
};

DotPoly dp_const(const Rat& c);
DotPoly dp_dot(VarId i, VarId j);          // Ω_i·Ω_j (== 1 when i == j)
DotPoly dp_edge_factor(VarId i, VarId j);  // 1 − Ω_i·Ω_j

DotPoly dp_add(const DotPoly& a, const DotPoly& b);
DotPoly dp_sub(const DotPoly& a, const DotPoly& b);
DotPoly dp_mul(const DotPoly& a, const DotPoly& b);
DotPoly dp_scale(const DotPoly& a, const Rat& c);

// Folds fixed-fixed pairs into coefficients and drops zero terms.
DotPoly dp_canonicalize(const DotPoly& p, const FixedCtx& ctx);

// Exact integral over Ω_v (normalized sphere measure); v must not be fixed.
DotPoly integrate_out(const DotPoly& p, VarId v, const FixedCtx& ctx);

// ∫ dΩ^{elim} ∏ factors. Each factor is multiplied in lazily, just before the
// first of its free variables is integrated; variables not in `elim` (free or
// fixed) survive into the result. node_budget caps the total number of
// monomial operations (0 = default 10^8); ResourceLimitError on overflow.
// With greedy=true the order of `elim` is a hint only (fewest-distinct-partner
// variable next); with greedy=false variables are integrated exactly in the
// given sequence (callers can supply a sweep order with bounded frontier).
DotPoly eliminate_factors(const std::vector<DotPoly>& factors, std::vector<VarId> elim,
                          const FixedCtx& ctx, std::size_t node_budget = 0,
                          bool greedy = true);

// Convenience wrapper: ∫ dΩ^{elim} ∏_edges (1 − Ω_i·Ω_j) · A.
DotPoly eliminate(const std::vector<VPair>& edges, std::vector<VarId> elim,
                  const DotPoly& A, const FixedCtx& ctx, std::size_t node_budget = 0);

Rat dp_as_const(const DotPoly& p);  // throws UsageError if not constant

// Σ |coeff|: a sup-norm bound on |p| over the sphere (each |Ω_i·Ω_j| ≤ 1).
Rat dp_sup_bound(const DotPoly& p);

std::string dp_str(const DotPoly& p);

// ----------------------------------------------------------- numeric oracle

double dp_eval(const DotPoly& p, const std::map<VarId, std::array<double, 3>>& asg);

// Tensor Gauss–Legendre (cos θ) × uniform trapezoid (φ) quadrature over the
// listed variables; f receives a full assignment including `base`. Exact for
// the polynomial degrees appearing in the tests at moderate order.
double quad_integrate(
    const std::function<double(const std::map<VarId, std::array<double, 3>>&)>& f,
    const std::vector<VarId>& vars, int order,
    std::map<VarId, std::array<double, 3>> base = {});

}  // namespace loopgas
