// Operators on the single-site spaces ℋ^{(m)} of homogeneous polynomials in
// (u, v), their normal ordering, symbols A(Ω), and the operator-norm versus
// symbol-sup-norm comparison.
//
// ℋ^{(m)} carries the L²(dΩ) inner product under u = e^{iφ/2}cos(θ/2),
// v = e^{−iφ/2}sin(θ/2); the monomial basis u^k v^{m−k} is orthogonal with
// ‖u^k v^{m−k}‖² = k!(m−k)!/(m+1)!. An operator word in {u·, v·, ∂_u, ∂_v} is
// normal-ordered (derivatives to the left of multiplications) via [∂_x, x] = 1
// into terms a·∂_u^k ∂_v^l u^{k+j} v^{l−j}, from which the symbol
//   A(Ω) = Σ C_{k,l}·a·conj(u^k v^l)·u^{k+j} v^{l−j},  C_{k,l} = (m+l+k+1)!/(m+1)!
// reproduces every matrix entry: ⟨η, Aξ⟩ = ∫ dΩ conj(η) ξ A(Ω).
#pragma once

#include "loopgas/rational.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace loopgas {

// Normal-form term ∂_u^k ∂_v^l u^p v^q with rational coefficient.
using NormalForm = std::map<std::array<int, 4>, Rat>;  // key (k, l, p, q)

// Symbol as a real-rational combination of ū^a u^b v̄^c v^d.
using Symbol = std::map<std::array<int, 4>, Rat>;  // key (a, b, c, d)

struct PolyOperator {
    int m = 0;                             // acts on ℋ^{(m)}
    std::vector<std::vector<Rat>> matrix;  // A e_s = Σ_r matrix[r][s] e_r
    NormalForm normal_form;
};

// ‖u^k v^{m−k}‖² = k!(m−k)!/(m+1)!.
Rat basis_norm_sq(int m, int k);

// ∫ dΩ ū^a u^b v̄^c v^d: zero unless b−a = d−c; otherwise p!q!/(p+q+1)! with
// p = (a+b)/2, q = (c+d)/2. Throws UsageError on half-integer exponent sums.
Rat hermitian_integral(int a, int b, int c, int d);

// Build an operator on ℋ^{(m)} from a word of tokens in {"u","v","du","dv"}
// read in operator order (first token applied last). Throws UsageError if the
// word does not preserve the homogeneity degree m.
PolyOperator normal_order(const std::vector<std::string>& word, int m);

PolyOperator op_identity(int m);
PolyOperator op_add(const PolyOperator& a, const PolyOperator& b);
PolyOperator op_scale(const PolyOperator& a, const Rat& c);
PolyOperator op_mul(const PolyOperator& a, const PolyOperator& b);  // a ∘ b

// Symbol of the operator per the normal-ordered prescription; 1(Ω) = 1.
Symbol symbol(const PolyOperator& op);

// Pointwise product (symbols of operators on disjoint sites multiply).
Symbol symbol_mul(const Symbol& a, const Symbol& b);

// ⟨u^r v^{m−r}, A u^s v^{m−s}⟩ computed from the symbol by exact integration.
Rat symbol_matrix_entry(const Symbol& sym, int m, int r, int s);

// ⟨e_r, A e_s⟩ from the stored matrix (monomial basis with its exact norms).
Rat matrix_entry(const PolyOperator& op, int r, int s);

// Numeric symbol evaluation at angles (θ, φ).
double symbol_eval(const Symbol& sym, double theta, double phi);

// Σ|coeff|: an upper bound for sup_Ω |A(Ω)| (each |u|, |v| ≤ 1).
Rat symbol_sup_bound(const Symbol& sym);
// Grid-scan lower bound for sup_Ω |A(Ω)|.
double symbol_sup_scan(const Symbol& sym, int grid = 200);

struct NormResult {
    double value = 0;   // spectral norm ‖A‖ on ℋ^{(m)}
    double err = 0;     // bisection radius (0 when exact)
    bool is_exact = false;
    Rat exact;          // set when is_exact
};

// Spectral norm in the ℋ^{(m)} inner product: exact for diagonal matrices,
// otherwise the largest root of the characteristic polynomial of
// G^{−1} MᵀG M (G the diagonal Gram matrix) isolated by Sturm bisection.
NormResult operator_norm(const PolyOperator& op);

// dim ker H_N^{(d)} = 2^{|∂Λ_N^{(d)}|} = 2^{6N}.
Int ground_space_dimension(int N, int d);

}  // namespace loopgas
