// Ursell functions, truncated cluster (log) series, the hard-core/exp
// identity, and restricted cluster-sum bounds.
//
// A cluster is a finite sequence (φ₁,…,φ_m) of polymers, repetition allowed,
// whose connectivity graph G_φ (edges where φ_i and φ_j share a vertex) is
// connected. The Ursell function is
//
//   φ_c(φ₁) = 1,   φ_c(φ₁,…,φ_m) = (1/m!) Σ_{connected spanning G ⊆ G_φ} (−1)^{|E(G)|},
//
// and vanishes on disconnected sequences. The cluster series Σ φ_c·w^φ is the
// logarithm of the hard-core partition sum; it is evaluated here through the
// multiplicity representation (one term per multiplicity function X, weighted
// by m!/∏X!), with clusters enumerated as connected multisets.
#pragma once

#include "loopgas/polymer.hpp"
#include "loopgas/rational.hpp"

#include <functional>
#include <limits>
#include <set>

namespace loopgas {

using WeightFn = std::function<Rat(const Polymer&)>;

// Exact Ursell function of a polymer sequence (repetition allowed), by
// subset dynamic programming over the labeled connectivity graph.
// Throws ResourceLimitError for sequences longer than `cap`.
Rat ursell(const std::vector<Polymer>& seq, std::size_t cap = 10);

// Independent oracle: explicit enumeration of edge subsets of G_φ with a
// connectivity test. Exponential in |E(G_φ)|; intended for small sequences.
Rat ursell_bruteforce(const std::vector<Polymer>& seq);

// φ_c of the sequence holding mult[i] ≥ 0 copies of support polymer i, given
// the support adjacency matrix (adj[i][j] = the two polymers intersect;
// identical copies always intersect each other). Cost is polynomial in the
// multiplicities for a fixed support size.
Rat ursell_multiplicity(const std::vector<std::vector<char>>& adj,
                        const std::vector<int>& mult);

// Σ over hard-core (pairwise vertex-disjoint) subsets of the family of
// ∏ w(φ), including the empty collection (= 1). Scalar-weight companion of
// the DotPoly hard-core sum.
Rat hardcore_scalar_sum(const PolymerFamily& family, const WeightFn& w,
                        std::size_t node_budget = 100000000);

// Truncated cluster series Σ_{clusters, Σℓ ≤ max_total_length} φ_c(φ)·w^φ in
// the multiplicity representation, clusters enumerated as connected multisets.
Rat cluster_log_series(const PolymerFamily& family, const WeightFn& w,
                       int max_total_length, std::size_t node_budget = 100000000);

// |hard-core sum − exp(truncated cluster series)| in double precision.
double verify_exp_identity(const PolymerFamily& family, const WeightFn& w,
                           int cutoff, std::size_t node_budget = 100000000);

// ---------------------------------------------------------------- convergence

// μ = 2·9^{1/5}, the polymer-counting growth constant, and the geometric-series
// helper f(x) = (x+1−√(x²+1))/x.
double mu_constant();
double f_ratio(double x);
// r(ε) = μf(2eμ)e^{1−ε} / ((1−μf(2eμ)e^{1−ε})(1−f(2eμ)e^{−ε})).
double cluster_ratio_r(double epsilon);
// Cluster-convergence weight threshold: β must be ≥ 4/e + ln(μ/f(2eμ)) + ε.
double beta_threshold(double epsilon);
// Malyshev bound κ ≤ 4/e + ln μ on the Ursell growth constant.
double malyshev_kappa(double mu);

struct UeltschiReport {
    bool ok = false;       // sup_φ (1/ℓ(φ)) Σ_{σ∤φ} |w(σ)|e^{εℓ(σ)} < ε
    double sup_value = 0;  // the evaluated supremum
    double margin = 0;     // ε − sup_value
    double epsilon = 0;
};

// Counting-bound form: the intersecting-polymer count 3(ℓ(φ)+1)(k+1)2^{k−2}
// with weights (1/3)^{(d+1)k−1} gives sup ≤ (9/2)·(1/(1−x)² − 1), x = 2e^ε/3^{d+1}.
UeltschiReport ueltschi_criterion(int d, double epsilon);
// Enumeration form over a concrete finite family (always ≤ the bound form).
UeltschiReport ueltschi_criterion(const PolymerFamily& family, int d, double epsilon);

struct RestrictedBound {
    double truncated_sum = 0;  // Σ_{clusters touching ∂Λ_K, Σℓ ≤ cutoff} |φ_c·w^φ|
    double tail_bound = 0;     // certified geometric bound on the discarded mass
    double paper_bound = 0;    // |∂Λ_K|·r(ε)/(1−r(ε))
    double r = 0;              // r(ε)
    double beta = 0;           // d·ln3 − α
    int K = 0, d = 0, cutoff = 0, window_N = 0;
    std::size_t clusters = 0;  // number of enumerated multiplicity functions
};

// Truncated Σ_{φ ∈ Δ_K, Σℓ ≤ cutoff} |φ_c·w_α^φ| with w_α(φ) = e^{−(d ln3 − α)ℓ(φ)},
// over clusters of interior-family polymers whose union meets ∂Λ_K, against
// the closed-form bound |∂Λ_K|·r(ε)/(1−r(ε)). The window radius is chosen so
// that no admissible cluster can feel the outer boundary. Throws UsageError
// when β falls below the convergence threshold.
RestrictedBound restricted_cluster_bound(int K, int d, double alpha, double epsilon,
                                         int cutoff, std::size_t node_budget = 100000000);

// Enumerate every connected multiset of family members with total length
// ≤ cutoff (and, when touch ≠ nullptr, with at least one member through a
// touch vertex), invoking cb(support-indices, multiplicities).
void for_each_cluster(const PolymerFamily& family, int cutoff,
                      const std::set<UVert>* touch,
                      const std::function<void(const std::vector<int>&,
                                               const std::vector<int>&)>& cb,
                      std::size_t node_budget = 100000000);

}  // namespace loopgas
