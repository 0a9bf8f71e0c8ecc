// Closed-form evaluation of every explicit stability scalar: the decay rate
// α(d), the cluster ratio r(ε), the indistinguishability envelope F_α and the
// LTQO envelope G_α, the Lieb-Robinson summability constant C(d, a−a′, p), the
// relative-entropy chain, and the lattice-regularity pair.
//
// Threshold comparisons (the sign of α(d) in particular) are certified with
// outward-rounded interval arithmetic: α(5) ≈ 0.003 sits near zero, and a
// naively rounded double could flip the regime flag.
#pragma once

#include "loopgas/lattice.hpp"

#include <string>
#include <utility>

namespace loopgas {

// ------------------------------------------------------------------ intervals

// Closed interval [lo, hi] with outward rounding on every operation. Library
// transcendentals are assumed accurate to a few ulp; every elementary result
// is widened by a conservative ulp margin.
struct Interval {
    double lo = 0, hi = 0;
    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}
    Interval(double l, double h) : lo(l), hi(h) {}
    double mid() const { return (lo + hi) / 2; }
    double width() const { return hi - lo; }
    bool certainly_positive() const { return lo > 0; }
    bool certainly_negative() const { return hi < 0; }
};

Interval iv_add(Interval a, Interval b);
Interval iv_sub(Interval a, Interval b);
Interval iv_mul(Interval a, Interval b);
Interval iv_div(Interval a, Interval b);  // throws UsageError if b contains 0
Interval iv_exp(Interval a);
Interval iv_log(Interval a);  // throws UsageError if a.lo <= 0
Interval iv_sqrt(Interval a);

// ------------------------------------------------------------------- scalars

// μ = 2·9^{1/5} and f(x) = (x+1−√(x²+1))/x as intervals.
Interval mu_interval();
Interval f_interval(Interval x);

// α(d) = d·ln3 − 4/e − ln(μ/f(2eμ)) − 0.03, outward-rounded.
Interval alpha_interval(int d);
double alpha(int d);

// α(d) > 0, certified by interval sign; throws UsageError if the interval
// straddles zero (never happens for integer d).
bool indistinguishability_regime(int d);

struct ClusterRatio {
    double r = 0;
    double r_over_1mr = 0;
};
// r(ε) and r/(1−r); throws UsageError unless r(ε) < 1.
ClusterRatio cluster_ratio(double epsilon);

// F_α(n,k) = 102k·e^{−2α(n−k)} = 17·|∂Λ_k^{(d)}|·e^{−2α(n−k)}. With
// two_alpha = false the single-α exponent variant e^{−α(n−k)} is used; both
// are reported, neither is preferred.
double F_alpha(int n, int k, int d, bool two_alpha = true);
// 2·F_α·e^{F_α}; requires 1 ≤ k < n and α(d) > 0.
double indistinguishability_bound(int n, int k, int d, bool two_alpha = true);

// ln C_α with C_α = 68·e^{51/(αe)}. C_α itself overflows double for α near
// zero (ln C_α(5) ≈ 5.9·10³), so the envelope is handled in log space.
double log_C_alpha(int d);
// ln G_α(r) = ln C_α − 2αr.
double log_G_alpha(int r, int d);
// Checks 4·F_α(n,k)·e^{F_α(n,k)} ≤ |∂Λ_k|·G_α(n−k) on the grid
// 1 ≤ k ≤ kmax, 2k ≤ n ≤ nmax, compared in log space.
bool ltqo_grid_check(int d, int kmax, int nmax);

// --------------------------------------------------------------- series sums

struct SeriesResult {
    double value = 0;  // certified partial sum
    double tail = 0;   // analytic majorant of the discarded remainder
    int terms = 0;
};

// Σ_{n≥1} n^{p+4}·e^{−(a−a′)n^θ} to relative tolerance tol with a geometric
// tail majorant (uses n^θ ≥ n·M^{θ−1} for n ≥ M when θ < 1).
SeriesResult lr_series(double a_minus_ap, double theta, double p, double tol = 1e-12);
// C(d, a−a′, p) = 81(3d+2)·(the series); throws UsageError for a′ ≥ a.
SeriesResult lr_constant(int d, double a, double a_prime, double theta, double p);

// -------------------------------------------------------------- entropy chain

// 17·|∂Λ_K^{(d)}|·e^{−2α(N−K)} = 102K·e^{−2α(N−K)}; requires N > K ≥ 1, α(d) > 0.
double entropy_bound(int N, int K, int d, bool two_alpha = true);
// ∥f−g∥₁ ≤ D·e^D for an ∞-Rényi divergence value D ≥ 0.
double l1_from_divergence(double D);

// ---------------------------------------------------------- lattice regularity
// |Λ_n^{(d)}| ≤ κ·n^ν with (κ, ν) = (3(3d+2), 2).
std::pair<long, long> kappa_regularity(int d);

// ------------------------------------------------------ Lieb-Robinson audit

struct FNormCheck {
    double lhs = 0;       // exact truncated window sum
    double lhs_tail = 0;  // analytic majorant of the discarded n > nmax part
    double rhs = 0;       // C(d,a−a′,p)·∥Φ∥·decay(D_d(x,y))
    int dist = 0;         // D_d(x,y)
    bool ok = false;      // lhs + lhs_tail ≤ rhs
};

// Brute-force check of the summability inequality: for the pair (x, y) the
// window sum Σ_{z̃,n : x,y ∈ Λ_n^{(d)}(z̃)} |Λ_n^{(d)}(z̃)|·∥Φ∥e^{−a n^θ}
// (exact counts for n ≤ nmax, counting-bound tail beyond) against
// C(d,a−a′,p)·∥Φ∥·e^{−a′ s^θ}/s^p with s = D_d(x,y)/(4(d+1)) + 1/4.
FNormCheck f_norm_check(const Vertex& x, const Vertex& y, int d, double a,
                        double a_prime, double theta, double p, int nmax = 60);

// --------------------------------------------------------------------- report

struct ConstantsReport {
    int d = 0;
    double epsilon = 0;
    double mu = 0;
    double f_2emu = 0;
    double kappa_bound = 0;      // 4/e + ln μ
    double beta_threshold_eps = 0;
    double r = 0;
    double r_over_1mr = 0;
    double alpha = 0;
    double alpha_lo = 0, alpha_hi = 0;  // certified enclosure
    bool regime = false;         // α(d) > 0
    double log_C_alpha_value = 0;  // ln C_α, only when regime
    long kappa_reg = 0;
    long nu_reg = 2;
};
ConstantsReport constants_report(int d, double epsilon);
std::string report_to_json(const ConstantsReport& rep);

}  // namespace loopgas
