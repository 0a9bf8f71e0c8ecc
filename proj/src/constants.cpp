#include "loopgas/constants.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loopgas {

namespace {

constexpr int kUlpMargin = 8;  // widening per transcendental evaluation

double step_dn(double x, int n = 1) {
    for (int i = 0; i < n; ++i) x = std::nextafter(x, -HUGE_VAL);
    return x;
}
double step_up(double x, int n = 1) {
    for (int i = 0; i < n; ++i) x = std::nextafter(x, HUGE_VAL);
    return x;
}

Interval widen(double lo, double hi) { return {step_dn(lo), step_up(hi)}; }

}  // namespace

Interval iv_add(Interval a, Interval b) { return widen(a.lo + b.lo, a.hi + b.hi); }
Interval iv_sub(Interval a, Interval b) { return widen(a.lo - b.hi, a.hi - b.lo); }

Interval iv_mul(Interval a, Interval b) {
    double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return widen(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

Interval iv_div(Interval a, Interval b) {
    if (b.lo <= 0 && b.hi >= 0) throw UsageError("iv_div: divisor interval contains 0");
    double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return widen(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

Interval iv_exp(Interval a) {
    return {step_dn(std::exp(a.lo), kUlpMargin), step_up(std::exp(a.hi), kUlpMargin)};
}

Interval iv_log(Interval a) {
    if (a.lo <= 0) throw UsageError("iv_log: interval not strictly positive");
    return {step_dn(std::log(a.lo), kUlpMargin), step_up(std::log(a.hi), kUlpMargin)};
}

Interval iv_sqrt(Interval a) {
    if (a.lo < 0) throw UsageError("iv_sqrt: negative interval");
    return {step_dn(std::sqrt(a.lo), kUlpMargin), step_up(std::sqrt(a.hi), kUlpMargin)};
}

Interval mu_interval() {
    // μ = 2·9^{1/5} = 2·exp(ln9 / 5)
    Interval ln9 = iv_log(Interval(9.0));
    return iv_mul(Interval(2.0), iv_exp(iv_div(ln9, Interval(5.0))));
}

Interval f_interval(Interval x) {
    // f(x) = (x + 1 − √(x²+1)) / x
    Interval s = iv_sqrt(iv_add(iv_mul(x, x), Interval(1.0)));
    return iv_div(iv_sub(iv_add(x, Interval(1.0)), s), x);
}

namespace {

Interval e_interval() { return iv_exp(Interval(1.0)); }

// ln(μ / f(2eμ)) as an interval.
Interval ln_mu_over_f() {
    Interval mu = mu_interval();
    Interval x = iv_mul(iv_mul(Interval(2.0), e_interval()), mu);
    return iv_log(iv_div(mu, f_interval(x)));
}

}  // namespace

Interval alpha_interval(int d) {
    if (d < 0) throw UsageError("alpha: d must be >= 0");
    Interval ln3 = iv_log(Interval(3.0));
    Interval four_over_e = iv_div(Interval(4.0), e_interval());
    Interval a = iv_sub(iv_mul(Interval((double)d), ln3), four_over_e);
    a = iv_sub(a, ln_mu_over_f());
    return iv_sub(a, Interval(0.03));
}

double alpha(int d) { return alpha_interval(d).mid(); }

bool indistinguishability_regime(int d) {
    Interval a = alpha_interval(d);
    if (a.certainly_positive()) return true;
    if (a.certainly_negative()) return false;
    throw UsageError("indistinguishability_regime: alpha interval straddles 0");
}

ClusterRatio cluster_ratio(double epsilon) {
    if (epsilon <= 0) throw UsageError("cluster_ratio: epsilon must be positive");
    double mu = mu_interval().mid();
    double f = f_interval(Interval(2 * std::exp(1.0) * mu)).mid();
    double g = mu * f * std::exp(1.0 - epsilon);
    double h = f * std::exp(-epsilon);
    if (g >= 1 || h >= 1)
        throw UsageError("cluster_ratio: epsilon too small, ratio diverges");
    ClusterRatio out;
    out.r = g / ((1 - g) * (1 - h));
    if (out.r >= 1) throw UsageError("cluster_ratio: r(epsilon) >= 1");
    out.r_over_1mr = out.r / (1 - out.r);
    return out;
}

double F_alpha(int n, int k, int d, bool two_alpha) {
    if (k < 1 || n <= k) throw UsageError("F_alpha: need 1 <= k < n");
    double a = alpha(d);
    double rate = (two_alpha ? 2.0 : 1.0) * a;
    return 102.0 * k * std::exp(-rate * (n - k));
}

double indistinguishability_bound(int n, int k, int d, bool two_alpha) {
    if (!indistinguishability_regime(d))
        throw UsageError("indistinguishability_bound: alpha(d) <= 0");
    double F = F_alpha(n, k, d, two_alpha);
    return 2 * F * std::exp(F);
}

double log_C_alpha(int d) {
    Interval a = alpha_interval(d);
    if (!a.certainly_positive()) throw UsageError("log_C_alpha: alpha(d) <= 0");
    return std::log(68.0) + 51.0 / (a.mid() * std::exp(1.0));
}

double log_G_alpha(int r, int d) { return log_C_alpha(d) - 2 * alpha(d) * r; }

bool ltqo_grid_check(int d, int kmax, int nmax) {
    double lCa = log_C_alpha(d), a = alpha(d);
    for (int k = 1; k <= kmax; ++k)
        for (int n = 2 * k; n <= nmax; ++n) {
            if (n <= k) continue;
            double F = F_alpha(n, k, d, true);
            double log_lhs = std::log(4 * F) + F;
            double log_rhs = std::log(6.0 * k) + lCa - 2 * a * (n - k);
            if (log_lhs > log_rhs) return false;
        }
    return true;
}

SeriesResult lr_series(double a_minus_ap, double theta, double p, double tol) {
    if (a_minus_ap <= 0) throw UsageError("lr_series: need a' < a");
    if (theta <= 0 || theta > 1) throw UsageError("lr_series: need 0 < theta <= 1");
    SeriesResult out;
    const long cap = 2000000;
    for (long n = 1; n <= cap; ++n) {
        out.value += std::pow((double)n, p + 4) * std::exp(-a_minus_ap * std::pow((double)n, theta));
        out.terms = (int)n;
        if (n < 16 || n % 64 != 0) continue;
        // Geometric tail: for m > n, m^θ ≥ m·n^{θ−1}, so terms are dominated
        // by m^{p+4}·q^m with q = e^{−(a−a′)n^{θ−1}}; the term ratio is at
        // most ((n+1)/n)^{p+4}·q.
        double q = std::exp(-a_minus_ap * std::pow((double)n, theta - 1.0));
        double ratio = std::pow((n + 1.0) / n, p + 4) * q;
        if (ratio >= 1) continue;
        double first = std::pow(n + 1.0, p + 4) * std::pow(q, (double)(n + 1));
        out.tail = first / (1 - ratio);
        if (out.tail < tol * out.value) return out;
    }
    throw ResourceLimitError("lr_series: tail did not certify within term cap");
}

SeriesResult lr_constant(int d, double a, double a_prime, double theta, double p) {
    if (!(0 < a_prime && a_prime < a)) throw UsageError("lr_constant: need 0 < a' < a");
    if (p < 0) throw UsageError("lr_constant: need p >= 0");
    SeriesResult s = lr_series(a - a_prime, theta, p);
    double scale = 81.0 * (3 * d + 2);
    s.value *= scale;
    s.tail *= scale;
    return s;
}

double entropy_bound(int N, int K, int d, bool two_alpha) {
    if (K < 1 || N <= K) throw UsageError("entropy_bound: need N > K >= 1");
    if (!indistinguishability_regime(d)) throw UsageError("entropy_bound: alpha(d) <= 0");
    return F_alpha(N, K, d, two_alpha);
}

double l1_from_divergence(double D) {
    if (D < 0) throw UsageError("l1_from_divergence: divergence must be >= 0");
    return D * std::exp(D);
}

std::pair<long, long> kappa_regularity(int d) { return {3L * (3 * d + 2), 2L}; }

namespace {

long volume_size(int n, int d) { return 3L * (3 * d + 2) * n * n - 3L * d * n; }

// Plaquettes whose decorated closure contains the vertex: all three for a
// base site, the two sharing the subdivided edge for a decoration site.
std::vector<DualSite> plaquettes_of_vertex(const Vertex& x) {
    if (x.is_base()) return plaquettes_of(x.u);
    std::vector<DualSite> pu = plaquettes_of(x.u), pw = plaquettes_of(x.w), out;
    for (const DualSite& s : pu)
        if (std::find(pw.begin(), pw.end(), s) != pw.end()) out.push_back(s);
    return out;
}

}  // namespace

FNormCheck f_norm_check(const Vertex& x, const Vertex& y, int d, double a,
                        double a_prime, double theta, double p, int nmax) {
    if (!(0 < a_prime && a_prime < a)) throw UsageError("f_norm_check: need 0 < a' < a");
    FNormCheck out;
    std::vector<DualSite> Ix = plaquettes_of_vertex(x), Iy = plaquettes_of_vertex(y);
    if (Ix.empty() || Iy.empty()) throw UsageError("f_norm_check: vertex off-lattice");

    // x ∈ Λ_n^{(d)}(z̃) iff D̃(x̃, z̃) ≤ n−1 for some x̃ ∈ I_x.
    auto dist_to = [](const std::vector<DualSite>& I, DualSite z) {
        int best = INT32_MAX;
        for (const DualSite& s : I) best = std::min(best, dual_distance(s, z));
        return best;
    };
    std::vector<DualSite> window = dual_ball(Ix[0], nmax + 1);
    std::vector<int> counts(nmax + 1, 0);  // counts[n] = #{z̃ : both within n−1}
    for (const DualSite& z : window) {
        int need = std::max(dist_to(Ix, z), dist_to(Iy, z)) + 1;
        if (need <= nmax) ++counts[need];
    }
    int cum = 0;
    for (int n = 1; n <= nmax; ++n) {
        cum += counts[n];
        out.lhs += cum * (double)volume_size(n, d) * std::exp(-a * std::pow((double)n, theta));
    }
    // Tail over n > nmax: #z̃ ≤ Σ_{x̃∈I_x}|b_{n−1}(x̃)| ≤ 3·3n² = 9n², volume
    // ≤ 3(3d+2)n²; terms ≤ 27(3d+2)·n⁴·e^{−a n^θ}, summed numerically with a
    // geometric closing bound (same linearization as lr_series).
    {
        double c = 27.0 * (3 * d + 2);
        long n = nmax;
        for (;;) {
            ++n;
            double term = c * std::pow((double)n, 4.0) * std::exp(-a * std::pow((double)n, theta));
            out.lhs_tail += term;
            double q = std::exp(-a * std::pow((double)n, theta - 1.0));
            double ratio = std::pow((n + 1.0) / n, 4.0) * q;
            if (ratio < 1) {
                double first = c * std::pow(n + 1.0, 4.0) * std::pow(q, (double)(n + 1));
                double close = first / (1 - ratio);
                if (close < 1e-12 * (out.lhs + out.lhs_tail) || close < 1e-300) {
                    out.lhs_tail += close;
                    break;
                }
            }
            if (n > nmax + 2000000)
                throw ResourceLimitError("f_norm_check: tail did not certify");
        }
    }

    Region patch = build_volume(Ix[0], nmax + 4, d);
    out.dist = region_distance(patch, x, y);
    if (out.dist < 0) throw UsageError("f_norm_check: pair not connected in patch");
    double s = out.dist / (4.0 * (d + 1)) + 0.25;
    SeriesResult C = lr_constant(d, a, a_prime, theta, p);
    out.rhs = C.value * std::exp(-a_prime * std::pow(s, theta)) / std::pow(s, p);
    out.ok = out.lhs + out.lhs_tail <= out.rhs;
    return out;
}

ConstantsReport constants_report(int d, double epsilon) {
    ConstantsReport rep;
    rep.d = d;
    rep.epsilon = epsilon;
    Interval mu = mu_interval();
    rep.mu = mu.mid();
    rep.f_2emu = f_interval(Interval(2 * std::exp(1.0) * rep.mu)).mid();
    rep.kappa_bound = 4 / std::exp(1.0) + std::log(rep.mu);
    rep.beta_threshold_eps = 4 / std::exp(1.0) + ln_mu_over_f().mid() + epsilon;
    ClusterRatio cr = cluster_ratio(epsilon);
    rep.r = cr.r;
    rep.r_over_1mr = cr.r_over_1mr;
    Interval a = alpha_interval(d);
    rep.alpha = a.mid();
    rep.alpha_lo = a.lo;
    rep.alpha_hi = a.hi;
    rep.regime = indistinguishability_regime(d);
    if (rep.regime) rep.log_C_alpha_value = log_C_alpha(d);
    rep.kappa_reg = kappa_regularity(d).first;
    return rep;
}

std::string report_to_json(const ConstantsReport& rep) {
    nlohmann::ordered_json j;
    j["d"] = rep.d;
    j["epsilon"] = rep.epsilon;
    j["mu"] = rep.mu;
    j["f_2emu"] = rep.f_2emu;
    j["kappa_bound"] = rep.kappa_bound;
    j["beta_threshold"] = rep.beta_threshold_eps;
    j["r"] = rep.r;
    j["r_over_1mr"] = rep.r_over_1mr;
    j["alpha"] = rep.alpha;
    j["alpha_interval"] = {rep.alpha_lo, rep.alpha_hi};
    j["indistinguishability_regime"] = rep.regime;
    if (rep.regime) j["log_C_alpha"] = rep.log_C_alpha_value;
    j["kappa_regularity"] = {rep.kappa_reg, rep.nu_reg};
    j["method"] = "float+interval";
    return j.dump(2);
}

}  // namespace loopgas
