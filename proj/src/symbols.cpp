#include "loopgas/symbols.hpp"

#include "loopgas/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace loopgas {

namespace {

Int factorial(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void nf_add(NormalForm& nf, const std::array<int, 4>& key, const Rat& c) {
    if (c == 0) return;
    auto it = nf.find(key);
    if (it == nf.end()) {
        nf.emplace(key, c);
    } else {
        it->second += c;
        if (it->second == 0) nf.erase(it);
    }
}

// Left-multiply the normal form by one generator.
NormalForm apply_generator(const std::string& g, const NormalForm& nf) {
    NormalForm out;
    for (const auto& [t, c] : nf) {
        auto [k, l, p, q] = t;
        if (g == "du") {
            nf_add(out, {k + 1, l, p, q}, c);
        } else if (g == "dv") {
            nf_add(out, {k, l + 1, p, q}, c);
        } else if (g == "u") {
            // u·∂_u^k = ∂_u^k·u − k·∂_u^{k−1}
            nf_add(out, {k, l, p + 1, q}, c);
            if (k > 0) nf_add(out, {k - 1, l, p, q}, -c * k);
        } else if (g == "v") {
            nf_add(out, {k, l, p, q + 1}, c);
            if (l > 0) nf_add(out, {k, l - 1, p, q}, -c * l);
        } else {
            throw UsageError("normal_order: unknown token '" + g + "'");
        }
    }
    return out;
}

std::vector<std::vector<Rat>> matrix_of(const NormalForm& nf, int m) {
    std::vector<std::vector<Rat>> M(m + 1, std::vector<Rat>(m + 1, 0));
    for (int s = 0; s <= m; ++s)
        for (const auto& [t, c] : nf) {
            auto [k, l, p, q] = t;
            int su = s + p, sv = m - s + q;  // after multiplications
            if (su < k || sv < l) continue;
            Rat coef = c;
            for (int i = 0; i < k; ++i) coef *= su - i;  // ∂_u^k
            for (int i = 0; i < l; ++i) coef *= sv - i;  // ∂_v^l
            int r = su - k;
            M[r][s] += coef;
        }
    return M;
}

}  // namespace

Rat basis_norm_sq(int m, int k) {
    if (k < 0 || k > m) throw UsageError("basis_norm_sq: index out of range");
    return Rat(factorial(k) * factorial(m - k), factorial(m + 1));
}

Rat hermitian_integral(int a, int b, int c, int d) {
    if (a < 0 || b < 0 || c < 0 || d < 0)
        throw UsageError("hermitian_integral: negative exponent");
    if (b - a != d - c) return 0;  // φ-average vanishes
    if ((a + b) % 2 || (c + d) % 2)
        throw UsageError("hermitian_integral: half-integer exponent sum");
    int p = (a + b) / 2, q = (c + d) / 2;
    return Rat(factorial(p) * factorial(q), factorial(p + q + 1));
}

PolyOperator normal_order(const std::vector<std::string>& word, int m) {
    int degree_shift = 0;
    for (const std::string& g : word) degree_shift += (g == "u" || g == "v") ? 1 : -1;
    if (degree_shift != 0)
        throw UsageError("normal_order: word does not preserve homogeneity degree");
    PolyOperator op;
    op.m = m;
    op.normal_form = NormalForm{{{0, 0, 0, 0}, Rat(1)}};
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        op.normal_form = apply_generator(*it, op.normal_form);
    op.matrix = matrix_of(op.normal_form, m);
    return op;
}

PolyOperator op_identity(int m) { return normal_order({}, m); }

PolyOperator op_add(const PolyOperator& a, const PolyOperator& b) {
    if (a.m != b.m) throw UsageError("op_add: mismatched degrees");
    PolyOperator out = a;
    for (const auto& [t, c] : b.normal_form) nf_add(out.normal_form, t, c);
    for (int r = 0; r <= a.m; ++r)
        for (int s = 0; s <= a.m; ++s) out.matrix[r][s] += b.matrix[r][s];
    return out;
}

PolyOperator op_scale(const PolyOperator& a, const Rat& c) {
    PolyOperator out = a;
    out.normal_form.clear();
    for (const auto& [t, k] : a.normal_form) nf_add(out.normal_form, t, k * c);
    for (auto& row : out.matrix)
        for (Rat& x : row) x *= c;
    return out;
}

PolyOperator op_mul(const PolyOperator& a, const PolyOperator& b) {
    if (a.m != b.m) throw UsageError("op_mul: mismatched degrees");
    PolyOperator out;
    out.m = a.m;
    // Normal form of the composition: expand each term of a into generator
    // tokens and left-multiply them onto b's normal form.
    for (const auto& [t, c] : a.normal_form) {
        auto [k, l, p, q] = t;
        NormalForm acc;
        for (const auto& [tb, cb] : b.normal_form) nf_add(acc, tb, cb * c);
        for (int i = 0; i < q; ++i) acc = apply_generator("v", acc);
        for (int i = 0; i < p; ++i) acc = apply_generator("u", acc);
        for (int i = 0; i < l; ++i) acc = apply_generator("dv", acc);
        for (int i = 0; i < k; ++i) acc = apply_generator("du", acc);
        for (const auto& [tt, cc] : acc) nf_add(out.normal_form, tt, cc);
    }
    out.matrix.assign(a.m + 1, std::vector<Rat>(a.m + 1, 0));
    for (int r = 0; r <= a.m; ++r)
        for (int s = 0; s <= a.m; ++s)
            for (int t2 = 0; t2 <= a.m; ++t2)
                out.matrix[r][s] += a.matrix[r][t2] * b.matrix[t2][s];
    return out;
}

Symbol symbol(const PolyOperator& op) {
    Symbol sym;
    for (const auto& [t, c] : op.normal_form) {
        auto [k, l, p, q] = t;
        if (p - k != l - q)
            throw UsageError("symbol: term does not preserve homogeneity");
        Rat C(factorial(op.m + l + k + 1), factorial(op.m + 1));
        std::array<int, 4> key{k, p, l, q};  // ū^k u^p v̄^l v^q
        auto it = sym.find(key);
        if (it == sym.end())
            sym.emplace(key, C * c);
        else {
            it->second += C * c;
            if (it->second == 0) sym.erase(it);
        }
    }
    return sym;
}

Symbol symbol_mul(const Symbol& a, const Symbol& b) {
    Symbol out;
    for (const auto& [ta, ca] : a)
        for (const auto& [tb, cb] : b) {
            std::array<int, 4> key{ta[0] + tb[0], ta[1] + tb[1], ta[2] + tb[2],
                                   ta[3] + tb[3]};
            out[key] += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

Rat symbol_matrix_entry(const Symbol& sym, int m, int r, int s) {
    Rat total = 0;
    for (const auto& [t, c] : sym)
        total += c * hermitian_integral(t[0] + r, t[1] + s, t[2] + m - r, t[3] + m - s);
    return total;
}

Rat matrix_entry(const PolyOperator& op, int r, int s) {
    return op.matrix[r][s] * basis_norm_sq(op.m, r);
}

double symbol_eval(const Symbol& sym, double theta, double phi) {
    std::complex<double> u = std::polar(std::cos(theta / 2), phi / 2);
    std::complex<double> v = std::polar(std::sin(theta / 2), -phi / 2);
    std::complex<double> total = 0;
    for (const auto& [t, c] : sym)
        total += rat_double(c) * std::pow(std::conj(u), t[0]) * std::pow(u, t[1]) *
                 std::pow(std::conj(v), t[2]) * std::pow(v, t[3]);
    return total.real();
}

Rat symbol_sup_bound(const Symbol& sym) {
    Rat s = 0;
    for (const auto& [t, c] : sym) s += abs(c);
    return s;
}

double symbol_sup_scan(const Symbol& sym, int grid) {
    double best = 0;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double th = M_PI * i / grid, ph = 2 * M_PI * j / grid;
            std::complex<double> u = std::polar(std::cos(th / 2), ph / 2);
            std::complex<double> v = std::polar(std::sin(th / 2), -ph / 2);
            std::complex<double> total = 0;
            for (const auto& [t, c] : sym)
                total += rat_double(c) * std::pow(std::conj(u), t[0]) * std::pow(u, t[1]) *
                         std::pow(std::conj(v), t[2]) * std::pow(v, t[3]);
            best = std::max(best, std::abs(total));
        }
    return best;
}

namespace {

// Characteristic polynomial det(λI − H) by Faddeev–LeVerrier; coeffs[i] is
// the coefficient of λ^i.
std::vector<Rat> char_poly(const std::vector<std::vector<Rat>>& H) {
    int n = (int)H.size();
    std::vector<std::vector<Rat>> Mk(n, std::vector<Rat>(n, 0));
    std::vector<Rat> c(n + 1, 0);
    c[n] = 1;
    for (int k = 1; k <= n; ++k) {
        // Mk = H·M_{k−1} + c_{n−k+1}·I
        std::vector<std::vector<Rat>> next(n, std::vector<Rat>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int t = 0; t < n; ++t) next[i][j] += H[i][t] * Mk[t][j];
        for (int i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        Mk = next;
        Rat tr = 0;
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < n; ++t) tr += H[i][t] * Mk[t][i];
        c[n - k] = -tr / k;
    }
    return c;
}

Rat poly_eval(const std::vector<Rat>& p, const Rat& x) {
    Rat v = 0;
    for (int i = (int)p.size() - 1; i >= 0; --i) v = v * x + p[i];
    return v;
}

// Number of real roots in (t, ∞) via Sturm's theorem.
int sturm_roots_above(const std::vector<std::vector<Rat>>& chain, const Rat& t) {
    auto signs_at = [&](bool at_inf) {
        std::vector<int> s;
        for (const auto& p : chain) {
            Rat v = at_inf ? p.back() : poly_eval(p, t);
            s.push_back(v > 0 ? 1 : v < 0 ? -1 : 0);
        }
        return s;
    };
    auto changes = [](const std::vector<int>& s) {
        int n = 0, prev = 0;
        for (int x : s) {
            if (x == 0) continue;
            if (prev != 0 && x != prev) ++n;
            prev = x;
        }
        return n;
    };
    return changes(signs_at(false)) - changes(signs_at(true));
}

std::vector<std::vector<Rat>> sturm_chain(std::vector<Rat> p) {
    std::vector<std::vector<Rat>> chain;
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    chain.push_back(p);
    if (p.size() > 1) {
        std::vector<Rat> dp(p.size() - 1);
        for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = p[i] * (int)i;
        chain.push_back(dp);
        while (chain.back().size() > 1) {
            // −remainder(chain[k−1], chain[k])
            std::vector<Rat> a = chain[chain.size() - 2], b = chain.back();
            while (a.size() >= b.size()) {
                Rat f = a.back() / b.back();
                std::size_t off = a.size() - b.size();
                for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
                while (a.size() > 1 && a.back() == 0) a.pop_back();
                if (a.size() == 1 && a[0] == 0) break;
            }
            for (Rat& x : a) x = -x;
            if (a.size() == 1 && a[0] == 0) break;
            chain.push_back(a);
        }
    }
    return chain;
}

}  // namespace

NormResult operator_norm(const PolyOperator& op) {
    int n = op.m + 1;
    NormResult res;
    bool diagonal = true;
    for (int r = 0; r < n && diagonal; ++r)
        for (int s = 0; s < n && diagonal; ++s)
            if (r != s && op.matrix[r][s] != 0) diagonal = false;
    if (diagonal) {
        Rat best = 0;
        for (int r = 0; r < n; ++r) best = std::max(best, Rat(abs(op.matrix[r][r])));
        res.is_exact = true;
        res.exact = best;
        res.value = rat_double(best);
        return res;
    }
    // H = G^{−1} Mᵀ G M has the eigenvalues of Ã*Ã for the orthonormalized
    // matrix Ã; ‖A‖ = √λ_max(H).
    std::vector<Rat> g(n);
    for (int k = 0; k < n; ++k) g[k] = basis_norm_sq(op.m, k);
    std::vector<std::vector<Rat>> H(n, std::vector<Rat>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat acc = 0;
            for (int t = 0; t < n; ++t) acc += op.matrix[t][i] * g[t] * op.matrix[t][j];
            H[i][j] = acc / g[i];
        }
    auto chain = sturm_chain(char_poly(H));
    Rat hi = 1;
    for (int i = 0; i < n; ++i) {
        Rat row = 0;
        for (int j = 0; j < n; ++j) row += abs(H[i][j]);
        hi = std::max(hi, Rat(row + 1));
    }
    Rat lo = 0;
    for (int it = 0; it < 80; ++it) {
        Rat mid = (lo + hi) / 2;
        if (sturm_roots_above(chain, mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    double lam = rat_double((lo + hi) / 2);
    res.value = std::sqrt(std::max(0.0, lam));
    res.err = std::sqrt(rat_double(hi)) - std::sqrt(rat_double(lo)) + 1e-15;
    return res;
}

Int ground_space_dimension(int N, int d) {
    if (N < 1) throw UsageError("ground_space_dimension: N must be >= 1");
    if (d < 0) throw UsageError("ground_space_dimension: d must be >= 0");
    Region vol = build_volume({0, 0}, N, d);
    std::size_t bd = boundary_size(vol);
    Int dim = 1;
    dim <<= (unsigned)bd;
    return dim;
}

}  // namespace loopgas
