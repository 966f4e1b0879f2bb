#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cremona/basegeom.hpp"
#include "cremona/orbits.hpp"
#include "cremona/unipoly.hpp"

namespace cremona {

/// Everything the degree dynamics depends on: the map degree, the matched
/// pairs with their orbit lengths, and the multiplicity data restricted to
/// the paired points.
struct DynamicsData {
    int n = 0;
    int sigma1 = 0;
    std::vector<PairMatch> pairs;            // sorted by (m, alpha)
    std::vector<int> i_fwd;                  // i_{alpha_j}
    std::vector<int> i_inv;                  // i^(-1)_{beta_l}
    std::vector<std::vector<int>> i_cross;   // i_{alpha_j, beta_l}

    static DynamicsData from_analysis(const BiratMap& m, const BaseData& base,
                                      const Decomposition& dec)
    {
        DynamicsData d;
        d.n = m.degree();
        d.sigma1 = dec.sigma1;
        d.pairs = dec.pairs;
        for (const auto& pr : dec.pairs) {
            d.i_fwd.push_back(base.fwd[static_cast<size_t>(pr.alpha)].mult);
            d.i_inv.push_back(base.inv[static_cast<size_t>(pr.beta)].mult);
        }
        for (const auto& pj : dec.pairs) {
            std::vector<int> row;
            for (const auto& pl : dec.pairs)
                row.push_back(base.matrix[static_cast<size_t>(pj.alpha)]
                                         [static_cast<size_t>(pl.beta)]);
            d.i_cross.push_back(std::move(row));
        }
        return d;
    }

    /// The canonical quadratic data of the screening catalogue: n = 2,
    /// alpha_j = beta_j, all multiplicities 1, i_{ab} = 1 - delta_{ab}.
    static DynamicsData canonical_quadratic(const std::vector<int>& m_set)
    {
        DynamicsData d;
        d.n = 2;
        d.sigma1 = static_cast<int>(m_set.size());
        for (int j = 0; j < d.sigma1; ++j) {
            d.pairs.push_back({j, j, m_set[static_cast<size_t>(j)]});
            d.i_fwd.push_back(1);
            d.i_inv.push_back(1);
            std::vector<int> row(static_cast<size_t>(d.sigma1), 1);
            row[static_cast<size_t>(j)] = 0;
            d.i_cross.push_back(std::move(row));
        }
        return d;
    }

    int order() const
    {
        int m = sigma1 + 1;
        for (const auto& p : pairs)
            m += p.m;
        return m;
    }
};

/// The (sigma1+1) x (sigma1+1) matrix of the secular equation: top row
/// (lambda - n, i^(-1)_{beta_1}, ...), row j headed by -i_{alpha_j} with
/// lambda^{m_j+1} + i_{alpha_j beta_j} on the diagonal.
inline std::vector<std::vector<UniPoly>> build_lambda(const DynamicsData& d)
{
    size_t s = static_cast<size_t>(d.sigma1);
    std::vector<std::vector<UniPoly>> m(s + 1, std::vector<UniPoly>(s + 1));
    m[0][0] = UniPoly({-d.n, 1});
    for (size_t l = 0; l < s; ++l)
        m[0][l + 1] = UniPoly::constant(Int(d.i_inv[l]));
    for (size_t j = 0; j < s; ++j) {
        m[j + 1][0] = UniPoly::constant(Int(-d.i_fwd[j]));
        for (size_t l = 0; l < s; ++l) {
            UniPoly entry = UniPoly::constant(Int(d.i_cross[j][l]));
            if (l == j)
                entry = entry + UniPoly::monomial(Int(1), d.pairs[j].m + 1);
            m[j + 1][l + 1] = std::move(entry);
        }
    }
    return m;
}

/// Order reduction of the secular system when several pairs share one orbit
/// length and their coefficients aggregate consistently (the equal-m_i
/// remark): pairs are grouped by m, and the group sums close on themselves
/// exactly when i^(-1) is constant within each group and the column sums
/// of i_cross are constant across each group. Returns nullopt when the
/// compatibility conditions fail.
inline std::optional<std::vector<std::vector<UniPoly>>>
build_lambda_grouped(const DynamicsData& d)
{
    std::map<int, std::vector<size_t>> groups; // m -> member indices
    for (size_t j = 0; j < d.pairs.size(); ++j)
        groups[d.pairs[static_cast<size_t>(j)].m].push_back(j);
    size_t g = groups.size();
    std::vector<std::vector<size_t>> members;
    std::vector<int> gm;
    for (const auto& [mv, idx] : groups) {
        gm.push_back(mv);
        members.push_back(idx);
    }
    // weights w_h = common i^(-1) within each group
    std::vector<int> w(g);
    for (size_t h = 0; h < g; ++h) {
        w[h] = d.i_inv[members[h][0]];
        for (size_t l : members[h])
            if (d.i_inv[l] != w[h])
                return std::nullopt;
    }
    // c_{gh} = sum over j in group g of i_cross[j][l], constant over l in h
    std::vector<std::vector<int>> c(g, std::vector<int>(g, 0));
    for (size_t gg = 0; gg < g; ++gg)
        for (size_t h = 0; h < g; ++h) {
            long ref = -1;
            for (size_t l : members[h]) {
                long s = 0;
                for (size_t j : members[gg])
                    s += d.i_cross[j][l];
                if (ref < 0)
                    ref = s;
                else if (s != ref)
                    return std::nullopt;
            }
            c[gg][h] = static_cast<int>(ref);
        }
    std::vector<int> isum(g, 0);
    for (size_t gg = 0; gg < g; ++gg)
        for (size_t j : members[gg])
            isum[gg] += d.i_fwd[j];

    std::vector<std::vector<UniPoly>> m(g + 1, std::vector<UniPoly>(g + 1));
    m[0][0] = UniPoly({-d.n, 1});
    for (size_t h = 0; h < g; ++h)
        m[0][h + 1] = UniPoly::constant(Int(w[h]));
    for (size_t gg = 0; gg < g; ++gg) {
        m[gg + 1][0] = UniPoly::constant(Int(-isum[gg]));
        for (size_t h = 0; h < g; ++h) {
            UniPoly entry = UniPoly::constant(Int(c[gg][h]));
            if (h == gg)
                entry = entry + UniPoly::monomial(Int(1), gm[gg] + 1);
            m[gg + 1][h + 1] = std::move(entry);
        }
    }
    return m;
}

/// Integer linear recurrence d(k+m) + sum a_i d(k+i) = 0 together with its
/// monic characteristic polynomial.
struct Recurrence {
    UniPoly char_poly; // primitive integer; monic in the secular case
    int order = 0;

    bool monic() const { return char_poly.is_monic(); }

    /// a_0..a_{m-1} of the normal form (requires a monic polynomial).
    std::vector<Int> low_coefficients() const
    {
        if (!monic())
            throw Error(ErrorKind::Internal, "recurrence with non-monic characteristic");
        std::vector<Int> a;
        for (int i = 0; i < order; ++i)
            a.push_back(char_poly[i]);
        return a;
    }
};

/// Characteristic polynomial det(Lambda), monic of degree
/// sum(m_l) + sigma1 + 1.
inline Recurrence secular(const DynamicsData& d)
{
    Recurrence r;
    r.char_poly = unipoly_det(build_lambda(d));
    r.order = r.char_poly.degree();
    if (r.order != d.order())
        throw Error(ErrorKind::Internal, "secular degree disagrees with sum(m)+sigma1+1");
    if (!r.char_poly.is_monic())
        throw Error(ErrorKind::Internal, "secular polynomial is not monic");
    return r;
}

/// d- and gamma-tables of the forward recursion. gamma[j][k] is the
/// multiplicity gamma_{alpha_j}(k); entries for k <= 0 are zero.
struct ForwardTable {
    std::vector<Int> d;                 // d[k], k = 0..kmax
    std::vector<std::vector<Int>> gamma; // gamma[j][k]
};

/// Runs the degree difference equations forward:
///   d(k)      = n d(k-1) - sum_l i^(-1)_{beta_l} gamma_l(k - m_l - 1)
///   gamma_j(k)= i_j d(k-1) - sum_l i_cross[j][l] gamma_l(k - m_l - 1)
/// with d(0)=1, d(1)=n, gamma_j(1)=i_j, gamma_j(k<=0)=0.
inline ForwardTable forward_d(const DynamicsData& data, int kmax)
{
    ForwardTable t;
    size_t s = static_cast<size_t>(data.sigma1);
    t.d.assign(static_cast<size_t>(kmax) + 1, Int(0));
    t.gamma.assign(s, std::vector<Int>(static_cast<size_t>(kmax) + 1, Int(0)));
    t.d[0] = 1;
    if (kmax == 0)
        return t;
    t.d[1] = data.n;
    for (size_t j = 0; j < s; ++j)
        t.gamma[j][1] = data.i_fwd[j];
    auto gval = [&](size_t j, int k) -> Int {
        if (k <= 0)
            return Int(0);
        return t.gamma[j][static_cast<size_t>(k)];
    };
    for (int k = 2; k <= kmax; ++k) {
        Int dk = Int(data.n) * t.d[static_cast<size_t>(k - 1)];
        for (size_t l = 0; l < s; ++l)
            dk -= Int(data.i_inv[l]) * gval(l, k - data.pairs[l].m - 1);
        t.d[static_cast<size_t>(k)] = dk;
        for (size_t j = 0; j < s; ++j) {
            Int gj = Int(data.i_fwd[j]) * t.d[static_cast<size_t>(k - 1)];
            for (size_t l = 0; l < s; ++l)
                gj -= Int(data.i_cross[j][l]) * gval(l, k - data.pairs[l].m - 1);
            t.gamma[j][static_cast<size_t>(k)] = gj;
        }
    }
    return t;
}

/// Diagnostic table for unpaired F-points (gamma_alpha for alpha outside
/// the pairing, computed from the full characteristic matrix).
inline std::vector<std::vector<Int>> forward_gamma_diagnostics(const DynamicsData& data,
                                                               const BaseData& base,
                                                               const ForwardTable& t)
{
    size_t s = static_cast<size_t>(data.sigma1);
    size_t sigma = base.fwd.size();
    int kmax = static_cast<int>(t.d.size()) - 1;
    std::vector<std::vector<Int>> g(sigma,
                                    std::vector<Int>(static_cast<size_t>(kmax) + 1, Int(0)));
    auto gval = [&](size_t l, int k) -> Int {
        if (k <= 0)
            return Int(0);
        return t.gamma[l][static_cast<size_t>(k)];
    };
    for (size_t a = 0; a < sigma; ++a) {
        g[a][1] = base.fwd[a].mult;
        for (int k = 2; k <= kmax; ++k) {
            Int v = Int(base.fwd[a].mult) * t.d[static_cast<size_t>(k - 1)];
            for (size_t l = 0; l < s; ++l) {
                int beta = data.pairs[l].beta;
                v -= Int(base.matrix[a][static_cast<size_t>(beta)]) *
                     gval(l, k - data.pairs[l].m - 1);
            }
            g[a][static_cast<size_t>(k)] = v;
        }
    }
    return g;
}

/// True iff every window of the sequence satisfies the recurrence exactly;
/// on failure also reports the first bad index.
inline std::pair<bool, int> recurrence_check(const Recurrence& r, const std::vector<Int>& seq)
{
    if (static_cast<int>(seq.size()) < r.order + 1)
        throw Error(ErrorKind::InsufficientData, "sequence shorter than the recurrence order");
    for (int k = 0; k + r.order < static_cast<int>(seq.size()); ++k) {
        Int acc(0);
        for (int i = 0; i <= r.order; ++i)
            acc += r.char_poly[i] * seq[static_cast<size_t>(k + i)];
        if (acc != 0)
            return {false, k};
    }
    return {true, -1};
}

inline std::pair<bool, int> recurrence_check(const Recurrence& r, const std::vector<long>& seq)
{
    std::vector<Int> s;
    s.reserve(seq.size());
    for (long v : seq)
        s.emplace_back(v);
    return recurrence_check(r, s);
}

/// Shortest linear recurrence annihilating the whole sequence
/// (Berlekamp-Massey over Q, cleared to a primitive integer polynomial).
/// Throws InsufficientData unless the sequence pins the result down
/// (length >= 2*order + 2).
inline Recurrence minimal_recurrence(const std::vector<Int>& seq)
{
    size_t n = seq.size();
    if (n < 2)
        throw Error(ErrorKind::InsufficientData, "sequence too short");
    // connection polynomial C with C[0]=1: sum_i C[i] s[k-i] = 0
    std::vector<Rat> C{Rat(1)}, B{Rat(1)};
    int L = 0, x = 1;
    Rat b(1);
    for (size_t k = 0; k < n; ++k) {
        Rat delta(0);
        for (size_t i = 0; i <= static_cast<size_t>(L); ++i)
            delta += C[i] * Rat(seq[k - i]);
        if (sign(delta) == 0) {
            ++x;
        } else if (2 * L <= static_cast<int>(k)) {
            std::vector<Rat> T = C;
            Rat coef = delta / b;
            if (C.size() < B.size() + static_cast<size_t>(x))
                C.resize(B.size() + static_cast<size_t>(x), Rat(0));
            for (size_t i = 0; i < B.size(); ++i)
                C[i + static_cast<size_t>(x)] -= coef * B[i];
            L = static_cast<int>(k) + 1 - L;
            B = std::move(T);
            b = delta;
            x = 1;
        } else {
            Rat coef = delta / b;
            if (C.size() < B.size() + static_cast<size_t>(x))
                C.resize(B.size() + static_cast<size_t>(x), Rat(0));
            for (size_t i = 0; i < B.size(); ++i)
                C[i + static_cast<size_t>(x)] -= coef * B[i];
            ++x;
        }
    }
    if (static_cast<int>(n) < 2 * L + 2)
        throw Error(ErrorKind::InsufficientData,
                    "sequence of length " + std::to_string(n) +
                        " does not pin down an order-" + std::to_string(L) + " recurrence");
    // characteristic polynomial: lambda^L * C(1/lambda)
    Int den(1);
    for (int i = 0; i <= L; ++i)
        den = lcm(den, C[static_cast<size_t>(i)].get_den());
    std::vector<Int> cp(static_cast<size_t>(L) + 1, Int(0));
    for (int i = 0; i <= L; ++i) {
        const Rat& v = C[static_cast<size_t>(i)];
        cp[static_cast<size_t>(L - i)] = Int(v.get_num() * (den / v.get_den()));
    }
    Recurrence r;
    r.char_poly = UniPoly(std::move(cp)).primitive();
    r.order = L;
    auto chk = recurrence_check(r, seq);
    if (!chk.first)
        throw Error(ErrorKind::Internal, "minimal recurrence fails its own sequence");
    return r;
}

enum class GrowthClass { Bounded, Polynomial, Exponential };

/// Exact growth classification of a recurrence: after stripping lambda^a,
/// cyclotomic factors are divided out exhaustively (Kronecker: a monic
/// integer polynomial whose roots all lie on the unit circle is a product
/// of cyclotomics). A trivial residual means polynomially bounded growth of
/// degree (max unit-root multiplicity - 1); otherwise the dominant real
/// root of the residual is bracketed exactly.
struct GrowthReport {
    GrowthClass cls = GrowthClass::Bounded;
    int poly_degree = 0;             // for Bounded/Polynomial
    int delay = 0;                   // power of lambda stripped
    std::map<int, int> cyclotomic;   // N -> multiplicity of Phi_N
    UniPoly unit_factor;             // product of the cyclotomic part
    UniPoly residual;                // non-cyclotomic part (1 when none)
    Rat root_lo{0}, root_hi{0};      // bracket of the dominant root
    double entropy = 0.0;            // log of dominant root (0 when bounded)
};

inline GrowthReport classify_growth(const UniPoly& char_poly_in)
{
    if (char_poly_in.is_zero())
        throw Error(ErrorKind::Internal, "classifying the zero polynomial");
    GrowthReport rep;
    UniPoly p = char_poly_in.primitive();
    while (p.degree() > 0 && p[0] == 0) {
        std::vector<Int> c(p.coeffs().begin() + 1, p.coeffs().end());
        p = UniPoly(std::move(c));
        ++rep.delay;
    }
    rep.unit_factor = UniPoly::one();
    int bound = p.degree();
    for (int n : totient_inverse(bound)) {
        const UniPoly& phi = cyclotomic(n);
        if (phi.degree() > p.degree())
            continue;
        int mult = 0;
        while (true) {
            auto q = p.divide_exact(phi);
            if (!q)
                break;
            p = std::move(*q);
            ++mult;
        }
        if (mult > 0) {
            rep.cyclotomic[n] = mult;
            for (int i = 0; i < mult; ++i)
                rep.unit_factor = rep.unit_factor * phi;
        }
    }
    rep.residual = p;
    if (p.degree() <= 0) {
        int maxmult = 0;
        for (const auto& [n, m] : rep.cyclotomic) {
            (void)n;
            maxmult = std::max(maxmult, m);
        }
        rep.poly_degree = std::max(0, maxmult - 1);
        rep.cls = rep.poly_degree == 0 ? GrowthClass::Bounded : GrowthClass::Polynomial;
        return rep;
    }
    rep.cls = GrowthClass::Exponential;
    Rat width = make_rat(Int(1), Int("1000000000000"));
    auto bracket = largest_real_root(p, Rat(1), cauchy_bound(p), width);
    if (!bracket)
        throw Error(ErrorKind::Internal,
                    "non-cyclotomic residual without a real root above 1: " + p.to_string());
    rep.root_lo = bracket->first;
    rep.root_hi = bracket->second;
    Rat mid = (rep.root_lo + rep.root_hi) / 2;
    rep.entropy = std::log(mid.get_d());
    return rep;
}

inline GrowthReport classify_growth(const Recurrence& r) { return classify_growth(r.char_poly); }

/// Exact closed form d(k) = sum_i lambda_i^k (sum_j c_ij k^j) when every
/// root is rational (monic integer characteristic => integer roots). The
/// delay part lambda^a only shifts the window: the form is valid for
/// k >= delay. For irrational spectra the factorization and certified
/// dominant-root bracket are returned instead, with the fit left symbolic.
struct ClosedForm {
    bool exact = false;
    int delay = 0;
    std::vector<std::pair<Int, int>> roots;    // (root, multiplicity), exact case
    std::vector<std::vector<Rat>> coefficients; // c_ij aligned with roots
    GrowthReport growth;                        // always populated
    std::string description;

    /// Evaluates the exact form at k (valid for k >= delay).
    Rat eval(long k) const
    {
        if (!exact)
            throw Error(ErrorKind::Internal, "evaluating a non-exact closed form");
        Rat total(0);
        for (size_t i = 0; i < roots.size(); ++i) {
            Rat pw(1);
            for (long t = 0; t < k; ++t)
                pw *= Rat(roots[i].first);
            Rat polyval(0), kp(1);
            for (size_t j = 0; j < coefficients[i].size(); ++j) {
                polyval += coefficients[i][j] * kp;
                kp *= Rat(k);
            }
            total += pw * polyval;
        }
        return total;
    }
};

inline ClosedForm closed_form(const Recurrence& r, const std::vector<Int>& initials)
{
    if (static_cast<int>(initials.size()) < r.order)
        throw Error(ErrorKind::InsufficientData, "closed form needs order-many initial values");
    ClosedForm out;
    out.growth = classify_growth(r.char_poly);
    out.delay = out.growth.delay;

    // exact roots: the cyclotomic part contributes only +-1 as rationals
    std::vector<std::pair<Int, int>> roots;
    auto add_root = [&](Int v, int mult) {
        for (auto& [rv, rm] : roots)
            if (rv == v) {
                rm += mult;
                return;
            }
        roots.emplace_back(std::move(v), mult);
    };
    bool all_rational = true;
    for (const auto& [n, mult] : out.growth.cyclotomic) {
        if (n == 1)
            add_root(Int(1), mult);
        else if (n == 2)
            add_root(Int(-1), mult);
        else
            all_rational = false;
    }
    UniPoly res = out.growth.residual;
    if (res.degree() > 0) {
        auto rr = detail::rational_roots(res);
        for (const auto& [root, mult] : rr.roots) {
            if (!is_integer(root)) {
                all_rational = false;
                continue;
            }
            add_root(root.get_num(), mult);
        }
        if (rr.residual.degree() > 0)
            all_rational = false;
    }
    if (!all_rational) {
        out.exact = false;
        out.description = "irrational spectrum: delay " + std::to_string(out.delay) +
                          ", unit factor " + out.growth.unit_factor.to_string("L") +
                          ", residual " + out.growth.residual.to_string("L") +
                          "; coefficients defined by the order-many initial values";
        return out;
    }

    // solve sum_i sum_j c_ij k^j r_i^k = d(k) on k = delay..delay+M-1
    int M = 0;
    for (const auto& [rv, rm] : roots) {
        (void)rv;
        M += rm;
    }
    if (M + out.delay > static_cast<int>(initials.size()))
        throw Error(ErrorKind::InsufficientData, "not enough initial values past the delay");
    std::vector<std::vector<Rat>> A(static_cast<size_t>(M),
                                    std::vector<Rat>(static_cast<size_t>(M) + 1, Rat(0)));
    for (int row = 0; row < M; ++row) {
        long k = out.delay + row;
        int col = 0;
        for (const auto& [rv, rm] : roots) {
            Rat pw(1);
            for (long t = 0; t < k; ++t)
                pw *= Rat(rv);
            Rat kp(1);
            for (int j = 0; j < rm; ++j) {
                A[static_cast<size_t>(row)][static_cast<size_t>(col++)] = pw * kp;
                kp *= Rat(k);
            }
        }
        A[static_cast<size_t>(row)][static_cast<size_t>(M)] =
            Rat(initials[static_cast<size_t>(k)]);
    }
    // Gaussian elimination over Q
    for (int col = 0; col < M; ++col) {
        int piv = -1;
        for (int row = col; row < M; ++row)
            if (sign(A[static_cast<size_t>(row)][static_cast<size_t>(col)]) != 0) {
                piv = row;
                break;
            }
        if (piv < 0)
            throw Error(ErrorKind::SingularSystem, "closed-form system is singular");
        std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(piv)]);
        Rat d = A[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (int j = col; j <= M; ++j)
            A[static_cast<size_t>(col)][static_cast<size_t>(j)] /= d;
        for (int row = 0; row < M; ++row) {
            if (row == col)
                continue;
            Rat f = A[static_cast<size_t>(row)][static_cast<size_t>(col)];
            if (sign(f) == 0)
                continue;
            for (int j = col; j <= M; ++j)
                A[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
                    f * A[static_cast<size_t>(col)][static_cast<size_t>(j)];
        }
    }
    out.exact = true;
    out.roots = roots;
    int col = 0;
    for (const auto& [rv, rm] : roots) {
        (void)rv;
        std::vector<Rat> cs;
        for (int j = 0; j < rm; ++j)
            cs.push_back(A[static_cast<size_t>(col++)][static_cast<size_t>(M)]);
        out.coefficients.push_back(std::move(cs));
    }
    // verify on every provided value past the delay
    for (size_t k = static_cast<size_t>(out.delay); k < initials.size(); ++k)
        if (out.eval(static_cast<long>(k)) != Rat(initials[k]))
            throw Error(ErrorKind::Internal, "closed form fails to reproduce d(k)");
    std::string s;
    for (size_t i = 0; i < roots.size(); ++i) {
        std::string polypart;
        for (size_t j = 0; j < out.coefficients[i].size(); ++j) {
            if (sign(out.coefficients[i][j]) == 0)
                continue;
            if (!polypart.empty())
                polypart += " + ";
            polypart += rat_to_string(out.coefficients[i][j]);
            if (j >= 1)
                polypart += "*k" + (j > 1 ? "^" + std::to_string(j) : std::string());
        }
        if (polypart.empty())
            continue;
        if (!s.empty())
            s += " + ";
        s += "(" + polypart + ")";
        if (roots[i].first != 1)
            s += "*(" + roots[i].first.get_str() + ")^k";
    }
    out.description = s.empty() ? "0" : s + (out.delay ? "   (k >= " + std::to_string(out.delay) + ")" : "");
    return out;
}

/// One row of the screening catalogue.
struct Candidate {
    std::vector<int> m_set;
    UniPoly char_poly; // grouped (order-reduced) determinant when available
    bool grouped = false;
    GrowthReport growth;
};

/// Enumerates all non-decreasing m-sets up to m_max for the given data
/// shape and classifies det(Lambda) for each. With canonical quadratic
/// data the grouped determinant reproduces the catalogue of the n=2
/// integrable families.
inline std::vector<Candidate>
enumerate_candidates(int sigma1, int m_max,
                     const std::optional<DynamicsData>& custom_shape = std::nullopt)
{
    std::vector<Candidate> out;
    if (sigma1 == 0) {
        int n = custom_shape ? custom_shape->n : 2;
        Candidate c;
        c.char_poly = UniPoly({-n, 1});
        c.growth = classify_growth(c.char_poly);
        out.push_back(std::move(c));
        return out;
    }
    std::vector<int> m_set(static_cast<size_t>(sigma1), 0);
    while (true) {
        DynamicsData d;
        if (custom_shape) {
            d = *custom_shape;
            if (static_cast<int>(d.pairs.size()) != sigma1)
                throw Error(ErrorKind::Internal, "custom i-data sigma1 mismatch");
            for (size_t j = 0; j < d.pairs.size(); ++j)
                d.pairs[j].m = m_set[j];
        } else {
            d = DynamicsData::canonical_quadratic(m_set);
        }
        Candidate c;
        c.m_set = m_set;
        auto grouped = build_lambda_grouped(d);
        if (grouped) {
            c.char_poly = unipoly_det(*grouped);
            c.grouped = true;
        } else {
            c.char_poly = unipoly_det(build_lambda(d));
        }
        c.growth = classify_growth(c.char_poly);
        out.push_back(std::move(c));
        // next non-decreasing tuple
        int i = sigma1 - 1;
        while (i >= 0 && m_set[static_cast<size_t>(i)] == m_max)
            --i;
        if (i < 0)
            break;
        int v = m_set[static_cast<size_t>(i)] + 1;
        for (int j = i; j < sigma1; ++j)
            m_set[static_cast<size_t>(j)] = v;
    }
    return out;
}

} // namespace cremona
