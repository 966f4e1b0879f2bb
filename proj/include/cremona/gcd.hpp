#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cremona/hompoly.hpp"
#include "cremona/unipoly.hpp"

namespace cremona {
namespace detail {

/// Bivariate integer polynomial, dense in x with UniPoly-in-y coefficients.
using BivPoly = std::vector<UniPoly>;

inline void biv_trim(BivPoly& p)
{
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
}

inline bool biv_zero(const BivPoly& p) { return p.empty(); }
inline int biv_xdeg(const BivPoly& p) { return static_cast<int>(p.size()) - 1; }

inline UniPoly biv_content(const BivPoly& p)
{
    UniPoly g;
    for (const auto& c : p)
        g = UniPoly::gcd(g, c);
    return g;
}

inline BivPoly biv_divide_coeffs(const BivPoly& p, const UniPoly& d)
{
    BivPoly r;
    r.reserve(p.size());
    for (const auto& c : p) {
        auto q = c.divide_exact(d);
        if (!q)
            throw Error(ErrorKind::Internal, "bivariate content division not exact");
        r.push_back(std::move(*q));
    }
    biv_trim(r);
    return r;
}

inline BivPoly biv_mul_coeff(const BivPoly& p, const UniPoly& s)
{
    BivPoly r;
    r.reserve(p.size());
    for (const auto& c : p)
        r.push_back(c * s);
    biv_trim(r);
    return r;
}

/// Pseudo-remainder of a by b in the main variable x.
inline BivPoly biv_prem(BivPoly a, const BivPoly& b)
{
    if (biv_zero(b))
        throw Error(ErrorKind::Internal, "bivariate pseudo-division by zero");
    const UniPoly& blc = b.back();
    int e = biv_xdeg(a) - biv_xdeg(b) + 1;
    while (!biv_zero(a) && biv_xdeg(a) >= biv_xdeg(b)) {
        int k = biv_xdeg(a) - biv_xdeg(b);
        UniPoly alc = a.back();
        BivPoly next(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            next[i] = a[i] * blc;
        for (int j = 0; j <= biv_xdeg(b); ++j)
            next[static_cast<size_t>(j + k)] =
                next[static_cast<size_t>(j + k)] - alc * b[static_cast<size_t>(j)];
        biv_trim(next);
        if (biv_xdeg(next) >= biv_xdeg(a))
            throw Error(ErrorKind::Internal, "pseudo-division failed to reduce degree");
        a = std::move(next);
        --e;
    }
    // remaining power of the multiplier is irrelevant for gcd purposes, but
    // keep the classical normalization so callers can rely on it
    for (; e > 0; --e)
        a = biv_mul_coeff(a, blc);
    return a;
}

/// GCD of bivariate integer polynomials by content extraction plus a
/// primitive pseudo-remainder sequence in x.
inline BivPoly biv_gcd(BivPoly a, BivPoly b)
{
    biv_trim(a);
    biv_trim(b);
    if (biv_zero(a))
        return b;
    if (biv_zero(b))
        return a;
    UniPoly ca = biv_content(a), cb = biv_content(b);
    UniPoly cg = UniPoly::gcd(ca, cb);
    a = biv_divide_coeffs(a, ca);
    b = biv_divide_coeffs(b, cb);
    if (biv_xdeg(a) < biv_xdeg(b))
        std::swap(a, b);
    while (!biv_zero(b)) {
        BivPoly r = biv_prem(a, b);
        if (!biv_zero(r))
            r = biv_divide_coeffs(r, biv_content(r));
        a = std::move(b);
        b = std::move(r);
    }
    if (!biv_zero(a))
        a = biv_divide_coeffs(a, biv_content(a));
    return biv_mul_coeff(a, cg);
}

/// Dehomogenize a monomial-free homogeneous polynomial at z3 = 1 and clear
/// denominators: picks up an irrelevant rational scale.
inline BivPoly to_biv(const HomPoly& f)
{
    Int den(1);
    for (const auto& [e, c] : f.terms()) {
        (void)e;
        den = lcm(den, c.get_den());
    }
    BivPoly r;
    for (const auto& [e, c] : f.terms()) {
        int x = e[0], y = e[1];
        if (static_cast<int>(r.size()) <= x)
            r.resize(static_cast<size_t>(x) + 1);
        std::vector<Int> co(r[static_cast<size_t>(x)].coeffs());
        if (static_cast<int>(co.size()) <= y)
            co.resize(static_cast<size_t>(y) + 1, Int(0));
        co[static_cast<size_t>(y)] = Int(c.get_num() * (den / c.get_den()));
        r[static_cast<size_t>(x)] = UniPoly(std::move(co));
    }
    biv_trim(r);
    return r;
}

/// Rehomogenize with z3 to the smallest possible degree (the bivariate
/// total degree), i.e. the result is not divisible by z3.
inline HomPoly from_biv(const BivPoly& p)
{
    int total = -1;
    for (int x = 0; x <= biv_xdeg(p); ++x)
        for (int y = 0; y <= p[static_cast<size_t>(x)].degree(); ++y)
            if (p[static_cast<size_t>(x)][y] != 0)
                total = std::max(total, x + y);
    if (total < 0)
        return HomPoly();
    HomPoly::TermMap terms;
    for (int x = 0; x <= biv_xdeg(p); ++x)
        for (int y = 0; y <= p[static_cast<size_t>(x)].degree(); ++y) {
            const Int& c = p[static_cast<size_t>(x)][y];
            if (c != 0)
                terms.emplace(Exp3{x, y, total - x - y}, Rat(c));
        }
    return HomPoly::from_terms(terms);
}

} // namespace detail

/// Primitive GCD of homogeneous polynomials, canonically normalized.
/// Strategy: split off the common monomial factor, dehomogenize the
/// monomial-free parts (no variable divides them, so any chart is faithful),
/// and run the bivariate primitive-PRS gcd over the integers.
inline HomPoly gcd(const HomPoly& a, const HomPoly& b)
{
    if (a.is_zero() && b.is_zero())
        throw Error(ErrorKind::Internal, "gcd(0, 0)");
    if (a.is_zero())
        return b.canonicalized();
    if (b.is_zero())
        return a.canonicalized();
    Exp3 ma = a.min_exponents();
    Exp3 mb = b.min_exponents();
    Exp3 common{std::min(ma[0], mb[0]), std::min(ma[1], mb[1]), std::min(ma[2], mb[2])};
    HomPoly pa = a.shifted_down(ma);
    HomPoly pb = b.shifted_down(mb);
    HomPoly mono = HomPoly::term(Rat(1), common);
    if (pa.is_constant() || pb.is_constant())
        return mono;
    HomPoly g = detail::from_biv(detail::biv_gcd(detail::to_biv(pa), detail::to_biv(pb)));
    return g.shifted_up(common).canonicalized();
}

inline HomPoly gcd(const std::vector<HomPoly>& polys)
{
    HomPoly g;
    for (const auto& p : polys) {
        if (p.is_zero())
            continue;
        g = g.is_zero() ? p.canonicalized() : gcd(g, p);
        if (g.is_constant())
            return g;
    }
    if (g.is_zero())
        throw Error(ErrorKind::Internal, "gcd of all-zero family");
    return g;
}

inline HomPoly gcd(const std::array<HomPoly, 3>& t)
{
    return gcd(std::vector<HomPoly>{t[0], t[1], t[2]});
}

/// Squarefree decomposition: pairwise-coprime squarefree parts with their
/// multiplicities, product matching the input up to a rational constant.
/// Monomial variables come out as their own parts. Uses the gcd of the input
/// with its three partials (exact in characteristic zero by Euler's
/// relation).
inline std::vector<std::pair<HomPoly, int>> squarefree_decomposition(const HomPoly& f)
{
    if (f.is_zero())
        throw Error(ErrorKind::Internal, "squarefree decomposition of zero");
    std::vector<std::pair<HomPoly, int>> parts;
    Exp3 mono = f.min_exponents();
    for (int v = 0; v < 3; ++v)
        if (mono[static_cast<size_t>(v)] > 0)
            parts.emplace_back(HomPoly::variable(v), mono[static_cast<size_t>(v)]);
    HomPoly w = f.shifted_down(mono).canonicalized();
    if (w.is_constant())
        return parts;

    HomPoly c = gcd(std::vector<HomPoly>{w, w.derivative(0), w.derivative(1), w.derivative(2)});
    auto q = w.divide_exact(c);
    if (!q)
        throw Error(ErrorKind::Internal, "squarefree: repeated part does not divide");
    w = q->canonicalized(); // product of the distinct prime factors
    int i = 1;
    while (!w.is_constant()) {
        HomPoly y = gcd(w, c);
        auto part = w.divide_exact(y);
        if (!part)
            throw Error(ErrorKind::Internal, "squarefree: chain division failed");
        if (!part->is_constant())
            parts.emplace_back(part->canonicalized(), i);
        auto cq = c.divide_exact(y);
        if (!cq)
            throw Error(ErrorKind::Internal, "squarefree: cofactor division failed");
        c = cq->canonicalized();
        w = y.canonicalized();
        ++i;
    }
    return parts;
}

namespace detail {

/// Rational roots of an integer univariate polynomial together with the
/// root-free residual. `complete` is false when divisor enumeration was
/// truncated (huge coefficients), in which case roots may be missing.
struct RootSearch {
    std::vector<std::pair<Rat, int>> roots; // (root, multiplicity)
    UniPoly residual;
    bool complete = true;
};

inline std::vector<Int> divisors_capped(Int n, bool& complete)
{
    n = abs(n);
    std::vector<Int> primes;
    std::vector<int> mults;
    for (long p = 2; n > 1 && p <= 1000003L && Int(p) * p <= n; p = (p == 2 ? 3 : p + 2)) {
        if (n % p == 0) {
            int m = 0;
            while (n % p == 0) {
                n /= p;
                ++m;
            }
            primes.emplace_back(p);
            mults.push_back(m);
        }
    }
    if (n > 1) {
        primes.push_back(n); // unfactored cofactor treated as prime
        mults.push_back(1);
        if (mpz_probab_prime_p(n.get_mpz_t(), 20) == 0)
            complete = false;
    }
    std::vector<Int> divs{Int(1)};
    for (size_t i = 0; i < primes.size(); ++i) {
        size_t base = divs.size();
        Int pk(1);
        for (int e = 1; e <= mults[i]; ++e) {
            pk *= primes[i];
            for (size_t j = 0; j < base; ++j) {
                divs.push_back(divs[j] * pk);
                if (divs.size() > 1u << 14) {
                    complete = false;
                    return divs;
                }
            }
        }
    }
    return divs;
}

inline RootSearch rational_roots(UniPoly u)
{
    RootSearch out;
    if (u.is_zero())
        throw Error(ErrorKind::Internal, "roots of the zero polynomial");
    // x^k factor
    int shift = 0;
    while (u.degree() > 0 && u[0] == 0) {
        std::vector<Int> c(u.coeffs().begin() + 1, u.coeffs().end());
        u = UniPoly(std::move(c));
        ++shift;
    }
    if (shift > 0)
        out.roots.emplace_back(Rat(0), shift);
    u = u.primitive();
    if (u.degree() <= 0) {
        out.residual = u;
        return out;
    }
    bool complete = true;
    auto nums = divisors_capped(u[0], complete);
    auto dens = divisors_capped(u.lc(), complete);
    if (nums.size() * dens.size() > (1u << 16)) {
        complete = false;
        nums.resize(std::min<size_t>(nums.size(), 1u << 8));
        dens.resize(std::min<size_t>(dens.size(), 1u << 8));
    }
    std::vector<Rat> candidates;
    for (const auto& p : nums)
        for (const auto& q : dens) {
            Rat r = make_rat(p, q);
            candidates.push_back(r);
            candidates.push_back(-r);
        }
    for (const auto& r : candidates) {
        int mult = 0;
        // a primitive root factor (q x - p) of a primitive polynomial
        // divides exactly over Z by Gauss's lemma
        UniPoly lin({Int(-r.get_num()), Int(r.get_den())});
        while (u.degree() > 0 && sign(u.eval(r)) == 0) {
            auto q = u.divide_exact(lin);
            if (!q)
                break;
            u = q->primitive();
            ++mult;
        }
        if (mult > 0)
            out.roots.emplace_back(r, mult);
        if (u.degree() <= 0)
            break;
    }
    out.residual = u;
    out.complete = complete;
    return out;
}

} // namespace detail

/// All rational (degree-one) factors of a homogeneous polynomial with
/// multiplicities, plus the factor-free remainder. Lines missing z1 are
/// found through a coefficient-content pass; lines involving z1 through
/// rational root search on two generic sections, each candidate verified by
/// exact division.
inline std::pair<std::vector<std::pair<HomPoly, int>>, HomPoly> linear_factors(const HomPoly& f)
{
    if (f.is_zero())
        throw Error(ErrorKind::Internal, "linear factors of zero");
    std::vector<std::pair<HomPoly, int>> lines;
    Exp3 mono = f.min_exponents();
    for (int v = 0; v < 3; ++v)
        if (mono[static_cast<size_t>(v)] > 0)
            lines.emplace_back(HomPoly::variable(v), mono[static_cast<size_t>(v)]);
    HomPoly rem = f.shifted_down(mono).canonicalized();
    if (rem.is_constant())
        return {lines, HomPoly::constant(Rat(1))};

    auto try_divide = [&](const HomPoly& line) {
        int mult = 0;
        while (true) {
            auto q = rem.divide_exact(line);
            if (!q)
                break;
            rem = q->canonicalized();
            ++mult;
        }
        if (mult > 0)
            lines.emplace_back(line.canonicalized(), mult);
    };

    // lines a*z2 + b*z3 (no z1): factors of the content of the z1-slices
    {
        detail::BivPoly biv = detail::to_biv(rem);
        UniPoly cont = detail::biv_content(biv); // polynomial in z2 alone (y)
        if (cont.degree() > 0) {
            auto rs = detail::rational_roots(cont);
            for (const auto& [r, mult] : rs.roots) {
                (void)mult;
                // y = r  ->  z2 - r z3
                HomPoly line = HomPoly::variable(1) + HomPoly::variable(2) * (-r);
                try_divide(line.canonicalized());
            }
        }
    }

    // lines involving z1: candidates through rational points on two sections
    if (!rem.is_constant()) {
        detail::BivPoly biv = detail::to_biv(rem);
        std::vector<std::pair<Rat, std::vector<Rat>>> sections;
        Rat y0(0);
        int found = 0;
        for (long t = 0; found < 2 && t < 64; ++t) {
            Rat y(t % 2 == 0 ? t / 2 : -(t / 2 + 1));
            // evaluate the x-leading coefficient; skip degenerate sections
            if (sign(biv.back().eval(y)) == 0)
                continue;
            std::vector<Int> num;
            Int den(1);
            UniPoly sect; // f(x, y) as univariate in x, scaled to integers
            {
                std::vector<Rat> vals;
                for (const auto& cy : biv)
                    vals.push_back(cy.eval(y));
                Int l(1);
                for (const auto& v : vals)
                    l = lcm(l, v.get_den());
                std::vector<Int> ic;
                for (const auto& v : vals)
                    ic.push_back(Int(v.get_num() * (l / v.get_den())));
                sect = UniPoly(std::move(ic));
            }
            auto rs = detail::rational_roots(sect);
            std::vector<Rat> roots;
            for (const auto& [r, m] : rs.roots) {
                (void)m;
                roots.push_back(r);
            }
            sections.emplace_back(y, std::move(roots));
            ++found;
        }
        if (sections.size() == 2) {
            const auto& [ya, rootsa] = sections[0];
            const auto& [yb, rootsb] = sections[1];
            for (const Rat& xa : rootsa)
                for (const Rat& xb : rootsb) {
                    // affine line through (xa, ya) and (xb, yb)
                    Rat a = ya - yb;
                    Rat b = xb - xa;
                    Rat c = xa * yb - xb * ya;
                    HomPoly line = HomPoly::variable(0) * a + HomPoly::variable(1) * b +
                                   HomPoly::variable(2) * c;
                    if (!line.is_zero())
                        try_divide(line.canonicalized());
                }
        }
    }
    return {lines, rem};
}

} // namespace cremona
