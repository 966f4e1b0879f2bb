#pragma once

#include <algorithm>
#include <vector>

#include "cremona/mapcore.hpp"
#include "cremona/unipoly.hpp"

namespace cremona {

/// Degrees d(0), d(1), ..., d(last_k) of the iterates, computed by repeated
/// substitution of the forward triple into the running iterate followed by
/// cancellation of the common factor. `hit_budget` is set when the raw
/// intermediate degree n*d(k-1) would exceed the cap.
struct DegreeSequence {
    std::vector<long> values;
    bool hit_budget = false;
    int requested_kmax = 0;

    long operator[](size_t k) const { return values[k]; }
    size_t size() const { return values.size(); }
};

namespace detail {

/// Restriction of an integral homogeneous polynomial to the line
/// z = P + t*Q, as an integer polynomial in t (coefficient of s^...
/// homogenized away by evaluating s=1 after a degree-preserving
/// substitution).
inline UniPoly restrict_to_line(const HomPoly& f, const std::array<Int, 3>& p,
                                const std::array<Int, 3>& q)
{
    // substitute z_i = p_i*z1 + q_i*z2, then read off coefficients of
    // z1^{d-i} z2^i
    std::array<HomPoly, 3> sub;
    for (int i = 0; i < 3; ++i)
        sub[static_cast<size_t>(i)] = HomPoly::variable(0) * Rat(p[static_cast<size_t>(i)]) +
                                      HomPoly::variable(1) * Rat(q[static_cast<size_t>(i)]);
    HomPoly r = f.compose(sub);
    std::vector<Int> coeffs;
    for (const auto& [e, c] : r.terms()) {
        if (!is_integer(c))
            throw Error(ErrorKind::Internal, "line restriction of non-integral polynomial");
        int i = e[1];
        if (static_cast<int>(coeffs.size()) <= i)
            coeffs.resize(static_cast<size_t>(i) + 1, Int(0));
        coeffs[static_cast<size_t>(i)] = c.get_num();
    }
    return UniPoly(std::move(coeffs));
}

inline std::vector<long> mod_p(const UniPoly& u, long p)
{
    std::vector<long> r(u.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) {
        long v = static_cast<long>(mpz_fdiv_ui(u.coeffs()[i].get_mpz_t(),
                                               static_cast<unsigned long>(p)));
        r[i] = v;
    }
    while (!r.empty() && r.back() == 0)
        r.pop_back();
    return r;
}

inline std::vector<long> gcd_mod_p(std::vector<long> a, std::vector<long> b, long p)
{
    auto deg = [](const std::vector<long>& v) { return static_cast<int>(v.size()) - 1; };
    auto trim = [](std::vector<long>& v) {
        while (!v.empty() && v.back() == 0)
            v.pop_back();
    };
    auto inv = [&](long x) {
        long r = 1, e = p - 2, base = x % p;
        while (e) {
            if (e & 1)
                r = static_cast<long>((__int128)r * base % p);
            base = static_cast<long>((__int128)base * base % p);
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        long lead_inv = inv(b.back());
        while (deg(a) >= deg(b) && !a.empty()) {
            long f = static_cast<long>((__int128)a.back() * lead_inv % p);
            int k = deg(a) - deg(b);
            for (int j = 0; j <= deg(b); ++j) {
                long& slot = a[static_cast<size_t>(j + k)];
                slot = (slot - (__int128)f * b[static_cast<size_t>(j)] % p + p) % p;
            }
            trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

/// Deterministic coprimality certificate: if the restrictions of the triple
/// to a line are nonzero and their gcd mod p is constant for a prime p not
/// dividing every leading coefficient, the triple is coprime.
inline bool certify_coprime(const Triple& t, GenericRng& rng)
{
    static const long primes[] = {1000003L, 999983L, 909091L};
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::array<Int, 3> p{rng.next_int(40), rng.next_int(40), rng.next_int(40)};
        std::array<Int, 3> q{rng.next_int(40), rng.next_int(40), rng.next_int(40)};
        std::array<UniPoly, 3> r;
        bool bad = false;
        for (int i = 0; i < 3 && !bad; ++i) {
            r[static_cast<size_t>(i)] = restrict_to_line(t[static_cast<size_t>(i)], p, q);
            if (r[static_cast<size_t>(i)].is_zero())
                bad = true; // unlucky line inside a component
        }
        if (bad)
            continue;
        for (long prime : primes) {
            bool lead_ok = false;
            for (const auto& u : r)
                if (mpz_fdiv_ui(u.lc().get_mpz_t(), static_cast<unsigned long>(prime)) != 0)
                    lead_ok = true;
            if (!lead_ok)
                continue;
            auto g = gcd_mod_p(gcd_mod_p(mod_p(r[0], prime), mod_p(r[1], prime), prime),
                               mod_p(r[2], prime), prime);
            if (static_cast<int>(g.size()) <= 1)
                return true;
        }
    }
    return false;
}

/// Removes the full common factor of the triple. Known low-degree divisors
/// (Jacobian factors) are peeled off first; a line-restriction certificate
/// then usually proves coprimality, and only if it cannot does the generic
/// multivariate gcd run.
inline void cancel_common(Triple& t, const std::vector<HomPoly>& candidates, GenericRng& rng)
{
    // common monomial part
    Exp3 m{INT32_MAX, INT32_MAX, INT32_MAX};
    for (const auto& f : t) {
        Exp3 e = f.min_exponents();
        for (int i = 0; i < 3; ++i)
            m[static_cast<size_t>(i)] = std::min(m[static_cast<size_t>(i)], e[static_cast<size_t>(i)]);
    }
    if (m[0] || m[1] || m[2])
        for (auto& f : t)
            f = f.shifted_down(m);

    for (const auto& c : candidates) {
        while (true) {
            std::array<std::optional<HomPoly>, 3> q;
            bool all = true;
            for (int i = 0; i < 3 && all; ++i) {
                q[static_cast<size_t>(i)] = t[static_cast<size_t>(i)].divide_exact(c);
                all = q[static_cast<size_t>(i)].has_value();
            }
            if (!all)
                break;
            for (int i = 0; i < 3; ++i)
                t[static_cast<size_t>(i)] = std::move(*q[static_cast<size_t>(i)]);
        }
    }
    t = canonicalize_triple(std::move(t));

    while (!certify_coprime(t, rng)) {
        HomPoly g = gcd(t);
        if (g.is_constant())
            break; // PRS gcd is definitive
        for (auto& f : t)
            f = *f.divide_exact(g);
        t = canonicalize_triple(std::move(t));
    }
}

/// The blow-down divisor pool: irreducible-ish factors of the Jacobian.
/// Any common factor picked up by composing with the map is supported on
/// the contracted curves, and those divide the Jacobian.
inline std::vector<HomPoly> jacobian_factor_pool(const BiratMap& m)
{
    std::vector<HomPoly> pool;
    HomPoly jac = jacobian(m);
    for (const auto& [part, mult] : squarefree_decomposition(jac)) {
        (void)mult;
        auto [lines, rem] = linear_factors(part);
        for (const auto& [line, lmult] : lines) {
            (void)lmult;
            pool.push_back(line.canonicalized());
        }
        if (!rem.is_constant())
            pool.push_back(rem.canonicalized());
    }
    std::sort(pool.begin(), pool.end(), [](const HomPoly& a, const HomPoly& b) {
        if (a.degree() != b.degree())
            return a.degree() < b.degree();
        return a.terms() < b.terms();
    });
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

} // namespace detail

/// Degree oracle: d(k) = deg(Phi^k) by symbolic iteration, independent of
/// the base-point bookkeeping. Stops once the raw degree n*d(k-1) would
/// exceed `budget` (hit_budget is set; no throw), or at kmax.
inline DegreeSequence iterate_degrees_capped(const BiratMap& m, int kmax, int budget = 600)
{
    DegreeSequence out;
    out.requested_kmax = kmax;
    out.values.push_back(1);
    if (kmax == 0)
        return out;
    out.values.push_back(m.degree());
    std::vector<HomPoly> pool = detail::jacobian_factor_pool(m);
    GenericRng rng(0x0c0ffee1234ULL);
    Triple cur = m.forward();
    for (int k = 2; k <= kmax; ++k) {
        long raw = static_cast<long>(m.degree()) * out.values.back();
        if (raw > budget) {
            out.hit_budget = true;
            return out;
        }
        Triple next{cur[0].compose(m.forward()), cur[1].compose(m.forward()),
                    cur[2].compose(m.forward())};
        detail::cancel_common(next, pool, rng);
        cur = std::move(next);
        out.values.push_back(cur[0].degree());
    }
    return out;
}

/// Strict variant: throws BudgetExceeded when kmax is not reachable.
inline DegreeSequence iterate_degrees(const BiratMap& m, int kmax, int budget = 600)
{
    DegreeSequence s = iterate_degrees_capped(m, kmax, budget);
    if (s.hit_budget)
        throw Error(ErrorKind::BudgetExceeded,
                    "degree budget " + std::to_string(budget) + " exceeded after k=" +
                        std::to_string(s.values.size() - 1),
                    std::to_string(s.values.size() - 1));
    return s;
}

} // namespace cremona
