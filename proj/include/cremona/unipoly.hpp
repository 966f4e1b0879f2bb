#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cremona/rat.hpp"

namespace cremona {

/// Dense univariate polynomial with integer coefficients, low degree first.
/// Invariant: coefficient vector empty for the zero polynomial, otherwise
/// the leading (last) coefficient is nonzero.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    UniPoly(std::initializer_list<long> coeffs)
    {
        for (long v : coeffs)
            c_.emplace_back(v);
        trim();
    }

    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(Int v)
    {
        UniPoly p;
        if (v != 0)
            p.c_.push_back(std::move(v));
        return p;
    }
    static UniPoly one() { return constant(Int(1)); }
    /// c * x^k
    static UniPoly monomial(Int coeff, int k)
    {
        UniPoly p;
        if (coeff != 0) {
            p.c_.assign(static_cast<size_t>(k) + 1, Int(0));
            p.c_.back() = std::move(coeff);
        }
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& operator[](int i) const
    {
        static const Int kZero(0);
        if (i < 0 || i >= static_cast<int>(c_.size()))
            return kZero;
        return c_[static_cast<size_t>(i)];
    }
    const Int& lc() const
    {
        if (c_.empty())
            throw Error(ErrorKind::Internal, "leading coefficient of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b)
    {
        UniPoly r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < r.c_.size(); ++i) {
            if (i < a.c_.size())
                r.c_[i] += a.c_[i];
            if (i < b.c_.size())
                r.c_[i] += b.c_[i];
        }
        r.trim();
        return r;
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b)
    {
        UniPoly r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < r.c_.size(); ++i) {
            if (i < a.c_.size())
                r.c_[i] += a.c_[i];
            if (i < b.c_.size())
                r.c_[i] -= b.c_[i];
        }
        r.trim();
        return r;
    }
    UniPoly operator-() const
    {
        UniPoly r = *this;
        for (auto& v : r.c_)
            v = -v;
        return r;
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b)
    {
        if (a.is_zero() || b.is_zero())
            return UniPoly();
        UniPoly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0)
                continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    friend UniPoly operator*(const UniPoly& a, const Int& s)
    {
        if (s == 0)
            return UniPoly();
        UniPoly r = a;
        for (auto& v : r.c_)
            v *= s;
        return r;
    }

    /// Multiply by x^k.
    UniPoly shifted(int k) const
    {
        if (is_zero() || k == 0)
            return *this;
        UniPoly r;
        r.c_.assign(c_.size() + static_cast<size_t>(k), Int(0));
        std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
        return r;
    }

    UniPoly pow(int e) const
    {
        UniPoly r = one();
        for (int i = 0; i < e; ++i)
            r = r * *this;
        return r;
    }

    UniPoly derivative() const
    {
        UniPoly r;
        for (size_t i = 1; i < c_.size(); ++i)
            r.c_.push_back(c_[i] * Int(static_cast<long>(i)));
        r.trim();
        return r;
    }

    Rat eval(const Rat& x) const
    {
        Rat r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + Rat(*it);
        return r;
    }
    Int eval(const Int& x) const
    {
        Int r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + *it;
        return r;
    }

    Int content() const
    {
        Int g(0);
        for (const auto& v : c_)
            g = cremona::gcd(g, v);
        return g;
    }

    /// Divides out the integer content; sign chosen so the leading
    /// coefficient is positive.
    UniPoly primitive() const
    {
        if (is_zero())
            return *this;
        Int g = content();
        if (sign(c_.back()) < 0)
            g = -g;
        UniPoly r = *this;
        for (auto& v : r.c_)
            v /= g;
        return r;
    }

    /// Exact division; nullopt when `d` does not divide exactly over Z.
    std::optional<UniPoly> divide_exact(const UniPoly& d) const
    {
        if (d.is_zero())
            throw Error(ErrorKind::Internal, "division by zero polynomial");
        if (is_zero())
            return UniPoly();
        if (degree() < d.degree())
            return std::nullopt;
        std::vector<Int> rem = c_;
        std::vector<Int> quo(static_cast<size_t>(degree() - d.degree()) + 1, Int(0));
        for (int i = degree(); i >= d.degree(); --i) {
            Int& top = rem[static_cast<size_t>(i)];
            if (top == 0)
                continue;
            Int q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(), d.lc().get_mpz_t());
            if (r != 0)
                return std::nullopt;
            quo[static_cast<size_t>(i - d.degree())] = q;
            for (int j = 0; j <= d.degree(); ++j)
                rem[static_cast<size_t>(i - d.degree() + j)] -= q * d[j];
        }
        for (const auto& v : rem)
            if (v != 0)
                return std::nullopt;
        return UniPoly(std::move(quo));
    }

    bool divides(const UniPoly& other) const { return other.divide_exact(*this).has_value(); }

    /// Pseudo-remainder: lc(d)^(deg(a)-deg(d)+1) * a = q*d + r with deg r < deg d.
    static UniPoly prem(UniPoly a, const UniPoly& d)
    {
        if (d.is_zero())
            throw Error(ErrorKind::Internal, "pseudo-division by zero");
        int e = a.degree() - d.degree() + 1;
        while (!a.is_zero() && a.degree() >= d.degree()) {
            int k = a.degree() - d.degree();
            Int coef = a.lc();
            // a <- lc(d)*a - coef*x^k*d
            std::vector<Int> nc(a.c_.size(), Int(0));
            for (size_t i = 0; i < a.c_.size(); ++i)
                nc[i] = a.c_[i] * d.lc();
            for (int j = 0; j <= d.degree(); ++j)
                nc[static_cast<size_t>(j + k)] -= coef * d[j];
            a = UniPoly(std::move(nc));
            --e;
        }
        if (e > 0) {
            Int f;
            mpz_pow_ui(f.get_mpz_t(), d.lc().get_mpz_t(), static_cast<unsigned long>(e));
            a = a * f;
        }
        return a;
    }

    /// GCD via primitive pseudo-remainder sequence; result is primitive
    /// with positive leading coefficient.
    static UniPoly gcd(UniPoly a, UniPoly b)
    {
        if (a.is_zero())
            return b.primitive();
        if (b.is_zero())
            return a.primitive();
        Int ca = a.content(), cb = b.content();
        Int cg = cremona::gcd(ca, cb);
        a = a.primitive();
        b = b.primitive();
        if (a.degree() < b.degree())
            std::swap(a, b);
        while (!b.is_zero()) {
            UniPoly r = prem(a, b).primitive();
            a = std::move(b);
            b = std::move(r);
        }
        return a.primitive() * cg;
    }

    std::string to_string(const std::string& var = "x") const
    {
        if (is_zero())
            return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const Int& v = c_[static_cast<size_t>(i)];
            if (v == 0)
                continue;
            bool first = out.empty();
            if (sign(v) >= 0 && !first)
                out += " + ";
            else if (sign(v) < 0)
                out += first ? "-" : " - ";
            Int a = abs(v);
            bool unit = (a == 1);
            if (i == 0) {
                out += a.get_str();
            } else {
                if (!unit)
                    out += a.get_str() + "*";
                out += var;
                if (i > 1)
                    out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<Int> c_;
};

/// x^n - 1
inline UniPoly xn_minus_one(int n)
{
    std::vector<Int> c(static_cast<size_t>(n) + 1, Int(0));
    c[0] = -1;
    c[static_cast<size_t>(n)] = 1;
    return UniPoly(std::move(c));
}

/// N-th cyclotomic polynomial, memoized.
inline const UniPoly& cyclotomic(int n)
{
    static std::map<int, UniPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    UniPoly p = xn_minus_one(n);
    for (int d = 1; d < n; ++d) {
        if (n % d != 0)
            continue;
        auto q = p.divide_exact(cyclotomic(d));
        if (!q)
            throw Error(ErrorKind::Internal, "cyclotomic division failed");
        p = std::move(*q);
    }
    return cache.emplace(n, std::move(p)).first->second;
}

inline int euler_phi(int n)
{
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0)
                n /= p;
            result -= result / p;
        }
    }
    if (n > 1)
        result -= result / n;
    return result;
}

/// All N with phi(N) <= bound, scanned up to the cap 3*bound^2 (safe since
/// phi(N) >= sqrt(N/2)).
inline std::vector<int> totient_inverse(int bound)
{
    std::vector<int> out;
    long cap = 3L * bound * bound;
    if (cap < 6)
        cap = 6;
    for (int n = 1; n <= cap; ++n)
        if (euler_phi(n) <= bound)
            out.push_back(n);
    return out;
}

/// Exact determinant of a matrix of integer polynomials by fraction-free
/// (Bareiss) elimination. All intermediate divisions are exact.
inline UniPoly unipoly_det(std::vector<std::vector<UniPoly>> m)
{
    size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n)
            throw Error(ErrorKind::Internal, "determinant of non-square matrix");
    if (n == 0)
        return UniPoly::one();
    UniPoly prev = UniPoly::one();
    int sgn = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k].is_zero())
                ++piv;
            if (piv == n)
                return UniPoly();
            std::swap(m[k], m[piv]);
            sgn = -sgn;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                UniPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                auto q = num.divide_exact(prev);
                if (!q)
                    throw Error(ErrorKind::Internal, "Bareiss division not exact");
                m[i][j] = std::move(*q);
            }
            m[i][k] = UniPoly();
        }
        prev = m[k][k];
    }
    UniPoly det = m[n - 1][n - 1];
    return sgn < 0 ? -det : det;
}

/// Sturm chain over Q for exact real-root counting/bracketing.
class SturmChain {
public:
    explicit SturmChain(const UniPoly& p)
    {
        std::vector<Rat> f;
        for (const auto& v : p.coeffs())
            f.emplace_back(v);
        chain_.push_back(trim(std::move(f)));
        std::vector<Rat> d;
        for (size_t i = 1; i < chain_[0].size(); ++i)
            d.push_back(chain_[0][i] * Rat(static_cast<long>(i)));
        chain_.push_back(trim(std::move(d)));
        while (chain_.back().size() > 0) {
            auto r = neg_rem(chain_[chain_.size() - 2], chain_.back());
            if (r.empty())
                break;
            chain_.push_back(std::move(r));
        }
    }

    /// Number of distinct real roots in (a, b].
    int count_roots(const Rat& a, const Rat& b) const { return variations(a) - variations(b); }

private:
    static std::vector<Rat> trim(std::vector<Rat> v)
    {
        while (!v.empty() && sign(v.back()) == 0)
            v.pop_back();
        return v;
    }

    static std::vector<Rat> neg_rem(std::vector<Rat> a, const std::vector<Rat>& b)
    {
        while (a.size() >= b.size() && !a.empty()) {
            Rat q = a.back() / b.back();
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[off + i] -= q * b[i];
            a = trim(std::move(a));
        }
        for (auto& v : a)
            v = -v;
        return a;
    }

    int variations(const Rat& x) const
    {
        int var = 0, last = 0;
        for (const auto& f : chain_) {
            Rat v(0);
            for (auto it = f.rbegin(); it != f.rend(); ++it)
                v = v * x + *it;
            int s = sign(v);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++var;
            last = s;
        }
        return var;
    }

    std::vector<std::vector<Rat>> chain_;
};

/// Bracket the largest real root of `p` lying in (lo, hi] down to the given
/// width. Returns nullopt when no real root exceeds `lo`.
inline std::optional<std::pair<Rat, Rat>>
largest_real_root(const UniPoly& p, Rat lo, Rat hi, const Rat& width)
{
    SturmChain sturm(p);
    if (sturm.count_roots(lo, hi) == 0)
        return std::nullopt;
    while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        if (sturm.count_roots(mid, hi) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return std::make_pair(lo, hi);
}

/// Cauchy bound: all real roots lie within (-B, B).
inline Rat cauchy_bound(const UniPoly& p)
{
    Rat maxabs(0);
    for (int i = 0; i < p.degree(); ++i) {
        Rat v = abs(Rat(p[i]) / Rat(p.lc()));
        if (v > maxabs)
            maxabs = v;
    }
    return maxabs + 1;
}

} // namespace cremona
