#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cremona/rat.hpp"

namespace cremona {

/// Exponent triple (e1,e2,e3); std::array comparison gives lex order.
using Exp3 = std::array<int, 3>;

inline int exp_sum(const Exp3& e) { return e[0] + e[1] + e[2]; }

/// Point of the projective plane in canonical form: the first nonzero
/// coordinate is scaled to 1, so equality of coordinates is projective
/// equality.
class ProjPoint {
public:
    ProjPoint(Rat a, Rat b, Rat c) : coords_{std::move(a), std::move(b), std::move(c)}
    {
        canonicalize();
    }
    explicit ProjPoint(std::array<Rat, 3> coords) : coords_(std::move(coords)) { canonicalize(); }

    const std::array<Rat, 3>& coords() const { return coords_; }
    const Rat& operator[](int i) const { return coords_[static_cast<size_t>(i)]; }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b)
    {
        return a.coords_ == b.coords_;
    }
    friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }
    friend bool operator<(const ProjPoint& a, const ProjPoint& b)
    {
        for (int i = 0; i < 3; ++i) {
            if (a.coords_[i] < b.coords_[i])
                return true;
            if (b.coords_[i] < a.coords_[i])
                return false;
        }
        return false;
    }

    std::string to_string() const
    {
        return "(" + rat_to_string(coords_[0]) + ", " + rat_to_string(coords_[1]) + ", " +
               rat_to_string(coords_[2]) + ")";
    }

private:
    void canonicalize()
    {
        int pivot = -1;
        for (int i = 0; i < 3; ++i)
            if (sign(coords_[static_cast<size_t>(i)]) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            throw Error(ErrorKind::Internal, "projective point with all coordinates zero");
        Rat s = coords_[static_cast<size_t>(pivot)];
        for (auto& c : coords_)
            c /= s;
    }

    std::array<Rat, 3> coords_;
};

/// Sparse homogeneous polynomial in z1,z2,z3 over the rationals.
/// Invariants: no zero coefficients are stored; every exponent triple sums
/// to the common degree; the zero polynomial has an empty term map (its
/// degree() reports -1).
class HomPoly {
public:
    using TermMap = std::map<Exp3, Rat>;

    HomPoly() = default;

    static HomPoly zero() { return HomPoly(); }

    static HomPoly term(Rat coeff, const Exp3& e)
    {
        HomPoly p;
        if (sign(coeff) != 0)
            p.terms_.emplace(e, std::move(coeff));
        return p;
    }

    static HomPoly variable(int i)
    {
        Exp3 e{0, 0, 0};
        e[static_cast<size_t>(i)] = 1;
        return term(Rat(1), e);
    }

    static HomPoly constant(Rat v) { return term(std::move(v), {0, 0, 0}); }

    /// Builds from arbitrary (exponent, coefficient) data; throws unless all
    /// nonzero terms share one total degree.
    static HomPoly from_terms(const TermMap& terms)
    {
        HomPoly p;
        int deg = -1;
        for (const auto& [e, c] : terms) {
            if (sign(c) == 0)
                continue;
            if (deg < 0)
                deg = exp_sum(e);
            else if (exp_sum(e) != deg)
                throw Error(ErrorKind::NonHomogeneous, "terms of mixed total degree");
            p.terms_.emplace(e, c);
        }
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || degree() == 0; }
    /// -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : exp_sum(terms_.begin()->first); }
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Lexicographically largest exponent triple.
    const Exp3& leading_exponent() const
    {
        if (terms_.empty())
            throw Error(ErrorKind::Internal, "leading term of zero polynomial");
        return terms_.rbegin()->first;
    }
    const Rat& leading_coeff() const { return terms_.rbegin()->second; }

    friend bool operator==(const HomPoly& a, const HomPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const HomPoly& a, const HomPoly& b) { return !(a == b); }

    friend HomPoly operator+(const HomPoly& a, const HomPoly& b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        if (a.degree() != b.degree())
            throw Error(ErrorKind::DegreeMismatch,
                        "adding homogeneous polynomials of degrees " +
                            std::to_string(a.degree()) + " and " + std::to_string(b.degree()));
        HomPoly r = a;
        for (const auto& [e, c] : b.terms_)
            r.add_term(e, c);
        return r;
    }

    friend HomPoly operator-(const HomPoly& a, const HomPoly& b) { return a + (-b); }

    HomPoly operator-() const
    {
        HomPoly r = *this;
        for (auto& [e, c] : r.terms_)
            c = -c;
        return r;
    }

    friend HomPoly operator*(const HomPoly& a, const HomPoly& b)
    {
        HomPoly r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        return r;
    }

    friend HomPoly operator*(const HomPoly& a, const Rat& s)
    {
        if (sign(s) == 0)
            return HomPoly();
        HomPoly r = a;
        for (auto& [e, c] : r.terms_)
            c *= s;
        return r;
    }

    HomPoly pow(int e) const
    {
        HomPoly r = constant(Rat(1));
        for (int i = 0; i < e; ++i)
            r = r * *this;
        return r;
    }

    HomPoly derivative(int var) const
    {
        HomPoly r;
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<size_t>(var)];
            if (k == 0)
                continue;
            Exp3 ne = e;
            ne[static_cast<size_t>(var)] = k - 1;
            r.add_term(ne, c * Rat(k));
        }
        return r;
    }

    Rat eval(const std::array<Rat, 3>& x) const
    {
        Rat total(0);
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (int v = 0; v < 3; ++v)
                for (int i = 0; i < e[static_cast<size_t>(v)]; ++i)
                    t *= x[static_cast<size_t>(v)];
            total += t;
        }
        return total;
    }
    Rat eval(const ProjPoint& p) const { return eval(p.coords()); }

    /// Substitutes subst[i] for z_{i+1}. The three substituted polynomials
    /// must share one degree. Ring homomorphism; evaluated by nested Horner
    /// so that the big operands are only ever multiplied by the small
    /// substitution polynomials.
    HomPoly compose(const std::array<HomPoly, 3>& subst) const
    {
        if (is_zero())
            return HomPoly();
        int n = -1;
        for (const auto& s : subst) {
            if (s.is_zero())
                continue;
            if (n < 0)
                n = s.degree();
            else if (s.degree() != n)
                throw Error(ErrorKind::DegreeMismatch, "substitution triple of mixed degrees");
        }
        if (n < 0)
            throw Error(ErrorKind::DegreeMismatch, "substitution by the zero triple");

        int d = degree();
        // coeff[e1][e2] with e3 = d - e1 - e2 implied
        std::map<int, std::map<int, Rat>> sliced;
        for (const auto& [e, c] : terms_)
            sliced[e[0]][e[1]] = c;

        // powers of subst[2] on demand
        std::vector<HomPoly> pow3{constant(Rat(1))};
        auto p3 = [&](int k) -> const HomPoly& {
            while (static_cast<int>(pow3.size()) <= k)
                pow3.push_back(pow3.back() * subst[2]);
            return pow3[static_cast<size_t>(k)];
        };

        HomPoly acc; // Horner over z1
        for (int a = d; a >= 0; --a) {
            if (!acc.is_zero())
                acc = acc * subst[0];
            auto it = sliced.find(a);
            if (it == sliced.end())
                continue;
            // inner Horner over z2 for the degree-(d-a) slice
            int m = d - a;
            HomPoly inner;
            for (int b = m; b >= 0; --b) {
                if (!inner.is_zero())
                    inner = inner * subst[1];
                auto jt = it->second.find(b);
                if (jt != it->second.end())
                    inner = safe_add(inner, p3(m - b) * jt->second);
            }
            acc = safe_add(acc, inner);
        }
        return acc;
    }

    /// Multiplicity of the curve {this = 0} at P: the lowest total degree of
    /// the expansion in an affine chart centered at P; 0 when P is off the
    /// curve.
    int multiplicity_at(const ProjPoint& p) const
    {
        if (is_zero())
            throw Error(ErrorKind::Internal, "multiplicity of zero polynomial");
        int chart = 0;
        while (sign(p[chart]) == 0)
            ++chart;
        // translate so that P sits at the chart origin
        std::array<HomPoly, 3> t;
        for (int i = 0; i < 3; ++i) {
            if (i == chart)
                t[static_cast<size_t>(i)] = variable(i);
            else
                t[static_cast<size_t>(i)] = variable(i) + variable(chart) * p[i];
        }
        HomPoly g = compose(t);
        int best = degree() + 1;
        for (const auto& [e, c] : g.terms_) {
            (void)c;
            int local = exp_sum(e) - e[static_cast<size_t>(chart)];
            best = std::min(best, local);
        }
        return best;
    }

    /// Exact division; nullopt when `d` does not divide. Runs on one
    /// in-place working copy, subtracting quotient-term multiples of the
    /// divisor term by term.
    std::optional<HomPoly> divide_exact(const HomPoly& d) const
    {
        if (d.is_zero())
            throw Error(ErrorKind::Internal, "division by zero polynomial");
        if (is_zero())
            return HomPoly();
        if (degree() < d.degree())
            return std::nullopt;
        TermMap rem = terms_;
        HomPoly quo;
        const Exp3& de = d.leading_exponent();
        const Rat& dc = d.leading_coeff();
        while (!rem.empty()) {
            auto lead = std::prev(rem.end());
            const Exp3& re = lead->first;
            Exp3 qe{re[0] - de[0], re[1] - de[1], re[2] - de[2]};
            if (qe[0] < 0 || qe[1] < 0 || qe[2] < 0)
                return std::nullopt;
            Rat qc = lead->second / dc;
            quo.terms_.emplace(qe, qc);
            for (const auto& [e, c] : d.terms_) {
                Exp3 te{e[0] + qe[0], e[1] + qe[1], e[2] + qe[2]};
                auto [it, inserted] = rem.try_emplace(te, Rat(0));
                it->second -= qc * c;
                if (sign(it->second) == 0)
                    rem.erase(it);
            }
        }
        return quo;
    }

    bool divides(const HomPoly& other) const { return other.divide_exact(*this).has_value(); }

    /// Smallest exponent of each variable over all terms (the common
    /// monomial factor).
    Exp3 min_exponents() const
    {
        if (is_zero())
            throw Error(ErrorKind::Internal, "min exponents of zero polynomial");
        Exp3 m = terms_.begin()->first;
        for (const auto& [e, c] : terms_) {
            (void)c;
            for (int i = 0; i < 3; ++i)
                m[static_cast<size_t>(i)] = std::min(m[static_cast<size_t>(i)], e[static_cast<size_t>(i)]);
        }
        return m;
    }

    HomPoly shifted_down(const Exp3& m) const
    {
        HomPoly r;
        for (const auto& [e, c] : terms_)
            r.terms_.emplace(Exp3{e[0] - m[0], e[1] - m[1], e[2] - m[2]}, c);
        return r;
    }

    HomPoly shifted_up(const Exp3& m) const
    {
        HomPoly r;
        for (const auto& [e, c] : terms_)
            r.terms_.emplace(Exp3{e[0] + m[0], e[1] + m[1], e[2] + m[2]}, c);
        return r;
    }

    /// Canonical projective normalization: integer coprime coefficients and
    /// a positive coefficient on the lexicographically largest exponent
    /// triple. Canonical forms of projectively equal polynomials are
    /// identical term maps.
    HomPoly canonicalized() const
    {
        if (is_zero())
            return *this;
        Int den(1);
        for (const auto& [e, c] : terms_) {
            (void)e;
            den = lcm(den, c.get_den());
        }
        Int num(0);
        for (const auto& [e, c] : terms_) {
            (void)e;
            num = cremona::gcd(num, Int(c.get_num() * (den / c.get_den())));
        }
        Rat scale = make_rat(den, num);
        if (sign(leading_coeff()) < 0)
            scale = -scale;
        return *this * scale;
    }

    /// True when every coefficient is an integer.
    bool integral() const
    {
        for (const auto& [e, c] : terms_) {
            (void)e;
            if (!is_integer(c))
                return false;
        }
        return true;
    }

    std::string to_string() const
    {
        static const char* names[3] = {"z1", "z2", "z3"};
        if (is_zero())
            return "0";
        std::string out;
        // highest lex term first
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const Exp3& e = it->first;
            const Rat& c = it->second;
            bool first = out.empty();
            if (sign(c) < 0)
                out += first ? "-" : " - ";
            else if (!first)
                out += " + ";
            Rat a = abs(c);
            std::string mono;
            for (int v = 0; v < 3; ++v) {
                int k = e[static_cast<size_t>(v)];
                if (k == 0)
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += names[v];
                if (k > 1)
                    mono += "^" + std::to_string(k);
            }
            if (mono.empty())
                out += rat_to_string(a);
            else if (a == 1)
                out += mono;
            else
                out += rat_to_string(a) + "*" + mono;
        }
        return out;
    }

private:
    // addition that tolerates zero operands of unknown degree
    static HomPoly safe_add(const HomPoly& a, const HomPoly& b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        return a + b;
    }

    void add_term(const Exp3& e, const Rat& c)
    {
        if (sign(c) == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (sign(it->second) == 0)
                terms_.erase(it);
        }
    }

    TermMap terms_;
};

inline HomPoly operator*(const Rat& s, const HomPoly& p) { return p * s; }

} // namespace cremona
