#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cremona/error.hpp"

namespace cremona {

/// Exact arbitrary-precision integer and rational scalars.
/// mpq_class keeps values reduced with positive denominator, which is
/// exactly the invariant the rest of the library relies on.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den)
{
    if (den == 0)
        throw Error(ErrorKind::Internal, "rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/// Parses "123", "-4", "7/3", "-7/3". Whitespace around tokens is allowed.
inline Rat parse_rat(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.empty())
        throw Error(ErrorKind::SyntaxError, "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        return make_rat(num, den);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::SyntaxError, "bad rational literal '" + text + "'");
    }
}

inline std::string rat_to_string(const Rat& q)
{
    if (is_integer(q))
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Int lcm(const Int& a, const Int& b)
{
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int gcd(const Int& a, const Int& b)
{
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline int sign(const Int& a) { return mpz_sgn(a.get_mpz_t()); }
inline int sign(const Rat& a) { return mpq_sgn(a.get_mpq_t()); }

/// Deterministic generator of small "generic" rationals for probabilistic
/// checks (blow-down sampling, generic coefficient combinations).
class GenericRng {
public:
    explicit GenericRng(std::uint64_t seed = 0x5eedcafeULL) : state_(seed) {}

    std::uint64_t next_u64()
    {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Nonzero integer in [-bound, bound].
    Int next_int(long bound = 20)
    {
        long span = 2 * bound;
        long v = static_cast<long>(next_u64() % static_cast<std::uint64_t>(span)) - bound;
        if (v >= 0)
            ++v;
        return Int(v);
    }

    Rat next_rat(long bound = 20)
    {
        Int num = next_int(bound);
        Int den = next_int(bound);
        if (den < 0)
            den = -den;
        return make_rat(num, den);
    }

private:
    std::uint64_t state_;
};

} // namespace cremona
