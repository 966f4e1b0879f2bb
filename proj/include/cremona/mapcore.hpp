#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cremona/gcd.hpp"
#include "cremona/hompoly.hpp"

namespace cremona {

using Triple = std::array<HomPoly, 3>;

inline Triple canonicalize_triple(Triple t)
{
    // One common rational scale for the whole triple (it is a projective
    // object; per-component scaling would change the map).
    Int den(1);
    for (const auto& p : t)
        for (const auto& [e, c] : p.terms()) {
            (void)e;
            den = lcm(den, c.get_den());
        }
    Int num(0);
    for (const auto& p : t)
        for (const auto& [e, c] : p.terms()) {
            (void)e;
            num = cremona::gcd(num, Int(c.get_num() * (den / c.get_den())));
        }
    if (num == 0)
        throw Error(ErrorKind::Internal, "canonicalizing the zero triple");
    Rat scale = make_rat(den, num);
    int pivot_sign = 0;
    for (const auto& p : t)
        if (!p.is_zero()) {
            pivot_sign = sign(p.leading_coeff());
            break;
        }
    if (pivot_sign < 0)
        scale = -scale;
    for (auto& p : t)
        p = p * scale;
    return t;
}

inline std::array<Rat, 3> eval_triple(const Triple& t, const ProjPoint& p)
{
    return {t[0].eval(p), t[1].eval(p), t[2].eval(p)};
}

/// Birational plane map: forward and inverse homogeneous triples of one
/// common degree n. The inverse is required input and is verified, never
/// derived.
class BiratMap {
public:
    BiratMap(Triple forward, Triple inverse)
        : fwd_(canonicalize_triple(std::move(forward))),
          inv_(canonicalize_triple(std::move(inverse)))
    {
        n_ = common_degree(fwd_, "forward");
        int ni = common_degree(inv_, "inverse");
        if (ni != n_)
            throw Error(ErrorKind::DegreeMismatch,
                        "forward degree " + std::to_string(n_) + " vs inverse degree " +
                            std::to_string(ni));
    }

    const Triple& forward() const { return fwd_; }
    const Triple& inverse() const { return inv_; }
    int degree() const { return n_; }

    BiratMap inverse_map() const { return BiratMap(inv_, fwd_); }

    static BiratMap identity()
    {
        Triple id{HomPoly::variable(0), HomPoly::variable(1), HomPoly::variable(2)};
        return BiratMap(id, id);
    }

    /// The standard Cremona involution z' = (z2 z3 : z1 z3 : z1 z2).
    static BiratMap standard_cremona()
    {
        auto z1 = HomPoly::variable(0), z2 = HomPoly::variable(1), z3 = HomPoly::variable(2);
        Triple t{z2 * z3, z1 * z3, z1 * z2};
        return BiratMap(t, t);
    }

    /// Forward image of a point; throws HitsInverseFPoint-style condition as
    /// an all-zero evaluation.
    ProjPoint apply(const ProjPoint& p) const
    {
        auto v = eval_triple(fwd_, p);
        if (sign(v[0]) == 0 && sign(v[1]) == 0 && sign(v[2]) == 0)
            throw Error(ErrorKind::HitsInverseFPoint,
                        "forward map undefined at " + p.to_string());
        return ProjPoint(std::move(v));
    }

    ProjPoint apply_inverse(const ProjPoint& p) const
    {
        auto v = eval_triple(inv_, p);
        if (sign(v[0]) == 0 && sign(v[1]) == 0 && sign(v[2]) == 0)
            throw Error(ErrorKind::HitsInverseFPoint,
                        "inverse map undefined at " + p.to_string());
        return ProjPoint(std::move(v));
    }

private:
    static int common_degree(const Triple& t, const char* which)
    {
        int d = -1;
        for (const auto& p : t) {
            if (p.is_zero())
                throw Error(ErrorKind::DegreeMismatch,
                            std::string(which) + " triple has a zero component");
            if (d < 0)
                d = p.degree();
            else if (p.degree() != d)
                throw Error(ErrorKind::DegreeMismatch,
                            std::string(which) + " triple has mixed degrees");
        }
        if (d < 1)
            throw Error(ErrorKind::DegreeMismatch, std::string(which) + " triple is constant");
        return d;
    }

    Triple fwd_, inv_;
    int n_;
};

struct ValidationReport {
    HomPoly cofactor;         // F with inverse(forward(z)) = z_i * F(z)
    HomPoly inverse_cofactor; // same for forward(inverse(z))
    int cofactor_degree = 0;  // n^2 - 1
};

namespace detail {

inline Triple substitute_triple(const Triple& outer, const Triple& inner)
{
    return Triple{outer[0].compose(inner), outer[1].compose(inner), outer[2].compose(inner)};
}

/// Checks r == (z1,z2,z3) * F by cross-multiplication, then extracts F.
inline HomPoly roundtrip_cofactor(const Triple& r, const char* direction)
{
    auto z = [](int i) { return HomPoly::variable(i); };
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            HomPoly cross = r[static_cast<size_t>(i)] * z(j) - r[static_cast<size_t>(j)] * z(i);
            if (!cross.is_zero())
                throw Error(ErrorKind::NotBirational,
                            std::string(direction) +
                                " round trip is not proportional to the identity");
        }
    for (int i = 0; i < 3; ++i) {
        if (r[static_cast<size_t>(i)].is_zero())
            continue;
        auto f = r[static_cast<size_t>(i)].divide_exact(z(i));
        if (!f)
            throw Error(ErrorKind::NotBirational, "round-trip cofactor extraction failed");
        return *f;
    }
    throw Error(ErrorKind::NotBirational, std::string(direction) + " round trip is zero");
}

} // namespace detail

/// Verifies coprimality of both triples and the round-trip identity
/// inverse(forward(z)) = (z1,z2,z3) * F; returns both cofactors.
/// F is the product of the principal curves to their multiplicities, which
/// downstream code reuses as a cross-check.
inline ValidationReport validate(const BiratMap& m)
{
    HomPoly gf = gcd(m.forward());
    if (!gf.is_constant())
        throw Error(ErrorKind::CommonFactor,
                    "forward triple has common factor " + gf.to_string());
    HomPoly gi = gcd(m.inverse());
    if (!gi.is_constant())
        throw Error(ErrorKind::CommonFactor,
                    "inverse triple has common factor " + gi.to_string());
    Triple r = detail::substitute_triple(m.inverse(), m.forward());
    ValidationReport rep;
    rep.cofactor = detail::roundtrip_cofactor(r, "inverse o forward");
    Triple r2 = detail::substitute_triple(m.forward(), m.inverse());
    rep.inverse_cofactor = detail::roundtrip_cofactor(r2, "forward o inverse");
    rep.cofactor_degree = m.degree() * m.degree() - 1;
    if (rep.cofactor.degree() != rep.cofactor_degree ||
        rep.inverse_cofactor.degree() != rep.cofactor_degree)
        throw Error(ErrorKind::NotBirational, "round-trip cofactor has unexpected degree");
    return rep;
}

/// 3x3 determinant of the partial derivatives of the forward triple;
/// degree 3n-3. Vanishes exactly on the curves blown down by the map.
inline HomPoly jacobian(const BiratMap& m)
{
    const Triple& f = m.forward();
    std::array<std::array<HomPoly, 3>, 3> d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                f[static_cast<size_t>(i)].derivative(j);
    auto det2 = [&](int r1, int r2, int c1, int c2) {
        return d[static_cast<size_t>(r1)][static_cast<size_t>(c1)] *
                   d[static_cast<size_t>(r2)][static_cast<size_t>(c2)] -
               d[static_cast<size_t>(r1)][static_cast<size_t>(c2)] *
                   d[static_cast<size_t>(r2)][static_cast<size_t>(c1)];
    };
    HomPoly j0 = d[0][0] * det2(1, 2, 1, 2);
    HomPoly j1 = d[0][1] * det2(1, 2, 0, 2);
    HomPoly j2 = d[0][2] * det2(1, 2, 0, 1);
    HomPoly jac = j0 - j1 + j2;
    if (jac.is_zero())
        throw Error(ErrorKind::NotBirational, "map has identically zero Jacobian");
    return jac;
}

/// Apply `first`, then `second`; the shared factor of the raw composition is
/// canceled on both the forward and inverse sides. Degenerate inputs that
/// stop being birational are rejected by the embedded validation.
inline BiratMap compose_maps(const BiratMap& first, const BiratMap& second)
{
    Triple f = detail::substitute_triple(second.forward(), first.forward());
    HomPoly g = gcd(f);
    for (auto& p : f)
        p = *p.divide_exact(g);
    Triple i = detail::substitute_triple(first.inverse(), second.inverse());
    HomPoly gi = gcd(i);
    for (auto& p : i)
        p = *p.divide_exact(gi);
    BiratMap out(f, i);
    validate(out);
    return out;
}

/// v^{-1} o m o v, the birational-equivalence transport of Theorem-style
/// conjugation workflows.
inline BiratMap conjugate(const BiratMap& m, const BiratMap& v)
{
    return compose_maps(compose_maps(v, m), v.inverse_map());
}

} // namespace cremona
