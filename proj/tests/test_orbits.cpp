#include <catch2/catch_amalgamated.hpp>

#include "cremona/mapfile.hpp"
#include "cremona/orbits.hpp"

using namespace cremona;

namespace {

const std::string kFixtures = CREMONA_FIXTURES_DIR;

BiratMap load(const std::string& name)
{
    return MapFile::load(kFixtures + "/" + name).instantiate();
}

ProjPoint pt(long a, long b, long c) { return ProjPoint(Rat(a), Rat(b), Rat(c)); }

int index_of(const std::vector<BasePoint>& pts, const ProjPoint& p)
{
    for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i].point == p)
            return static_cast<int>(i);
    return -1;
}

} // namespace

TEST_CASE("single inverse steps")
{
    SECTION("the fixed forward F-point of the conjugated first map")
    {
        auto m = load("ex1_generic.json");
        CHECK(step_inverse(m, pt(1, 1, 0)) == pt(1, 1, 0));
    }
    SECTION("two inverse steps carry O1 of the third map to its inverse partner")
    {
        auto m = load("ex3.json");
        ProjPoint o1 = pt(1, 0, 1);
        ProjPoint target = pt(-1, 0, 1);
        CHECK(step_inverse(m, step_inverse(m, o1)) == target);
    }
    SECTION("any involution orbit returns after two steps")
    {
        auto is = BiratMap::standard_cremona();
        ProjPoint p = pt(1, 2, 3);
        CHECK(step_inverse(is, step_inverse(is, p)) == p);
        CHECK(step_inverse(is, pt(1, 1, 1)) == pt(1, 1, 1));
    }
    SECTION("stepping on an inverse F-point is undefined")
    {
        auto is = BiratMap::standard_cremona();
        CHECK_THROWS_MATCHES(step_inverse(is, pt(1, 0, 0)), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.kind() == ErrorKind::HitsInverseFPoint;
                             }));
    }
}

TEST_CASE("orbits of single points")
{
    SECTION("cycle of period 1")
    {
        auto m = load("ex1_generic.json");
        auto rec = orbit_of(m, pt(1, 1, 0), OrbitDirection::Inverse, 10);
        CHECK(rec.status == OrbitStatus::Cycle);
        CHECK(rec.cycle_period == 1);
    }
    SECTION("involution fixed point")
    {
        auto rec = orbit_of(BiratMap::standard_cremona(), pt(1, 1, 1), OrbitDirection::Inverse,
                            10);
        CHECK(rec.status == OrbitStatus::Cycle);
        CHECK(rec.cycle_period == 1);
    }
    SECTION("the escaping orbit of the raw first map follows the published formula")
    {
        auto m = load("ex1_raw.json"); // lambda=2, d=1
        auto rec = orbit_of(m, pt(1, 0, 0), OrbitDirection::Inverse, 6);
        CHECK(rec.status == OrbitStatus::Unresolved);
        // Phi^{-k}(O_1) = (lambda^k, -d(lambda^k - 1)/(lambda - 1), 0)
        for (int k = 1; k <= 6; ++k) {
            Int lk;
            mpz_ui_pow_ui(lk.get_mpz_t(), 2, static_cast<unsigned long>(k));
            ProjPoint expected(Rat(lk), Rat(-(lk - 1)), Rat(0));
            CHECK(rec.trajectory[static_cast<size_t>(k)] == expected);
        }
    }
}

TEST_CASE("decomposition of the involution: all pairs at m=0")
{
    auto is = BiratMap::standard_cremona();
    auto base = analyze_base_geometry(is);
    auto dec = decompose(is, base, 10);
    CHECK(dec.sigma1 == 3);
    for (const auto& p : dec.pairs) {
        CHECK(p.m == 0);
        CHECK(base.fwd[static_cast<size_t>(p.alpha)].point ==
              base.inv[static_cast<size_t>(p.beta)].point);
    }
    for (auto c : dec.fwd_class)
        CHECK(c == PointClass::Int);
}

TEST_CASE("decomposition of the cubic example")
{
    auto m = load("ex4.json");
    auto base = analyze_base_geometry(m);
    auto dec = decompose(m, base, 50);
    REQUIRE(dec.sigma1 == 3);
    // published pairing: O2 = O^(-1)_3 (m=0), O4 = O^(-1)_5 (m=0),
    // Phi^{-1}(O1) = O^(-1)_1 (m=1); O3, O5 unresolved
    auto fwd_label = [&](const ProjPoint& p) { return index_of(base.fwd, p); };
    auto inv_label = [&](const ProjPoint& p) { return index_of(base.inv, p); };
    ProjPoint o1 = pt(1, 0, 0);
    ProjPoint o2(make_rat(Int(-1), Int(2)), make_rat(Int(1), Int(2)), Rat(1));
    ProjPoint o3(make_rat(Int(-5), Int(2)), make_rat(Int(-3), Int(2)), Rat(1));
    ProjPoint o4(make_rat(Int(1), Int(2)), make_rat(Int(-1), Int(2)), Rat(1));
    ProjPoint o5(make_rat(Int(-11), Int(2)), make_rat(Int(3), Int(2)), Rat(1));
    ProjPoint i1 = pt(0, 1, 0);
    ProjPoint i3(make_rat(Int(-1), Int(2)), make_rat(Int(1), Int(2)), Rat(1));
    ProjPoint i5(make_rat(Int(1), Int(2)), make_rat(Int(-1), Int(2)), Rat(1));

    bool pair_23 = false, pair_45 = false, pair_11 = false;
    for (const auto& p : dec.pairs) {
        const ProjPoint& a = base.fwd[static_cast<size_t>(p.alpha)].point;
        const ProjPoint& b = base.inv[static_cast<size_t>(p.beta)].point;
        if (a == o2 && b == i3 && p.m == 0)
            pair_23 = true;
        if (a == o4 && b == i5 && p.m == 0)
            pair_45 = true;
        if (a == o1 && b == i1 && p.m == 1)
            pair_11 = true;
    }
    CHECK(pair_23);
    CHECK(pair_45);
    CHECK(pair_11);
    CHECK(dec.fwd_class[static_cast<size_t>(fwd_label(o3))] == PointClass::Inf);
    CHECK(dec.fwd_class[static_cast<size_t>(fwd_label(o5))] == PointClass::Inf);
    CHECK(dec.any_unresolved);
    (void)inv_label;
    // the m-list is sorted
    for (size_t i = 1; i < dec.pairs.size(); ++i)
        CHECK(dec.pairs[i - 1].m <= dec.pairs[i].m);
}

TEST_CASE("decomposition of the third map: all orbit lengths are two")
{
    auto m = load("ex3.json");
    auto base = analyze_base_geometry(m);
    auto dec = decompose(m, base, 50);
    REQUIRE(dec.sigma1 == 3);
    for (const auto& p : dec.pairs)
        CHECK(p.m == 2);
    CHECK_FALSE(dec.any_unresolved);
    // exact re-evaluation of every pairing
    for (const auto& p : dec.pairs) {
        ProjPoint cur = base.fwd[static_cast<size_t>(p.alpha)].point;
        for (int t = 0; t < p.m; ++t)
            cur = step_inverse(m, cur);
        CHECK(cur == base.inv[static_cast<size_t>(p.beta)].point);
    }
}

TEST_CASE("decomposition of the conjugated first map at generic parameters")
{
    auto m = load("ex1_generic.json");
    auto base = analyze_base_geometry(m);
    auto dec = decompose(m, base, 30);
    CHECK(dec.sigma1 == 2);
    // published: O1, O3 pair at m=0; O2 = (1,1,0) is a cycle; O4, O5 escape;
    // on the inverse side O5 = (-1,-1,1) is a cycle
    int cyc = index_of(base.fwd, pt(1, 1, 0));
    REQUIRE(cyc >= 0);
    CHECK(dec.fwd_class[static_cast<size_t>(cyc)] == PointClass::Cycle);
    int icyc = index_of(base.inv, pt(-1, -1, 1));
    REQUIRE(icyc >= 0);
    CHECK(dec.inv_class[static_cast<size_t>(icyc)] == PointClass::Cycle);
    int inf_count = 0;
    for (auto c : dec.fwd_class)
        if (c == PointClass::Inf)
            ++inf_count;
    CHECK(inf_count == 2);
}

TEST_CASE("a twisted involution has no matches within the horizon")
{
    // collineation C o I_s, C from the matrix [[1,2,0],[0,1,1],[1,0,1]]
    // (det 3); generic enough that the twisted orbits wander
    auto z1 = HomPoly::variable(0), z2 = HomPoly::variable(1), z3 = HomPoly::variable(2);
    Triple cf{z1 + z2 * Rat(2), z2 + z3, z1 + z3};
    Triple cb{(z1 - z2 * Rat(2) + z3 * Rat(2)) * make_rat(Int(1), Int(3)),
              (z1 + z2 - z3) * make_rat(Int(1), Int(3)),
              (-z1 + z2 * Rat(2) + z3) * make_rat(Int(1), Int(3))};
    BiratMap coll(cf, cb);
    validate(coll);
    auto m = compose_maps(BiratMap::standard_cremona(), coll);
    auto base = analyze_base_geometry(m);
    auto dec = decompose(m, base, 12);
    CHECK(dec.sigma1 == 0);
    CHECK(dec.any_unresolved);
}

TEST_CASE("determinism and horizon monotonicity")
{
    auto m = load("ex4.json");
    auto base = analyze_base_geometry(m);
    auto d1 = decompose(m, base, 20);
    auto d2 = decompose(m, base, 20);
    REQUIRE(d1.pairs.size() == d2.pairs.size());
    for (size_t i = 0; i < d1.pairs.size(); ++i) {
        CHECK(d1.pairs[i].alpha == d2.pairs[i].alpha);
        CHECK(d1.pairs[i].beta == d2.pairs[i].beta);
        CHECK(d1.pairs[i].m == d2.pairs[i].m);
    }
    // a smaller horizon can only lose the late pair, never change early ones
    auto d0 = decompose(m, base, 0);
    CHECK(d0.sigma1 == 2); // both m=0 pairs visible immediately
    for (const auto& p0 : d0.pairs) {
        bool found = false;
        for (const auto& p : d1.pairs)
            found = found || (p.alpha == p0.alpha && p.beta == p0.beta && p.m == p0.m);
        CHECK(found);
    }
}

TEST_CASE("classes partition the F-point sets")
{
    for (const char* name : {"ex2.json", "ex3.json", "ex4.json", "ex1_generic.json"}) {
        auto m = load(name);
        auto base = analyze_base_geometry(m);
        auto dec = decompose(m, base, 25);
        CHECK(dec.fwd_class.size() == base.fwd.size());
        CHECK(dec.inv_class.size() == base.inv.size());
        size_t int_fwd = 0, int_inv = 0;
        for (auto c : dec.fwd_class)
            if (c == PointClass::Int)
                ++int_fwd;
        for (auto c : dec.inv_class)
            if (c == PointClass::Int)
                ++int_inv;
        CHECK(int_fwd == dec.pairs.size());
        CHECK(int_inv == dec.pairs.size());
    }
}
