#include <catch2/catch_amalgamated.hpp>

#include "cremona/mapfile.hpp"
#include "cremona/oracle.hpp"
#include "cremona/recurrence.hpp"

using namespace cremona;

namespace {

const std::string kFixtures = CREMONA_FIXTURES_DIR;

BiratMap load(const std::string& name)
{
    return MapFile::load(kFixtures + "/" + name).instantiate();
}

DynamicsData analyzed_dynamics(const BiratMap& m, int horizon = 30)
{
    auto base = analyze_base_geometry(m);
    auto dec = decompose(m, base, horizon);
    return DynamicsData::from_analysis(m, base, dec);
}

UniPoly lam_minus(long n) { return UniPoly({-n, 1}); }

std::vector<Int> ints(std::initializer_list<long> v)
{
    std::vector<Int> out;
    for (long x : v)
        out.emplace_back(x);
    return out;
}

} // namespace

TEST_CASE("lambda matrix")
{
    SECTION("no pairs: the 1x1 matrix lambda - n")
    {
        DynamicsData d;
        d.n = 4;
        d.sigma1 = 0;
        auto m = build_lambda(d);
        REQUIRE(m.size() == 1);
        CHECK(m[0][0] == lam_minus(4));
        auto fwd = forward_d(d, 5);
        CHECK(fwd.d == ints({1, 4, 16, 64, 256, 1024}));
    }
    SECTION("cubic example data gives the published determinant")
    {
        auto d = analyzed_dynamics(load("ex4.json"));
        auto sec = secular(d);
        UniPoly expected = UniPoly({-1, 1}) * UniPoly({-1, 1}) * UniPoly({-1, -1, -1, 1});
        CHECK(sec.char_poly == expected);
        CHECK(sec.order == 5);
    }
    SECTION("canonical quadratic data with equal orbit lengths reduces")
    {
        auto d = DynamicsData::canonical_quadratic({2, 2, 2});
        auto grouped = build_lambda_grouped(d);
        REQUIRE(grouped);
        UniPoly det = unipoly_det(*grouped);
        UniPoly set8 = UniPoly({-1, 1}).pow(3) * UniPoly({1, 1});
        CHECK(det == set8);
        // the reduced polynomial divides the raw determinant
        UniPoly raw = unipoly_det(build_lambda(d));
        CHECK(raw.degree() == d.order());
        CHECK(det.divides(raw));
    }
}

TEST_CASE("secular equations of the appendix maps")
{
    SECTION("conjugated first map (generic parameters): lambda (lambda-1)^2")
    {
        auto d = analyzed_dynamics(load("ex1_generic.json"));
        CHECK(secular(d).char_poly == UniPoly({0, 1, -2, 1}));
    }
    SECTION("second map: lambda^3 - 2 lambda^2 + 1")
    {
        auto d = analyzed_dynamics(load("ex2.json"));
        CHECK(secular(d).char_poly == UniPoly({1, 0, -2, 1}));
    }
    SECTION("third map has full order 10, minimal order 4")
    {
        auto d = analyzed_dynamics(load("ex3.json"));
        auto sec = secular(d);
        CHECK(sec.order == 10);
        auto fwd = forward_d(d, 40);
        auto minimal = minimal_recurrence(fwd.d);
        CHECK(minimal.char_poly == UniPoly({-1, 2, 0, -2, 1}));
        CHECK(sec.char_poly.divide_exact(minimal.char_poly).has_value());
        CHECK(recurrence_check(sec, fwd.d).first);
    }
}

TEST_CASE("forward recursion")
{
    SECTION("involution data alternates")
    {
        auto d = analyzed_dynamics(BiratMap::standard_cremona());
        auto fwd = forward_d(d, 9);
        CHECK(fwd.d == ints({1, 2, 1, 2, 1, 2, 1, 2, 1, 2}));
    }
    SECTION("third map tracks its closed form")
    {
        auto d = analyzed_dynamics(load("ex3.json"));
        auto fwd = forward_d(d, 12);
        // 3/4 k^2 - 1/8 (-1)^k + 9/8
        for (int k = 0; k <= 12; ++k) {
            Rat expect = make_rat(Int(3), Int(4)) * Rat(k) * Rat(k) -
                         make_rat(Int(k % 2 == 0 ? 1 : -1), Int(8)) +
                         make_rat(Int(9), Int(8));
            CHECK(Rat(fwd.d[static_cast<size_t>(k)]) == expect);
        }
    }
    SECTION("cubic example: d(2) = 7 by the difference equation")
    {
        auto d = analyzed_dynamics(load("ex4.json"));
        auto fwd = forward_d(d, 4);
        CHECK(fwd.d == ints({1, 3, 7, 13, 25}));
    }
}

TEST_CASE("recurrence check")
{
    Recurrence ex2{UniPoly({1, 0, -2, 1}), 3};
    SECTION("the published degree table satisfies the second map's recurrence")
    {
        CHECK(recurrence_check(ex2, ints({1, 2, 4, 7, 12, 20, 33})).first);
    }
    SECTION("an arithmetic progression satisfies (lambda-1)^2")
    {
        Recurrence r{UniPoly({1, -2, 1}), 2};
        CHECK(recurrence_check(r, ints({1, 3, 5, 7, 9})).first);
    }
    SECTION("a shifted coefficient fails at the first window")
    {
        Recurrence wrong{UniPoly({1, -2, 0, 1}), 3};
        auto [ok, at] = recurrence_check(wrong, ints({1, 2, 4, 7, 12, 20, 33}));
        CHECK_FALSE(ok);
        CHECK(at == 0);
    }
}

TEST_CASE("minimal recurrence")
{
    SECTION("order four from the third map's degree sequence")
    {
        auto r = minimal_recurrence(ints({1, 2, 4, 8, 13, 20, 28, 38, 49, 62}));
        CHECK(r.char_poly == UniPoly({-1, 2, 0, -2, 1}));
        CHECK(r.order == 4);
    }
    SECTION("pure powers give order one")
    {
        auto r = minimal_recurrence(ints({1, 3, 9, 27, 81, 243}));
        CHECK(r.char_poly == UniPoly({-3, 1}));
    }
    SECTION("the period-two sequence is annihilated by lambda^2 - 1")
    {
        auto r = minimal_recurrence(ints({1, 2, 1, 2, 1, 2, 1, 2}));
        CHECK(r.char_poly == UniPoly({-1, 0, 1}));
    }
    SECTION("short sequences are refused")
    {
        CHECK_THROWS_MATCHES(minimal_recurrence(ints({1, 2, 4, 8, 13, 20, 28})), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.kind() == ErrorKind::InsufficientData;
                             }));
    }
}

TEST_CASE("growth classification")
{
    SECTION("tribonacci times (lambda-1)^2 is exponential")
    {
        UniPoly p = UniPoly({-1, 1}).pow(2) * UniPoly({-1, -1, -1, 1});
        auto g = classify_growth(p);
        CHECK(g.cls == GrowthClass::Exponential);
        CHECK(Rat(g.root_lo).get_d() >= 1.839286);
        CHECK(Rat(g.root_hi).get_d() <= 1.839288);
        CHECK(g.entropy == Catch::Approx(0.609378).margin(1e-5));
        CHECK(g.residual == UniPoly({-1, -1, -1, 1}));
    }
    SECTION("the set-4 product is polynomial of degree 4")
    {
        UniPoly p = UniPoly({-1, 1}).pow(3) * UniPoly({1, 1}) *
                    (UniPoly({-1, 0, 0, 0, 0, 1})) * (UniPoly({-1, 0, 0, 1}));
        auto g = classify_growth(p);
        CHECK(g.cls == GrowthClass::Polynomial);
        CHECK(g.poly_degree == 4); // root 1 has multiplicity 5
        CHECK(g.residual.degree() == 0);
    }
    SECTION("lambda - n is exponential with entropy log n")
    {
        for (long n : {2, 3, 5}) {
            auto g = classify_growth(lam_minus(n));
            CHECK(g.cls == GrowthClass::Exponential);
            CHECK(g.entropy == Catch::Approx(std::log(static_cast<double>(n))).margin(1e-9));
        }
    }
    SECTION("pure delay factors are stripped and reported")
    {
        UniPoly p = UniPoly({0, 0, -1, 1}); // lambda^2 (lambda - 1)
        auto g = classify_growth(p);
        CHECK(g.delay == 2);
        CHECK(g.cls == GrowthClass::Bounded);
    }
}

TEST_CASE("closed forms")
{
    SECTION("double root at one with initial values 1, 3")
    {
        Recurrence r{UniPoly({1, -2, 1}), 2};
        auto c = closed_form(r, ints({1, 3, 5, 7, 9}));
        REQUIRE(c.exact);
        for (long k = 0; k <= 20; ++k)
            CHECK(c.eval(k) == Rat(2 * k + 1));
    }
    SECTION("the third map's closed form")
    {
        Recurrence r{UniPoly({-1, 2, 0, -2, 1}), 4};
        auto c = closed_form(r, ints({1, 2, 4, 8, 13, 20, 28, 38}));
        REQUIRE(c.exact);
        for (long k = 0; k <= 30; ++k) {
            Rat expect = make_rat(Int(3), Int(4)) * Rat(k) * Rat(k) -
                         make_rat(Int(k % 2 == 0 ? 1 : -1), Int(8)) + make_rat(Int(9), Int(8));
            CHECK(c.eval(k) == expect);
        }
    }
    SECTION("irrational spectra come back as certified factors")
    {
        Recurrence r{UniPoly({1, 0, -2, 1}), 3}; // (L-1)(L^2-L-1)
        auto c = closed_form(r, ints({1, 2, 4, 7, 12, 20}));
        CHECK_FALSE(c.exact);
        CHECK(c.growth.cls == GrowthClass::Exponential);
        CHECK(!c.description.empty());
    }
    SECTION("delay factors shift the fit window")
    {
        Recurrence r{UniPoly({0, 1, -2, 1}), 3}; // lambda (lambda-1)^2
        auto c = closed_form(r, ints({1, 3, 4, 5, 6, 7, 8}));
        REQUIRE(c.exact);
        CHECK(c.delay == 1);
        for (long k = 1; k <= 6; ++k)
            CHECK(c.eval(k) == Rat(k + 2));
    }
}

TEST_CASE("candidate enumeration reproduces the published families")
{
    auto rows = enumerate_candidates(3, 6);
    auto find = [&](std::vector<int> m) -> const Candidate& {
        for (const auto& c : rows)
            if (c.m_set == m)
                return c;
        FAIL("row not found");
        return rows.front();
    };
    auto cyc = [](int n) { return cyclotomic(n); };

    SECTION("set 1: m = (0, m2, m3), distinct and nonzero")
    {
        for (int m2 = 1; m2 <= 6; ++m2)
            for (int m3 = m2 + 1; m3 <= 6; ++m3) {
                UniPoly expected = UniPoly({-1, 1}).pow(2) *
                                   (UniPoly::monomial(Int(1), m2 + m3 + 2) - UniPoly::one());
                CHECK(find({0, m2, m3}).char_poly == expected);
            }
    }
    SECTION("set 2: (1,2,3)")
    {
        UniPoly num = UniPoly({-1, 1}).pow(3) * UniPoly({1, 1}) *
                      (UniPoly::monomial(Int(1), 9) + UniPoly::one());
        auto q = num.divide_exact(UniPoly::monomial(Int(1), 3) + UniPoly::one());
        REQUIRE(q);
        CHECK(find({1, 2, 3}).char_poly == *q);
    }
    SECTION("set 3: (1,2,4)")
    {
        UniPoly num = UniPoly({-1, 1}).pow(3) * (UniPoly::monomial(Int(1), 15) + UniPoly::one()) *
                      UniPoly({1, 1});
        auto q1 = num.divide_exact(UniPoly::monomial(Int(1), 5) + UniPoly::one());
        REQUIRE(q1);
        auto q2 = q1->divide_exact(UniPoly::monomial(Int(1), 3) + UniPoly::one());
        REQUIRE(q2);
        CHECK(find({1, 2, 4}).char_poly == *q2);
    }
    SECTION("set 4: (1,2,5)")
    {
        UniPoly expected = UniPoly({-1, 1}).pow(3) * UniPoly({1, 1}) *
                           (UniPoly::monomial(Int(1), 5) - UniPoly::one()) *
                           (UniPoly::monomial(Int(1), 3) - UniPoly::one());
        CHECK(find({1, 2, 5}).char_poly == expected);
    }
    SECTION("set 5: (0, m, m)")
    {
        for (int m = 1; m <= 6; ++m) {
            UniPoly expected = UniPoly({-1, 1}).pow(2) *
                               (UniPoly::monomial(Int(1), m + 1) + UniPoly::one());
            CHECK(find({0, m, m}).char_poly == expected);
        }
    }
    SECTION("set 6: (1,2,2)")
    {
        UniPoly num = UniPoly({-1, 1}).pow(2) * (UniPoly::monomial(Int(1), 6) + UniPoly::one());
        auto q = num.divide_exact(UniPoly::monomial(Int(1), 2) + UniPoly::one());
        REQUIRE(q);
        CHECK(find({1, 2, 2}).char_poly == *q);
    }
    SECTION("set 7: (1,1,1)")
    {
        UniPoly expected = UniPoly({-1, 1}) * cyc(6);
        CHECK(find({1, 1, 1}).char_poly == expected);
    }
    SECTION("set 8: (2,2,2)")
    {
        CHECK(find({2, 2, 2}).char_poly == UniPoly({-1, 1}).pow(3) * UniPoly({1, 1}));
        CHECK(find({2, 2, 2}).growth.cls == GrowthClass::Polynomial);
        CHECK(find({2, 2, 2}).growth.poly_degree == 2);
    }
    SECTION("sigma1 = 0 is the single exponential row")
    {
        auto r0 = enumerate_candidates(0, 3);
        REQUIRE(r0.size() == 1);
        CHECK(r0[0].char_poly == UniPoly({-2, 1}));
        CHECK(r0[0].growth.cls == GrowthClass::Exponential);
    }
}

TEST_CASE("order identity and forward consistency on random data")
{
    GenericRng rng(7171);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<int> m_set;
        int sigma1 = 1 + static_cast<int>(rng.next_u64() % 3);
        for (int j = 0; j < sigma1; ++j)
            m_set.push_back(static_cast<int>(rng.next_u64() % 4));
        std::sort(m_set.begin(), m_set.end());
        // consistent i-data: take the canonical quadratic shape restricted
        // to sigma1 pairs of a triangle configuration
        DynamicsData d;
        d.n = 2;
        d.sigma1 = sigma1;
        for (int j = 0; j < sigma1; ++j) {
            d.pairs.push_back({j, j, m_set[static_cast<size_t>(j)]});
            d.i_fwd.push_back(1);
            d.i_inv.push_back(1);
            std::vector<int> row(static_cast<size_t>(sigma1), 1);
            row[static_cast<size_t>(j)] = 0;
            d.i_cross.push_back(std::move(row));
        }
        auto sec = secular(d);
        CHECK(sec.char_poly.degree() == d.order());
        auto fwd = forward_d(d, 2 * d.order() + 6);
        CHECK(recurrence_check(sec, fwd.d).first);
    }
}

TEST_CASE("oracle and forward recursion agree on the published maps")
{
    struct Case {
        const char* file;
        int budget;
    };
    for (const Case& c : {Case{"ex2.json", 90}, Case{"ex3.json", 90}}) {
        auto m = load(c.file);
        auto d = analyzed_dynamics(m);
        auto fwd = forward_d(d, 40);
        auto oracle = iterate_degrees_capped(m, 40, c.budget);
        REQUIRE(oracle.values.size() >= 6);
        for (size_t k = 0; k < oracle.values.size(); ++k)
            CHECK(Int(oracle.values[k]) == fwd.d[k]);
    }
}
