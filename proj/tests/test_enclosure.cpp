#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "illum/enclosure.hpp"
#include "illum/special.hpp"
#include "oracle.hpp"

using namespace illum;

TEST_CASE("arith: exact integer sums and the zero annihilator", "[enclosure]") {
    const Enclosure s = Enclosure::point(1) + Enclosure::point(2);
    CHECK(s.is_point());
    CHECK(mpfr_cmp_si(s.lo(), 3) == 0);

    const Enclosure ab = Enclosure::decimal("-1.25") + Enclosure::decimal("0.1");  // arbitrary [a, b]
    const Enclosure ab_hull = Enclosure::hull(Enclosure::decimal("-1.25"), Enclosure::decimal("0.1"));
    const Enclosure z = Enclosure::point(0) * ab_hull;
    CHECK(z.is_point());
    CHECK(mpfr_zero_p(z.lo()));
    CHECK(mpfr_signbit(z.lo()) == 0);
    (void)ab;
}

TEST_CASE("arith: [1,2] / [2,4] encloses [1/4, 1]", "[enclosure]") {
    const Enclosure x = Enclosure::hull(Enclosure::point(1), Enclosure::point(2));
    const Enclosure y = Enclosure::hull(Enclosure::point(2), Enclosure::point(4));
    const Enclosure q = x / y;
    CHECK(q.contains(mpq_class(1, 4)));
    CHECK(q.contains(mpq_class(1)));
    // endpoint case analysis: 1/4 and 1 are exact, so the result is tight
    CHECK(mpfr_cmp_d(q.lo(), 0.25) == 0);
    CHECK(mpfr_cmp_d(q.hi(), 1.0) == 0);
}

TEST_CASE("arith: division by an enclosure containing zero is a domain error", "[enclosure]") {
    const Enclosure y = Enclosure::hull(Enclosure::point(-1), Enclosure::point(1));
    CHECK_THROWS_AS(Enclosure::point(1) / y, DomainError);
    CHECK_THROWS_AS(Enclosure::point(1) / Enclosure::point(0), DomainError);
}

TEST_CASE("elementary: exact points and domain errors", "[enclosure]") {
    const Enclosure e = illum::exp(Enclosure::point(0));
    CHECK(e.is_point());
    CHECK(mpfr_cmp_si(e.lo(), 1) == 0);
    const Enclosure l = illum::log(Enclosure::point(1));
    CHECK(l.is_point());
    CHECK(mpfr_zero_p(l.lo()));

    CHECK_THROWS_AS(illum::log(Enclosure::point(0)), DomainError);
    CHECK_THROWS_AS(illum::sqrt(Enclosure::point(-1)), DomainError);
    CHECK_THROWS_AS(illum::pow(Enclosure::point(0), Enclosure::point(2)), DomainError);
    CHECK(mpfr_zero_p(illum::sqrt(Enclosure::point(0)).hi()));
}

TEST_CASE("elementary: sqrt(2) is one ulp wide", "[enclosure]") {
    for (unsigned bits : {53u, 128u, 256u}) {
        const Precision p(bits);
        const Enclosure r = illum::sqrt(Enclosure::point(2, p));
        oracle::Value ref(bits * 4);
        mpfr_sqrt_ui(ref.get(), 2, MPFR_RNDN);
        CHECK(r.contains(ref.get()));
        // width < 2^(1 - bits + 2)
        CHECK(r.width_double() < std::ldexp(1.0, 3 - static_cast<int>(bits)));
    }
}

TEST_CASE("elementary: integer and real powers", "[enclosure]") {
    const Enclosure x = Enclosure::hull(Enclosure::point(-2), Enclosure::point(3));
    const Enclosure sq = pow(x, 2);
    CHECK(mpfr_zero_p(sq.lo()));
    CHECK(mpfr_cmp_si(sq.hi(), 9) == 0);
    const Enclosure cube = pow(x, 3);
    CHECK(mpfr_cmp_si(cube.lo(), -8) == 0);
    CHECK(mpfr_cmp_si(cube.hi(), 27) == 0);
    const Enclosure inv = pow(Enclosure::point(4), -2);
    CHECK(inv.contains(mpq_class(1, 16)));
    const Enclosure r = pow(Enclosure::point(2), Enclosure::decimal("0.5"));
    oracle::Value ref(512);
    mpfr_sqrt_ui(ref.get(), 2, MPFR_RNDN);
    CHECK(r.contains(ref.get()));
}

TEST_CASE("pi: contains pi and nests under refinement", "[enclosure]") {
    oracle::Value ref(1024);
    mpfr_const_pi(ref.get(), MPFR_RNDN);
    const Enclosure p53 = pi_enclosure(Precision(53));
    const Enclosure p64 = pi_enclosure(Precision(64));
    const Enclosure p128 = pi_enclosure(Precision(128));
    CHECK(p53.contains(ref.get()));
    CHECK(p64.contains(ref.get()));
    CHECK(p128.contains(ref.get()));
    CHECK(p64.contains(p128));
    CHECK(p53.contains(p64));
    CHECK(p53.contains_double(3.141592653589793));
    CHECK(p64.width_double() <= std::ldexp(1.0, -64 + 4));
    CHECK(p128.width_double() <= std::ldexp(1.0, -128 + 4));
}

TEST_CASE("erf: fixed points", "[enclosure][erf]") {
    const Enclosure zero = erf_enclosure(Enclosure::point(0));
    CHECK(zero.is_point());
    CHECK(mpfr_zero_p(zero.lo()));

    const Enclosure one = erf_enclosure(Enclosure::point(1));
    CHECK(std::abs(one.mid_double() - 0.8427007929497149) < 1e-16);
    oracle::Value ref(512);
    mpfr_set_ui(ref.get(), 1, MPFR_RNDN);
    mpfr_erf(ref.get(), ref.get(), MPFR_RNDN);
    CHECK(one.contains(ref.get()));
    CHECK(one.width_double() < 1e-36);

    const Enclosure ten = erf_enclosure(Enclosure::point(10));
    CHECK(mpfr_cmp_si(ten.hi(), 1) == 0);
    oracle::Value bound(256);
    mpfr_set_d(bound.get(), 1e-38, MPFR_RNDU);  // erfc(10) ~ 2e-45, below one ulp at 128 bits
    mpfr_ui_sub(bound.get(), 1, bound.get(), MPFR_RNDU);
    CHECK(mpfr_greaterequal_p(ten.lo(), bound.get()));
}

TEST_CASE("erf: odd symmetry mirrors endpoints exactly", "[enclosure][erf]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 12.0);
    for (int t = 0; t < 200; ++t) {
        const double a = dist(rng), b = a + dist(rng) * 1e-3;
        const Enclosure x = Enclosure::hull(Enclosure::from_double(a), Enclosure::from_double(b));
        const Enclosure pos = erf_enclosure(x);
        const Enclosure neg = erf_enclosure(-x);
        REQUIRE(mpfr_equal_p(neg.lo(), Enclosure(-pos).lo()));
        REQUIRE(mpfr_equal_p(neg.hi(), Enclosure(-pos).hi()));
    }
}

TEST_CASE("erf and cdf: clamped to their ranges", "[enclosure][erf]") {
    for (double v : {-40.0, -9.0, -8.0, -1.0, 0.0, 0.5, 7.999, 8.0, 8.001, 30.0, 1e6}) {
        const Enclosure e = erf_enclosure(Enclosure::from_double(v));
        CHECK(mpfr_cmp_si(e.lo(), -1) >= 0);
        CHECK(mpfr_cmp_si(e.hi(), 1) <= 0);
        const Enclosure f = std_normal_cdf(Enclosure::from_double(v));
        CHECK(mpfr_sgn(f.lo()) >= 0);
        CHECK(mpfr_cmp_si(f.hi(), 1) <= 0);
    }
}

TEST_CASE("cdf: F(0) = 1/2, F(1), and F(x) + F(-x) contains 1", "[enclosure][erf]") {
    CHECK(std_normal_cdf(Enclosure::point(0)).contains(mpq_class(1, 2)));
    const Enclosure f1 = std_normal_cdf(Enclosure::point(1));
    CHECK(f1.contains(oracle::normal_cdf(mpq_class(1), 512).get()));
    CHECK(std::abs(f1.mid_double() - 0.8413447460685429) < 1e-16);
    for (double v : {0.1, 0.7, 2.5, 6.0, 11.0, 15.0}) {
        const Enclosure x = Enclosure::from_double(v);
        const Enclosure sum = std_normal_cdf(x) + std_normal_cdf(-x);
        CHECK(sum.contains(mpq_class(1)));
    }
}

TEST_CASE("erf: series and tail branches agree at the switch point", "[enclosure][erf]") {
    // Both sides of z = 8 evaluate to enclosures of nearly the same value.
    oracle::Value below(64), above(64);
    mpfr_set_d(below.get(), 8.0, MPFR_RNDN);
    mpfr_set_d(above.get(), 8.0, MPFR_RNDN);
    mpfr_nextabove(above.get());
    const detail::ErfKernel k(Precision{});
    const Enclosure a = k.at_point(below.get());
    const Enclosure b = k.at_point(above.get());
    CHECK(mpfr_lessequal_p(a.lo(), b.hi()));
    CHECK(b.width_double() < 1e-29);
}

TEST_CASE("precision refinement never loosens module outputs", "[enclosure][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-9.0, 9.0);
    for (int t = 0; t < 300; ++t) {
        const double v = dist(rng);
        const Enclosure lo_p = erf_enclosure(Enclosure::from_double(v), Precision(64));
        const Enclosure hi_p = erf_enclosure(Enclosure::from_double(v), Precision(192));
        REQUIRE(lo_p.intersects(hi_p));
        // Each is certified, so the true value lies in both.
        oracle::Value ref(800);
        mpfr_set_d(ref.get(), v, MPFR_RNDN);
        mpfr_erf(ref.get(), ref.get(), MPFR_RNDN);
        REQUIRE(lo_p.contains(ref.get()));
        REQUIRE(hi_p.contains(ref.get()));
        REQUIRE(hi_p.width_double() <= lo_p.width_double());
    }
}
