#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "illum/hadwiger.hpp"
#include "oracle.hpp"

using namespace illum;

namespace {

// R^(n-j) |B^n| at high precision; R = sqrt(r2).
double ball_quermass_ref(int n, int j, long r2) {
    oracle::Value v = oracle::ball_volume(n);
    oracle::Value r(512);
    mpfr_sqrt_ui(r.get(), static_cast<unsigned long>(r2), MPFR_RNDN);
    mpfr_pow_ui(r.get(), r.get(), static_cast<unsigned long>(n - j), MPFR_RNDN);
    mpfr_mul(v.get(), v.get(), r.get(), MPFR_RNDN);
    return v.to_double();
}

Enclosure ball_quermass(int n, int j, const Enclosure& R) { return pow(R, n - j) * ball_volume(n); }

std::vector<std::string> sources(const QuermassBounds& q) {
    std::vector<std::string> out;
    for (const auto& e : q.W) out.push_back(to_string(e.source));
    return out;
}

}  // namespace

TEST_CASE("bonnesen is exact on balls", "[hadwiger][property]") {
    for (long r2 : {4L, 5L, 49L}) {
        const Enclosure R = illum::sqrt(Enclosure::point(r2));
        for (int n = 2; n <= 10; ++n)
            for (int i = 0; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    for (int k = j + 1; k <= n; ++k) {
                        const Enclosure b =
                            bonnesen(Dimension(n), R, i, j, k, ball_quermass(n, i, R), ball_quermass(n, k, R));
                        const Enclosure target = ball_quermass(n, j, R);
                        INFO("R^2=" << r2 << " n=" << n << " (" << i << "," << j << "," << k << ")");
                        REQUIRE(b.intersects(target));
                        REQUIRE(std::abs(b.mid_double() / ball_quermass_ref(n, j, r2) - 1) < 1e-15);
                        REQUIRE(b.width_double() / b.mid_double() < 1e-20);
                    }
    }
}

TEST_CASE("bonnesen index order and inputs", "[hadwiger]") {
    const Enclosure R = Enclosure::point(5), W = Enclosure::point(1);
    CHECK_THROWS_AS(bonnesen(Dimension(5), R, 2, 2, 4, W, W), ContractError);
    CHECK_THROWS_AS(bonnesen(Dimension(5), R, 3, 2, 4, W, W), ContractError);
    CHECK_THROWS_AS(bonnesen(Dimension(5), R, 1, 2, 6, W, W), ContractError);
    CHECK_THROWS_AS(bonnesen(Dimension(5), Enclosure::point(0), 1, 2, 4, W, W), ContractError);
    CHECK_THROWS_AS(bonnesen(Dimension(5), R, 1, 2, 4, Enclosure::point(-1), W), ContractError);
}

TEST_CASE("john radii", "[hadwiger]") {
    CHECK(john_radius(Dimension(4), BodyClass::symmetric).is_point());
    CHECK(mpfr_cmp_si(john_radius(Dimension(4), BodyClass::symmetric).lo(), 2) == 0);
    oracle::Value root5(512);
    mpfr_sqrt_ui(root5.get(), 5, MPFR_RNDN);
    CHECK(john_radius(Dimension(5), BodyClass::symmetric).contains(root5.get()));
    CHECK(mpfr_cmp_si(john_radius(Dimension(7), BodyClass::general).hi(), 7) == 0);
}

TEST_CASE("symmetric plans and integers", "[hadwiger]") {
    const QuermassBounds q4 = plan_symmetric(Dimension(4));
    CHECK(sources(q4) ==
          std::vector<std::string>{"volume", "volume", "bonnesen(1,3)", "meanwidth", "exact_ball"});
    const QuermassBounds q6 = plan_symmetric(Dimension(6));
    CHECK(sources(q6) == std::vector<std::string>{"volume", "volume", "volume", "bonnesen(2,5)", "bonnesen(2,5)",
                                                  "meanwidth", "exact_ball"});
    const long expected[] = {72, 305, 1292};
    for (int n = 4; n <= 6; ++n) {
        const HadwigerBound hb = john_bound(Dimension(n), BodyClass::symmetric);
        CHECK(hb.integer_bound == expected[n - 4]);
        CHECK(hb.method == "john");
    }
    CHECK_THROWS_AS(plan_symmetric(Dimension(7)), NotAvailableError);
    CHECK_THROWS_AS(john_bound(Dimension(3), BodyClass::symmetric), NotAvailableError);
}

TEST_CASE("general plans", "[hadwiger]") {
    const MeanWidthResult w5 = simplex_mean_width(Dimension(5), QuadratureParams{20.0, 2000});
    CHECK(sources(plan_general(Dimension(5), w5)) == std::vector<std::string>{"volume", "volume", "volume",
                                                                              "bonnesen(2,4)", "meanwidth",
                                                                              "exact_ball"});
    const MeanWidthResult w8 = simplex_mean_width(Dimension(8), QuadratureParams{20.0, 2000});
    CHECK(sources(plan_general(Dimension(8), w8)) ==
          std::vector<std::string>{"volume", "volume", "volume", "volume", "volume", "bonnesen(4,7)",
                                   "bonnesen(4,7)", "meanwidth", "exact_ball"});
    CHECK_THROWS_AS(plan_general(Dimension(4), w5.width), NotAvailableError);
    CHECK_THROWS_AS(plan_general(Dimension(6), w5), ContractError);
}

TEST_CASE("general integers for n = 5, 6 at the default grid", "[hadwiger][slow]") {
    CHECK(john_bound(Dimension(5), BodyClass::general).integer_bound == 933);
    const HadwigerBound h6 = best_bound(Dimension(6), BodyClass::general);
    CHECK(h6.integer_bound == 6137);
    CHECK(h6.method == "john");
    REQUIRE(h6.mean_width);
    CHECK(h6.mean_width->params.subdivisions == QuadratureParams::kDefaultSubdivisions);
}

TEST_CASE("monotone assembly under perturbation", "[hadwiger][property]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> bump(0.0, 0.05);
    for (int n = 4; n <= 6; ++n) {
        const Dimension dim(n);
        const QuermassBounds q = plan_symmetric(dim);
        const ThetaBound theta = theta_best(dim);
        const mpz_class base = assemble(dim, q, theta).integer_bound;
        for (int t = 0; t < 40; ++t) {
            QuermassBounds up = q;
            const auto j = static_cast<std::size_t>(rng() % static_cast<unsigned>(n + 1));
            up.W[j].bound = up.W[j].bound * (1 + Enclosure::from_double(bump(rng)));
            REQUIRE(assemble(dim, up, theta).integer_bound >= base);

            ThetaBound lower = theta;
            mpfr_mul_d(lower.value.hi_mut(), lower.value.hi(), 1 - bump(rng), MPFR_RNDU);
            REQUIRE(assemble(dim, q, lower).integer_bound <= base);
        }
    }
}

TEST_CASE("floor validity", "[hadwiger][property]") {
    for (int n = 3; n <= 14; ++n)
        for (BodyClass cls : {BodyClass::general, BodyClass::symmetric}) {
            const HadwigerBound hb = rogers_bound(Dimension(n), cls);
            REQUIRE(mpfr_cmp_z(hb.real_bound.hi(), hb.integer_bound.get_mpz_t()) >= 0);
            REQUIRE(mpfr_cmp_z(hb.real_bound.hi(), mpz_class(hb.integer_bound + 1).get_mpz_t()) < 0);
        }
    for (int n = 4; n <= 6; ++n) {
        const HadwigerBound hb = john_bound(Dimension(n), BodyClass::symmetric);
        REQUIRE(mpfr_cmp_z(hb.real_bound.hi(), hb.integer_bound.get_mpz_t()) >= 0);
        REQUIRE(mpfr_cmp_z(hb.real_bound.hi(), mpz_class(hb.integer_bound + 1).get_mpz_t()) < 0);
    }
}

TEST_CASE("auto plan never loses to the fixed symmetric plans", "[hadwiger]") {
    for (int n = 4; n <= 6; ++n) {
        const Dimension dim(n);
        const ThetaBound theta = theta_best(dim);
        const QuermassBounds a = auto_plan(dim, BodyClass::symmetric, std::nullopt);
        const QuermassBounds p = plan_symmetric(dim);
        for (int j = 0; j <= n; ++j) REQUIRE(mpfr_lessequal_p(a.W[j].bound.hi(), p.W[j].bound.hi()));
        REQUIRE(assemble(dim, a, theta).integer_bound <= assemble(dim, p, theta).integer_bound);
        REQUIRE(a.iterations >= 1);
    }
    CHECK_THROWS_AS(auto_plan(Dimension(5), BodyClass::general, std::nullopt), ContractError);
}

TEST_CASE("auto plan outside the validated dimensions is flagged", "[hadwiger]") {
    BoundOptions opt;
    opt.plan = PlanKind::automatic;
    const HadwigerBound hb = john_bound(Dimension(7), BodyClass::symmetric, opt);
    CHECK(hb.method == "john-auto");
    CHECK(hb.plan_trace.front().rfind("experimental", 0) == 0);
}

TEST_CASE("best bound selection and externals", "[hadwiger]") {
    const HadwigerBound h3 = best_bound(Dimension(3), BodyClass::general);
    CHECK(h3.integer_bound == 14);
    CHECK(h3.method == "external");
    CHECK(best_bound(Dimension(4), BodyClass::general).integer_bound == 96);
    CHECK(best_bound(Dimension(3), BodyClass::symmetric).integer_bound == 8);
    const HadwigerBound h12 = best_bound(Dimension(12), BodyClass::symmetric);
    CHECK(h12.integer_bound == 248895);
    CHECK(h12.method == "rogers");
    CHECK(h12.plan_trace.front() == "selected method: rogers");
    CHECK_THROWS_AS(external_hadwiger(Dimension(9), BodyClass::general), NotAvailableError);
    CHECK_THROWS_AS(best_bound(Dimension(2), BodyClass::general), NotAvailableError);
    CHECK(compute_bound(Dimension(9), BodyClass::general, BoundMethod::rogers).integer_bound == 2064332);
}
