#include "doctest.h"
#include "wermerlab/profile.hpp"
#include "wermerlab/serialize.hpp"

#include <cmath>

using namespace wermerlab;

TEST_CASE("rho_1 induction on the hand-worked sequence c = (0.5, 1, 3)") {
    const ConvexProfile p = build_rho1({0.5, 1.0, 3.0}, 2);
    // rho_1 = c(1) = 1 on [0,1]
    CHECK(rho1_eval(p, 0.0) == 1.0);
    CHECK(rho1_eval(p, 1.0) == 1.0);
    // on (1,2] the second case applies (0*2 + 1 < 3): chord to c(2) = 3
    CHECK(rho1_eval(p, 1.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rho1_eval(p, 2.0) == 3.0);
    CHECK(p.knots == std::vector<double>{1.0, 1.0, 3.0});
}

TEST_CASE("case 1 keeps the affine piece when it already clears c(n+1)") {
    // after the chord to c(2) = 1.2 the slope is 0.2; 0.2*3 + 0.8 = 1.4 >= c(3)
    const ConvexProfile p = build_rho1({0.5, 1.0, 1.2, 1.4}, 3);
    CHECK(p.slopes[1] == doctest::Approx(0.2));
    CHECK(p.slopes[2] == doctest::Approx(0.2));  // case 1: unchanged
    CHECK(p.intercepts[2] == doctest::Approx(p.intercepts[1]));
    // once case 1 triggers forever the tail is globally affine
    CHECK(rho1_eval(p, 3.0) == doctest::Approx(1.4));
}

TEST_CASE("build_rho1 rejects non-increasing sequences") {
    CHECK_THROWS_AS(build_rho1({1.0, 1.0, 2.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_rho1({1.0, -2.0, 3.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_rho1({1.0, 2.0}, 5), std::invalid_argument);
}

TEST_CASE("mollified rho: exactness on affine windows and the quadratic floor") {
    const std::vector<double> c{0.5, 1.0, 3.0, 6.0, 10.0};
    const ConvexProfile p = build_rho1(c, 4);
    // rho~_1 is constant (= 1) on [-1/4, 1/4], so rho(0) = c(1) + 0
    CHECK(rho_eval(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // affine window away from kinks: convolution reproduces rho_1 exactly
    CHECK(rho_eval(p, 1.5) - 1.5 * 1.5 == doctest::Approx(rho1_eval(p, 1.5)).epsilon(1e-12));
    // rho >= t^2 everywhere (the convolved part is nonnegative)
    for (double t = 0.0; t <= 4.0; t += 0.03) CHECK(rho_eval(p, t) >= t * t);
    // Jensen: mollification of the convex symmetrization dominates rho_1
    for (double t = 0.0; t <= 3.5; t += 0.05)
        CHECK(rho_eval(p, t) + 1e-12 >= rho1_eval(p, t) + (p.quadratic ? t * t : 0.0));
}

TEST_CASE("rho'(0) = 0 within finite differences") {
    const ConvexProfile p = build_rho1({0.5, 1.0, 3.0, 6.0}, 3);
    const double h = 1e-6;
    // even extension: central difference with rho(-h) = rho(h) is exactly 0;
    // the one-sided slope must also vanish to finite-difference accuracy
    const double onesided = (rho_eval(p, h) - rho_eval(p, 0.0)) / h;
    CHECK(std::abs(onesided) < 1e-5);
    const double central = (rho_eval(p, h) - rho_eval(p, std::abs(-h))) / (2 * h);
    CHECK(std::abs(central) < 1e-6);
}

TEST_CASE("convexity: second differences on a 1e-2 grid") {
    const ConvexProfile p = build_rho1({0.5, 1.0, 3.0, 6.0, 10.0, 15.0}, 5);
    const double h = 1e-2;
    for (double t = h; t <= 5.0 - h; t += h) {
        const double d2 = rho_eval(p, t - h) - 2.0 * rho_eval(p, t) + rho_eval(p, t + h);
        CHECK(d2 >= -1e-9);
        CHECK(d2 >= 2.0 * (1.0 - 1e-6) * h * h - 1e-12);  // strict floor from t^2
    }
}

TEST_CASE("rho_check validates the two displayed inequalities") {
    const std::vector<double> c{0.5, 1.0, 3.0, 6.0, 10.0, 15.0};
    // the lemma conclusion rho > c(n) on (n, n+1] holds for the direct build
    const ConvexProfile p = build_rho1(c, 5);
    const RhoCheckReport lemma_only = rho_check(p, c, 4, 0);
    CHECK(lemma_only.ok);
    CHECK(lemma_only.worst_lemma_margin >= 1e-12);

    // the conv-eq variant rho >= c(n) on [n-1, n+2] needs the shifted build
    // C(j) = c(j+2)
    const std::vector<double> shifted{c[2], c[3], c[4], c[5]};
    const ConvexProfile ps = build_rho1(shifted, 3);
    const RhoCheckReport rep = rho_check(ps, c, 2, 2);
    CHECK(rep.ok);
    CHECK(rep.worst_conveq_margin >= 0.0);

    SUBCASE("quadratic term removed still passes") {
        ConvexProfile flat = ps;
        flat.quadratic = false;
        CHECK(rho_check(flat, c, 2, 2).ok);
    }
    SUBCASE("corrupted piece produces a violation witness") {
        ConvexProfile bad = p;
        bad.slopes[3] = -50.0;
        bad.intercepts[3] = 0.0;
        const RhoCheckReport r = rho_check(bad, c, 4, 0);
        CHECK_FALSE(r.ok);
        CHECK(r.lemma_witness_n >= 0);
    }
}

TEST_CASE("profile JSON round-trip") {
    const ConvexProfile p = build_rho1({0.5, 1.0, 3.0, 6.0}, 3);
    const ConvexProfile q = profile_from_json(to_json(p));
    CHECK(q.slopes == p.slopes);
    CHECK(q.intercepts == p.intercepts);
    CHECK(q.knots == p.knots);
    CHECK(q.quadratic == p.quadratic);
    for (double t = 0; t < 3.0; t += 0.1) CHECK(rho_eval(q, t) == rho_eval(p, t));
}

TEST_CASE("profile validation catches inconsistencies") {
    ConvexProfile p = build_rho1({0.5, 1.0, 3.0}, 2);
    validate_profile(p);
    p.knots[2] = 99.0;
    CHECK_THROWS_AS(validate_profile(p), std::invalid_argument);
}

TEST_CASE("zero profile surrogate") {
    const ConvexProfile z = zero_profile();
    validate_profile(z);
    CHECK(rho_eval(z, 0.0) == 0.0);
    CHECK(rho_eval(z, 7.3) == 0.0);
}
