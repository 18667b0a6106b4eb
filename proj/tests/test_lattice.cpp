#include "doctest.h"
#include "wermerlab/lattice.hpp"

#include <set>

using namespace wermerlab;

TEST_CASE("spiral start matches the anticlockwise enumeration") {
    CHECK(spiral_point(1) == cplx(0, 0));
    CHECK(spiral_point(2) == cplx(1, 0));
    CHECK(spiral_point(3) == cplx(1, 1));
    CHECK(spiral_point(4) == cplx(0, 1));
    CHECK(spiral_point(5) == cplx(-1, 1));
    CHECK(spiral_point(6) == cplx(-1, 0));
    CHECK(spiral_point(7) == cplx(-1, -1));
    CHECK(spiral_point(8) == cplx(0, -1));
    CHECK(spiral_point(9) == cplx(1, -1));
    CHECK(spiral_point(10) == cplx(2, -1));
    CHECK(spiral_point(11) == cplx(2, 0));
    CHECK(spiral_point(13) == cplx(2, 2));
    CHECK(spiral_point(15) == cplx(0, 2));
    CHECK_THROWS_AS(spiral_point(0), std::invalid_argument);
    CHECK_THROWS_AS(spiral_point(-3), std::invalid_argument);
}

TEST_CASE("consecutive spiral points differ by one lattice step") {
    for (std::int64_t n = 1; n < 2000; ++n) {
        const auto [x0, y0] = spiral_coords(n);
        const auto [x1, y1] = spiral_coords(n + 1);
        CHECK(std::llabs(x1 - x0) + std::llabs(y1 - y0) == 1);
    }
}

TEST_CASE("square filling: first (2n+1)^2 points are exactly [-n,n]^2") {
    for (int n = 1; n <= 20; ++n) {
        std::set<lattice_coord> got;
        const std::int64_t count = (2 * n + 1) * (2 * n + 1);
        for (std::int64_t i = 1; i <= count; ++i) got.insert(spiral_coords(i));
        REQUIRE(static_cast<std::int64_t>(got.size()) == count);
        for (std::int64_t x = -n; x <= n; ++x)
            for (std::int64_t y = -n; y <= n; ++y) CHECK(got.count({x, y}) == 1);
    }
}

TEST_CASE("spiral_index inverts spiral_point up to N = 50") {
    const std::int64_t count = 101 * 101;
    for (std::int64_t i = 1; i <= count; ++i) {
        const auto [x, y] = spiral_coords(i);
        CHECK(spiral_index(x, y) == i);
    }
    CHECK(spiral_index(cplx(0, 0)) == 1);
    CHECK(spiral_index(cplx(1, 1)) == 3);
    CHECK(spiral_index(cplx(2, -1)) == 10);
    CHECK_THROWS_AS(spiral_index(cplx(0.5, 0)), std::invalid_argument);
}

TEST_CASE("region membership follows the written inequalities exactly") {
    for (int n = 1; n <= 5; ++n) {
        CHECK(t_frame_contains(n, cplx(n + 0.5, 0.0)));
        CHECK(t_frame_contains(n, cplx(-(n + 0.5), n + 0.5)));
        CHECK_FALSE(t_frame_contains(n, cplx(n + 0.5 + 1e-12, 0.0)));
        CHECK_FALSE(s_frame_contains(n, cplx(0, 0)));
        // frame boundary cases of S_n
        CHECK(s_frame_contains(n, cplx(n + 0.75, 0.0)));
        CHECK(s_frame_contains(n, cplx(n + 0.25, 0.0)));
        CHECK_FALSE(s_frame_contains(n, cplx(n + 0.25 - 1e-12, 0.0)));
        CHECK_FALSE(s_frame_contains(n, cplx(n + 0.75 + 1e-12, 0.0)));
    }
    // the removed inner square of S~_1 is empty
    CHECK(s_tilde_contains(1, cplx(0, 0)));
    CHECK(s_tilde_contains(1, cplx(3, 3)));
    CHECK_FALSE(s_tilde_contains(1, cplx(3.0 + 1e-12, 0)));
    CHECK_FALSE(s_tilde_contains(2, cplx(0, 0)));
    CHECK(s_tilde_contains(2, cplx(1, 0)));

    CHECK(region_contains({RegionKind::T, 2}, cplx(2.5, 1.0)));
    CHECK_THROWS_AS(region_contains({RegionKind::S, 0}, cplx(0, 0)),
                    std::invalid_argument);
}

TEST_CASE("no lattice point lies in any S_n (n <= 20)") {
    for (int n = 1; n <= 20; ++n) {
        const int lim = n + 2;
        for (int x = -lim; x <= lim; ++x)
            for (int y = -lim; y <= lim; ++y)
                CHECK_FALSE(s_frame_contains(n, cplx(x, y)));
    }
}

TEST_CASE("frame nesting T_n in S_n in S~_n on boundary samples") {
    for (int n = 1; n <= 20; ++n) {
        for (int i = 0; i < 64; ++i) {
            const double t = -(n + 0.5) + i * (2.0 * n + 1.0) / 63.0;
            for (const cplx z : {cplx(n + 0.5, t), cplx(-(n + 0.5), t), cplx(t, n + 0.5),
                                 cplx(t, -(n + 0.5))}) {
                CHECK(t_frame_contains(n, z));
                CHECK(s_frame_contains(n, z));
                CHECK(s_tilde_contains(n, z));
            }
        }
        // S_n inner and outer edges stay inside S~_n
        CHECK(s_tilde_contains(n, cplx(n + 0.25, n + 0.25)));
        CHECK(s_tilde_contains(n, cplx(n + 0.75, -(n + 0.75))));
    }
}

TEST_CASE("every unit disk with center sup-norm <= 30 sits in some S~_n") {
    for (double x = -30.0; x <= 30.0; x += 0.75) {
        for (double y = -30.0; y <= 30.0; y += 0.75) {
            const cplx z(x, y);
            const int n = covering_index(z);
            REQUIRE(n >= 1);
            for (int i = 0; i < 48; ++i) {
                const double th = 6.283185307179586 * i / 48;
                CHECK(s_tilde_contains(n, z + cplx(std::cos(th), std::sin(th))));
            }
            CHECK(s_tilde_contains(n, z));
        }
    }
}
