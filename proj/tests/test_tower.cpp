#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcsilab/gf.hpp"
#include "pcsilab/tower.hpp"

using namespace pcsilab;

TEST_CASE("tower over F_4 matches the published representation") {
    Field f4(2, 2);
    Tower t(f4);
    CHECK(t.s() == 2);
    CHECK(t.g_a1() == 1);
    CHECK(t.g_a0() == 1);  // x^2 + x + 1

    // Elements 0, 1, x, 1+x  (encoded 0, 1, 2, 3).
    Mat2 m0 = t.mat_rep(0), m1 = t.mat_rep(1), mx = t.mat_rep(2), mx1 = t.mat_rep(3);
    CHECK(m0 == Mat2{{{0, 0}, {0, 0}}});
    CHECK(m1 == Mat2{{{1, 0}, {0, 1}}});
    CHECK(mx == Mat2{{{0, 1}, {1, 1}}});
    CHECK(mx1 == Mat2{{{1, 1}, {1, 0}}});
}

TEST_CASE("tower over F_9 picks the first irreducible quadratic") {
    Field f9(3, 2);
    Tower t(f9);
    CHECK(t.s() == 3);
    // Independent search in (a1, a0) order with root-test irreducibility.
    Field f3(3, 1);
    std::uint32_t ea1 = 0, ea0 = 0;
    bool found = false;
    for (std::uint32_t a1 = 0; a1 < 3 && !found; ++a1)
        for (std::uint32_t a0 = 0; a0 < 3 && !found; ++a0) {
            bool has_root = false;
            for (std::uint32_t x = 0; x < 3; ++x)
                if ((x * x + a1 * x + a0) % 3 == 0) has_root = true;
            if (!has_root) { ea1 = a1; ea0 = a0; found = true; }
        }
    REQUIRE(found);
    CHECK(t.g_a1() == ea1);
    CHECK(t.g_a0() == ea0);
    CHECK(t.g_a0() != 0);
}

TEST_CASE("odd extension degree is rejected") {
    Field f8(2, 3);
    CHECK_THROWS_AS(Tower(f8), std::invalid_argument);
}

TEST_CASE("vector and matrix representations respect multiplication") {
    for (auto [p, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 2}, {3, 2}, {5, 2}}) {
        Field fq(p, n);
        Tower t(fq);
        const Field& fs = t.fs();
        for (Fe b = 0; b < fq.q(); ++b) {
            Mat2 mb = t.mat_rep(b);
            for (Fe c = 0; c < fq.q(); ++c) {
                Vec2 vc = t.vec_rep(c);
                Vec2 expect = t.vec_rep(fq.mul(b, c));
                REQUIRE(mat2_vec(fs, mb, vc) == expect);
            }
        }
    }
}

TEST_CASE("representation round-trips and linearity") {
    Field f25(5, 2);
    Tower t(f25);
    for (Fe c = 0; c < 25; ++c) CHECK(t.from_vec_rep(t.vec_rep(c)) == c);
    CHECK(t.vec_rep(0) == Vec2{{0, 0}});
    CHECK(t.mat_rep(1) == Mat2{{{1, 0}, {0, 1}}});
    const Field& fs = t.fs();
    for (Fe a = 0; a < 25; ++a)
        for (Fe b = 0; b < 25; ++b) {
            Vec2 va = t.vec_rep(a), vb = t.vec_rep(b), vs = t.vec_rep(f25.add(a, b));
            CHECK(fs.add(va.v[0], vb.v[0]) == vs.v[0]);
            CHECK(fs.add(va.v[1], vb.v[1]) == vs.v[1]);
        }
}

TEST_CASE("each matrix row is a bijection onto nonzero row vectors") {
    for (auto [p, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 2}, {3, 2}, {5, 2}}) {
        Field fq(p, n);
        Tower t(fq);
        const std::uint32_t s = t.s();
        std::set<std::pair<Fe, Fe>> rows1, rows2;
        for (Fe c = 1; c < fq.q(); ++c) {
            Mat2 m = t.mat_rep(c);
            rows1.insert({m.m[0][0], m.m[0][1]});
            rows2.insert({m.m[1][0], m.m[1][1]});
            CHECK((m.m[0][0] != 0 || m.m[0][1] != 0));
            CHECK((m.m[1][0] != 0 || m.m[1][1] != 0));
        }
        CHECK(rows1.size() == std::size_t(s) * s - 1);
        CHECK(rows2.size() == std::size_t(s) * s - 1);
    }
}

TEST_CASE("matrix representation invertible exactly off zero") {
    Field f9(3, 2);
    Tower t(f9);
    const Field& fs = t.fs();
    CHECK(mat2_det(fs, t.mat_rep(0)) == 0);
    for (Fe c = 1; c < 9; ++c) CHECK(mat2_det(fs, t.mat_rep(c)) != 0);
}

TEST_CASE("tower works for a degree-4 base") {
    // q = 16 = (2^2)^2: base field is F_4.
    Field f16(2, 4);
    Tower t(f16);
    CHECK(t.s() == 4);
    const Field& fs = t.fs();
    for (Fe b = 0; b < 16; ++b)
        for (Fe c = 0; c < 16; ++c)
            REQUIRE(mat2_vec(fs, t.mat_rep(b), t.vec_rep(c)) == t.vec_rep(f16.mul(b, c)));
}
