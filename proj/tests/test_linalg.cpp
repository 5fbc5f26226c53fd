#include <catch2/catch_amalgamated.hpp>

#include <optional>

#include "pcsilab/gf.hpp"
#include "pcsilab/linalg.hpp"
#include "pcsilab/rng.hpp"

using namespace pcsilab;

namespace {

// Cofactor-expansion determinant, independent of the elimination path.
Fe det_oracle(const Field& f, const Matrix& a) {
    const std::size_t n = a.rows;
    if (n == 1) return a.at(0, 0);
    Fe acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a.at(0, j) == 0) continue;
        Matrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = a.at(r, c);
            }
        }
        Fe term = f.mul(a.at(0, j), det_oracle(f, minor));
        acc = (j % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
    }
    return acc;
}

// Adjugate-based inverse for small matrices.
std::optional<Matrix> inverse_oracle(const Field& f, const Matrix& a) {
    Fe d = det_oracle(f, a);
    if (d == 0) return std::nullopt;
    const std::size_t n = a.rows;
    Matrix inv(n, n);
    Fe dinv = f.inv(d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix minor(n == 1 ? 1 : n - 1, n == 1 ? 1 : n - 1);
            if (n == 1) {
                inv.at(0, 0) = dinv;
                continue;
            }
            std::size_t rr = 0;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::size_t cc = 0;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor.at(rr, cc++) = a.at(r, c);
                }
                ++rr;
            }
            Fe cof = det_oracle(f, minor);
            if ((i + j) % 2 == 1) cof = f.neg(cof);
            inv.at(i, j) = f.mul(dinv, cof);
        }
    return inv;
}

}  // namespace

TEST_CASE("identity systems return the right-hand side") {
    Field f5(5, 1);
    Matrix b(4, 2);
    for (std::size_t i = 0; i < b.a.size(); ++i) b.a[i] = static_cast<Fe>(i % 5);
    auto r = solve_linear(f5, Matrix::identity(4), b);
    REQUIRE_FALSE(r.singular);
    CHECK(r.x == b);
    CHECK(r.det == f5.one());
    CHECK(r.rank == 4);
}

namespace {

// Top rows [l1 I | ... | lM I]; below, per column block m, the identity with
// a zero column inserted at position m.
Matrix witness_block_system(std::uint32_t M, const std::vector<Fe>& lam) {
    Matrix g(M * M, M * M);
    for (std::uint32_t r = 0; r < M; ++r)
        for (std::uint32_t j = 0; j < M; ++j) g.at(r, j * M + r) = lam[j];
    for (std::uint32_t m = 0; m < M; ++m)
        for (std::uint32_t i = 0; i < M - 1; ++i) {
            std::uint32_t col = i < m ? i : i + 1;  // skip column m
            g.at(M + m * (M - 1) + i, m * M + col) = 1;
        }
    return g;
}

}  // namespace

TEST_CASE("block system with inserted-zero-column identities has determinant +-l1*l2*l3") {
    // The determinant equals the coefficient product up to the permutation
    // sign of the row arrangement: exactly the product in characteristic 2,
    // possibly its negative otherwise. Either way it vanishes nowhere.
    Field f3(3, 1);
    for (std::vector<Fe> lam :
         {std::vector<Fe>{2, 1, 2}, {1, 1, 1}, {2, 2, 2}, {1, 2, 1}}) {
        Matrix g = witness_block_system(3, lam);
        Fe prod = f3.mul(f3.mul(lam[0], lam[1]), lam[2]);
        Fe d = mat_det(f3, g);
        CHECK(d == det_oracle(f3, g));
        CHECK(d != 0);
        CHECK((d == prod || d == f3.neg(prod)));
    }
    // Characteristic 2: the sign is immaterial and equality is exact.
    Field f4(2, 2);
    for (std::vector<Fe> lam : {std::vector<Fe>{2, 3, 1}, {3, 3, 3}, {1, 2, 3}}) {
        Matrix g = witness_block_system(3, lam);
        Fe prod = f4.mul(f4.mul(lam[0], lam[1]), lam[2]);
        CHECK(mat_det(f4, g) == prod);
        CHECK(prod != 0);
    }
    // M = 2 arrangement is an even permutation, so the product is exact.
    Field f5(5, 1);
    for (std::vector<Fe> lam : {std::vector<Fe>{2, 3}, {4, 4}, {1, 3}}) {
        Matrix g = witness_block_system(2, lam);
        CHECK(mat_det(f5, g) == f5.mul(lam[0], lam[1]));
    }
}

TEST_CASE("random invertible 4x4 over F_3 solves and multiplies back") {
    Field f3(3, 1);
    SeededSource rng(11);
    int solved = 0;
    while (solved < 20) {
        Matrix a(4, 4);
        for (auto& v : a.a) v = static_cast<Fe>(rng.uniform(3));
        Matrix b(4, 1);
        for (auto& v : b.a) v = static_cast<Fe>(rng.uniform(3));
        auto r = solve_linear(f3, a, b);
        if (r.singular) continue;
        CHECK(mat_mul(f3, a, r.x) == b);
        ++solved;
    }
}

TEST_CASE("elimination agrees with the adjugate oracle on all small matrices over F_3") {
    Field f3(3, 1);
    // Every 2x2.
    for (std::uint32_t code = 0; code < 81; ++code) {
        Matrix a(2, 2);
        std::uint32_t v = code;
        for (auto& x : a.a) { x = v % 3; v /= 3; }
        auto expect = inverse_oracle(f3, a);
        auto got = mat_inverse(f3, a);
        REQUIRE(expect.has_value() == got.has_value());
        if (expect) CHECK(*expect == *got);
        CHECK(mat_det(f3, a) == det_oracle(f3, a));
    }
    // Every 3x3.
    for (std::uint32_t code = 0; code < 19683; ++code) {
        Matrix a(3, 3);
        std::uint32_t v = code;
        for (auto& x : a.a) { x = v % 3; v /= 3; }
        auto expect = inverse_oracle(f3, a);
        auto got = mat_inverse(f3, a);
        REQUIRE(expect.has_value() == got.has_value());
        if (expect) REQUIRE(*expect == *got);
        REQUIRE(mat_det(f3, a) == det_oracle(f3, a));
    }
}

TEST_CASE("inconsistent overdetermined systems report singular") {
    Field f2(2, 1);
    Matrix a(3, 2);
    a.at(0, 0) = 1;
    a.at(1, 1) = 1;
    a.at(2, 0) = 1;
    a.at(2, 1) = 1;
    Matrix b(3, 1);
    b.at(0, 0) = 1;
    b.at(1, 0) = 1;
    b.at(2, 0) = 1;  // 1 + 1 != 1 over F_2
    CHECK(solve_linear(f2, a, b).singular);
    b.at(2, 0) = 0;
    auto r = solve_linear(f2, a, b);
    REQUIRE_FALSE(r.singular);
    CHECK(r.x.at(0, 0) == 1);
    CHECK(r.x.at(1, 0) == 1);
}

TEST_CASE("rank on rectangular matrices") {
    Field f2(2, 1);
    Matrix a(2, 3);
    a.at(0, 0) = 1;
    a.at(0, 1) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 1;  // duplicate row
    CHECK(mat_rank(f2, a) == 1);
    a.at(1, 2) = 1;
    CHECK(mat_rank(f2, a) == 2);
}
