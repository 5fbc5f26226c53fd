#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pcsilab/gf.hpp"

namespace pcsilab {

/// 2x1 vector over the tower base field F_s.
struct Vec2 {
    Fe v[2] = {0, 0};
    bool operator==(const Vec2&) const = default;
};

/// 2x2 matrix over F_s.
struct Mat2 {
    Fe m[2][2] = {{0, 0}, {0, 0}};
    bool operator==(const Mat2&) const = default;

    std::array<Fe, 2> row(int r) const { return {m[r][0], m[r][1]}; }
};

inline Vec2 mat2_vec(const Field& fs, const Mat2& a, const Vec2& x) {
    Vec2 r;
    r.v[0] = fs.add(fs.mul(a.m[0][0], x.v[0]), fs.mul(a.m[0][1], x.v[1]));
    r.v[1] = fs.add(fs.mul(a.m[1][0], x.v[0]), fs.mul(a.m[1][1], x.v[1]));
    return r;
}

inline Fe mat2_det(const Field& fs, const Mat2& a) {
    return fs.sub(fs.mul(a.m[0][0], a.m[1][1]), fs.mul(a.m[0][1], a.m[1][0]));
}

inline Mat2 mat2_inverse(const Field& fs, const Mat2& a) {
    Fe d = mat2_det(fs, a);
    if (d == 0) throw std::domain_error("mat2_inverse: singular");
    Fe di = fs.inv(d);
    Mat2 r;
    r.m[0][0] = fs.mul(di, a.m[1][1]);
    r.m[0][1] = fs.mul(di, fs.neg(a.m[0][1]));
    r.m[1][0] = fs.mul(di, fs.neg(a.m[1][0]));
    r.m[1][1] = fs.mul(di, a.m[0][0]);
    return r;
}

/// Quadratic tower view of F_q with q = s^2: fixes g(x) = x^2 + a1 x + a0
/// irreducible over F_s (smallest (a1, a0) in lexicographic order) and the
/// isomorphism F_q ~ F_s[x]/(g), under which an element c = mu x + gamma gets
/// a 2x1 vector representation [gamma, mu]^T and a 2x2 matrix representation
/// acting on vectors: vec(b*c) = mat(b) * vec(c).
///
/// Immutable after construction; the isomorphism is computed once and cached
/// as a pair of lookup tables.
class Tower {
public:
    explicit Tower(const Field& qfield)
        : fq_(qfield), fs_(make_base(qfield)) {
        const std::uint32_t s = fs_.q();
        find_g();
        build_iso();
        (void)s;
    }

    const Field& fq() const { return fq_; }
    const Field& fs() const { return fs_; }
    std::uint32_t s() const { return fs_.q(); }
    Fe g_a1() const { return a1_; }
    Fe g_a0() const { return a0_; }

    Vec2 vec_rep(Fe c) const {
        std::uint32_t packed = to_pair_[c];
        return Vec2{{static_cast<Fe>(packed % s()), static_cast<Fe>(packed / s())}};
    }

    Fe from_vec_rep(const Vec2& v) const { return from_pair_[v.v[0] + std::size_t(v.v[1]) * s()]; }

    Mat2 mat_rep(Fe c) const {
        Vec2 v = vec_rep(c);
        Fe gamma = v.v[0], mu = v.v[1];
        Mat2 m;
        m.m[0][0] = gamma;
        m.m[0][1] = fs_.neg(fs_.mul(mu, a0_));
        m.m[1][0] = mu;
        m.m[1][1] = fs_.sub(gamma, fs_.mul(mu, a1_));
        return m;
    }

private:
    static Field make_base(const Field& qfield) {
        if (qfield.n() % 2 != 0)
            throw std::invalid_argument("Tower: field order is not an even prime power");
        return Field(qfield.p(), qfield.n() / 2);
    }

    // Multiplication of mu1 x + gamma1 and mu2 x + gamma2 modulo g.
    std::pair<Fe, Fe> pair_mul(Fe g1, Fe m1, Fe g2, Fe m2) const {
        Fe mm = fs_.mul(m1, m2);
        Fe gamma = fs_.sub(fs_.mul(g1, g2), fs_.mul(mm, a0_));
        Fe mu = fs_.sub(fs_.add(fs_.mul(m1, g2), fs_.mul(m2, g1)), fs_.mul(mm, a1_));
        return {gamma, mu};
    }

    void find_g() {
        const std::uint32_t s = fs_.q();
        for (Fe a1 = 0; a1 < s; ++a1) {
            for (Fe a0 = 0; a0 < s; ++a0) {
                bool has_root = false;
                for (Fe x = 0; x < s && !has_root; ++x) {
                    Fe val = fs_.add(fs_.add(fs_.mul(x, x), fs_.mul(a1, x)), a0);
                    if (val == 0) has_root = true;
                }
                if (!has_root) { a1_ = a1; a0_ = a0; return; }
            }
        }
        throw std::logic_error("Tower: no irreducible quadratic over the base field");
    }

    void build_iso() {
        const std::uint32_t s = fs_.q(), q = fq_.q(), n = fq_.n(), p = fq_.p();
        // Root of the F_q modulus inside F_s[x]/(g), scanned in packed order.
        std::uint32_t root = 0;
        bool found = false;
        const auto& mod = fq_.modulus();
        for (std::uint32_t t = 0; t < q && !found; ++t) {
            Fe gamma = t % s, mu = t / s;
            // Horner over coefficients of the modulus (constants from F_p).
            Fe rg = 0, rm = 0;
            for (std::size_t i = mod.size(); i-- > 0;) {
                auto [pg, pm] = pair_mul(rg, rm, gamma, mu);
                rg = fs_.add(pg, static_cast<Fe>(mod[i] % p));
                rm = pm;
            }
            if (rg == 0 && rm == 0) { root = t; found = true; }
        }
        if (!found) throw std::logic_error("Tower: isomorphism root not found");

        // Images of the F_q basis 1, y, y^2, ..., y^{n-1}.
        std::vector<std::pair<Fe, Fe>> basis(n);
        basis[0] = {1, 0};
        Fe rg = root % s, rm = root / s;
        for (std::uint32_t i = 1; i < n; ++i) {
            auto [bg, bm] = pair_mul(basis[i - 1].first, basis[i - 1].second, rg, rm);
            basis[i] = {bg, bm};
        }

        to_pair_.assign(q, 0);
        from_pair_.assign(q, 0);
        std::vector<bool> hit(q, false);
        for (Fe e = 0; e < q; ++e) {
            Fe g = 0, m = 0;
            Fe v = e;
            for (std::uint32_t i = 0; i < n; ++i) {
                std::uint32_t digit = v % p;
                v /= p;
                if (digit == 0) continue;
                // digit * basis[i], with digit acting as repeated addition.
                Fe scale = static_cast<Fe>(digit);  // constant of F_s
                g = fs_.add(g, fs_.mul(scale, basis[i].first));
                m = fs_.add(m, fs_.mul(scale, basis[i].second));
            }
            std::uint32_t packed = g + std::size_t(m) * s;
            to_pair_[e] = packed;
            from_pair_[packed] = e;
            if (hit[packed]) throw std::logic_error("Tower: isomorphism not a bijection");
            hit[packed] = true;
        }
    }

    Field fq_;
    Field fs_;
    Fe a1_ = 0, a0_ = 0;
    std::vector<std::uint32_t> to_pair_;
    std::vector<std::uint32_t> from_pair_;
};

}  // namespace pcsilab
