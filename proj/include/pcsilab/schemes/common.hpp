#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pcsilab/gf.hpp"
#include "pcsilab/model.hpp"
#include "pcsilab/rng.hpp"
#include "pcsilab/tower.hpp"

namespace pcsilab {

inline void validate_scenario(const Scenario& sc, Variant v, const Params& p) {
    if (sc.variant != v) throw std::invalid_argument("scenario: wrong variant for scheme");
    if (sc.S.size() != p.M) throw std::invalid_argument("scenario: |S| != M");
    for (std::size_t i = 0; i < sc.S.size(); ++i) {
        if (sc.S[i] < 1 || sc.S[i] > p.K) throw std::invalid_argument("scenario: S out of range");
        if (i > 0 && sc.S[i] <= sc.S[i - 1])
            throw std::invalid_argument("scenario: S not strictly increasing");
    }
    if (sc.lambda.size() != p.M) throw std::invalid_argument("scenario: |lambda| != M");
    for (Fe l : sc.lambda)
        if (l == 0 || l >= p.q) throw std::invalid_argument("scenario: lambda out of F_q^x");
    bool in = sc.theta_in_S();
    if (v == Variant::PcsiI && in) throw std::invalid_argument("scenario: theta in S");
    if (v == Variant::PcsiII && !in) throw std::invalid_argument("scenario: theta not in S");
    if (sc.theta < 1 || sc.theta > p.K) throw std::invalid_argument("scenario: theta out of range");
}

/// Uniform draw from F_q^x, index-shifted so the coin domain is exactly q-1.
inline Fe draw_nonzero(RandomSource& rng, std::uint32_t q) {
    return static_cast<Fe>(1 + rng.uniform(q - 1));
}

/// Uniform nonzero element excluding one further value (e.g. -lambda_t).
inline Fe draw_nonzero_excluding(RandomSource& rng, std::uint32_t q, Fe excluded) {
    if (excluded == 0) return draw_nonzero(rng, q);
    std::uint64_t j = rng.uniform(q - 2);
    for (Fe c = 1; c < q; ++c) {
        if (c == excluded) continue;
        if (j == 0) return c;
        --j;
    }
    throw std::logic_error("draw_nonzero_excluding: exhausted");
}

/// Uniform row from F_s^{1x2} minus the zero row.
inline std::array<Fe, 2> draw_nonzero_row(RandomSource& rng, std::uint32_t s) {
    std::uint64_t code = 1 + rng.uniform(std::uint64_t(s) * s - 1);
    return {static_cast<Fe>(code % s), static_cast<Fe>(code / s)};
}

/// Uniform row linearly independent of a given nonzero row (s^2 - s choices).
inline std::array<Fe, 2> draw_independent_row(const Field& fs, RandomSource& rng,
                                              const std::array<Fe, 2>& v) {
    const std::uint32_t s = fs.q();
    std::uint64_t j = rng.uniform(std::uint64_t(s) * s - s);
    for (std::uint64_t code = 0; code < std::uint64_t(s) * s; ++code) {
        Fe r0 = static_cast<Fe>(code % s), r1 = static_cast<Fe>(code / s);
        // Skip multiples of v: r = c*v has r0*v1 == r1*v0 and r in span(v).
        bool multiple;
        if (v[0] != 0) {
            Fe c = fs.div(r0, v[0]);
            multiple = (fs.mul(c, v[1]) == r1);
        } else {
            multiple = (r0 == 0);
        }
        if (multiple) continue;
        if (j == 0) return {r0, r1};
        --j;
    }
    throw std::logic_error("draw_independent_row: exhausted");
}

/// The first K field elements in integer order, used as fixed distinct
/// evaluation points.
inline std::vector<Fe> grs_points(const Field& f, std::uint32_t K) {
    if (f.q() < K) throw std::invalid_argument("grs_points: field too small for K points");
    std::vector<Fe> w(K);
    for (std::uint32_t k = 0; k < K; ++k) w[k] = f.element(k);
    return w;
}

/// Coefficients (low to high) of prod (x - r) over the given field.
inline std::vector<Fe> poly_from_roots(const Field& f, const std::vector<Fe>& roots) {
    std::vector<Fe> c{f.one()};
    for (Fe r : roots) {
        std::vector<Fe> nxt(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            nxt[i + 1] = f.add(nxt[i + 1], c[i]);
            nxt[i] = f.sub(nxt[i], f.mul(r, c[i]));
        }
        c = std::move(nxt);
    }
    return c;
}

inline Fe poly_eval(const Field& f, const std::vector<Fe>& coeffs, Fe x) {
    Fe acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = f.add(f.mul(acc, x), coeffs[i]);
    return acc;
}

}  // namespace pcsilab
