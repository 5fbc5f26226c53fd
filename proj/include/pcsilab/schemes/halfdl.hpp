#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"
#include "pcsilab/tower.hpp"

namespace pcsilab {

/// Half-download retrieval for theta drawn from all of [K], over the
/// quadratic tower of F_q with sqrt(q) >= K.
///
/// Every message is split by two independent projections over F_sqrt(q); the
/// first halves are downloaded directly and the second halves go through a
/// scaled-Vandermonde download. With theta in the support set, the first
/// projections align with the retained CSI half and the Vandermonde part is a
/// decoy; otherwise the second projections carry rescaled CSI directions and
/// the annihilator combination recovers the missing half. Both branches emit
/// per-message uniform full-rank projection pairs and uniform nonzero
/// scalings. Download (K - M/2) q-ary symbols; rate (K - M/2)^-1.
class HalfDlPcsi final : public Scheme {
public:
    HalfDlPcsi(const Tower& tower, std::uint32_t K, std::uint32_t M)
        : tower_(tower), params_{tower.fq().q(), K, M, 1},
          omega_(grs_points(tower.fs(), K)) {
        validate_params(params_, Variant::Pcsi);
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::Pcsi; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(2, 2 * std::int64_t(params_.K) - params_.M); }
    Rational csi_alpha() const override { return Rational(1, 2); }

    SideInfo retain_csi(const std::vector<Fe>& y) const override {
        Vec2 v = tower_.vec_rep(y.at(0));
        return SideInfo{{v.v[0]}, tower_.s(), Rational(1, 2)};
    }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::Pcsi, params_);
        const Field& fs = tower_.fs();
        const std::uint32_t s = tower_.s(), K = params_.K;
        std::vector<std::array<Fe, 2>> L(K), Lp(K);
        std::vector<Fe> v(K);
        std::vector<bool> in_s(K + 1, false);
        for (auto idx : sc.S) in_s[idx] = true;
        const bool in_support = sc.theta_in_S();

        State st;
        st.sc = sc;
        if (in_support) {
            for (std::size_t m = 0; m < sc.S.size(); ++m) {
                const std::uint32_t i = sc.S[m];
                Mat2 rep = tower_.mat_rep(sc.lambda[m]);
                L[i - 1] = rep.row(i == sc.theta ? 1 : 0);
                Lp[i - 1] = draw_independent_row(fs, rng, L[i - 1]);
                v[i - 1] = draw_nonzero(rng, s);
            }
        } else {
            std::vector<Fe> roots;
            for (std::uint32_t k = 1; k <= K; ++k)
                if (!in_s[k] && k != sc.theta) roots.push_back(omega_[k - 1]);
            st.pcoef = poly_from_roots(fs, roots);
            for (std::size_t m = 0; m < sc.S.size(); ++m) {
                const std::uint32_t i = sc.S[m];
                Fe a = draw_nonzero(rng, s);
                Mat2 rep = tower_.mat_rep(sc.lambda[m]);
                auto r1 = rep.row(0);
                Fe ainv = fs.inv(a);
                Lp[i - 1] = {fs.mul(ainv, r1[0]), fs.mul(ainv, r1[1])};
                L[i - 1] = draw_independent_row(fs, rng, Lp[i - 1]);
                v[i - 1] = fs.div(a, poly_eval(fs, st.pcoef, omega_[i - 1]));
            }
        }
        for (std::uint32_t k = 1; k <= K; ++k) {
            if (in_s[k]) continue;
            L[k - 1] = draw_nonzero_row(rng, s);
            Lp[k - 1] = draw_independent_row(fs, rng, L[k - 1]);
            v[k - 1] = draw_nonzero(rng, s);
        }

        st.L = L;
        st.Lp = Lp;
        st.v = v;
        auto to_rows = [](const std::vector<std::array<Fe, 2>>& src) {
            std::vector<std::vector<Fe>> rows;
            rows.reserve(src.size());
            for (const auto& r : src) rows.push_back({r[0], r[1]});
            return rows;
        };
        Query q{name_,
                {QueryBlock{"proj1", s, to_rows(L)}, QueryBlock{"proj2", s, to_rows(Lp)},
                 QueryBlock{"grs_v", s, {v}}}};
        return {std::move(q), std::move(st)};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        const Field& fs = tower_.fs();
        const std::uint32_t K = params_.K;
        const auto& l1 = q.blocks.at(0).rows;
        const auto& l2 = q.blocks.at(1).rows;
        const auto& v = q.blocks.at(2).rows.at(0);
        std::vector<Fe> w1(K), w2(K);
        for (std::uint32_t k = 1; k <= K; ++k) {
            Vec2 vec = tower_.vec_rep(store.message(k)[0]);
            w1[k - 1] = fs.add(fs.mul(l1[k - 1][0], vec.v[0]), fs.mul(l1[k - 1][1], vec.v[1]));
            w2[k - 1] = fs.add(fs.mul(l2[k - 1][0], vec.v[0]), fs.mul(l2[k - 1][1], vec.v[1]));
        }
        AnswerBlock direct{tower_.s(), Rational(1, 2), w1};
        AnswerBlock grs{tower_.s(), Rational(1, 2), {}};
        std::vector<Fe> cur = v;
        for (std::uint32_t i = 0; i < K - params_.M; ++i) {
            Fe acc = 0;
            for (std::uint32_t k = 0; k < K; ++k) acc = fs.add(acc, fs.mul(cur[k], w2[k]));
            grs.symbols.push_back(acc);
            for (std::uint32_t k = 0; k < K; ++k) cur[k] = fs.mul(cur[k], omega_[k]);
        }
        return Answer{{std::move(direct), std::move(grs)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const Field& fs = tower_.fs();
        const auto& sc = state.sc;
        const auto& w1 = ans.blocks.at(0).symbols;
        if (sc.theta_in_S()) {
            Fe acc = csi.y.at(0);
            for (std::uint32_t idx : sc.S)
                if (idx != sc.theta) acc = fs.sub(acc, w1[idx - 1]);
            Mat2 rep = tower_.mat_rep(sc.lambda[sc.theta_pos() - 1]);
            Vec2 rhs{{acc, w1[sc.theta - 1]}};
            Vec2 w = mat2_vec(fs, mat2_inverse(fs, rep), rhs);
            return {tower_.from_vec_rep(w)};
        }
        const auto& grs = ans.blocks.at(1).symbols;
        Fe acc = 0;
        for (std::size_t i = 0; i < state.pcoef.size(); ++i)
            acc = fs.add(acc, fs.mul(state.pcoef[i], grs[i]));
        Fe scale = fs.mul(state.v[sc.theta - 1],
                          poly_eval(fs, state.pcoef, omega_[sc.theta - 1]));
        Fe w2_theta = fs.div(fs.sub(acc, csi.y.at(0)), scale);
        Mat2 proj;
        proj.m[0][0] = state.L[sc.theta - 1][0];
        proj.m[0][1] = state.L[sc.theta - 1][1];
        proj.m[1][0] = state.Lp[sc.theta - 1][0];
        proj.m[1][1] = state.Lp[sc.theta - 1][1];
        Vec2 rhs{{w1[sc.theta - 1], w2_theta}};
        Vec2 w = mat2_vec(fs, mat2_inverse(fs, proj), rhs);
        return {tower_.from_vec_rep(w)};
    }

private:
    struct State {
        Scenario sc;
        std::vector<std::array<Fe, 2>> L, Lp;
        std::vector<Fe> v;
        std::vector<Fe> pcoef;  // theta outside S only
    };

    Tower tower_;
    Params params_;
    std::vector<Fe> omega_;
    std::string name_ = "halfdl_pcsi";
};

inline std::unique_ptr<Scheme> make_halfdl_pcsi(const Tower& tower, std::uint32_t K,
                                                std::uint32_t M) {
    return std::make_unique<HalfDlPcsi>(tower, K, M);
}

}  // namespace pcsilab
