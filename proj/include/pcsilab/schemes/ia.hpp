#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"
#include "pcsilab/tower.hpp"

namespace pcsilab {

/// Interference-alignment retrieval for theta inside the support set.
///
/// Works over the quadratic tower of F_q (q an even prime power): every
/// message contributes one projected half-symbol over F_sqrt(q). Projections
/// of the side-information messages are aligned with the retained half of the
/// CSI so they cancel; the other half of the desired message is read off
/// directly, and the coefficient's 2x2 representation is inverted to finish.
/// Download: K half-symbols, rate 2/K. Only half of Y is ever consumed.
class IaPcsi2 final : public Scheme {
public:
    IaPcsi2(const Tower& tower, std::uint32_t K, std::uint32_t M)
        : tower_(tower), params_{tower.fq().q(), K, M, 1} {
        validate_params(params_, Variant::PcsiII);
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiII; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(2, params_.K); }
    Rational csi_alpha() const override { return Rational(1, 2); }

    const Tower& tower() const { return tower_; }

    SideInfo retain_csi(const std::vector<Fe>& y) const override {
        Vec2 v = tower_.vec_rep(y.at(0));
        return SideInfo{{v.v[0]}, tower_.s(), Rational(1, 2)};
    }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiII, params_);
        const std::uint32_t s = tower_.s();
        std::vector<std::vector<Fe>> rows(params_.K);
        std::vector<bool> in_s(params_.K + 1, false);
        for (std::size_t m = 0; m < sc.S.size(); ++m) {
            in_s[sc.S[m]] = true;
            Mat2 rep = tower_.mat_rep(sc.lambda[m]);
            auto r = rep.row(sc.S[m] == sc.theta ? 1 : 0);
            rows[sc.S[m] - 1] = {r[0], r[1]};
        }
        for (std::uint32_t k = 1; k <= params_.K; ++k) {
            if (in_s[k]) continue;
            auto r = draw_nonzero_row(rng, s);
            rows[k - 1] = {r[0], r[1]};
        }
        Query q{name_, {QueryBlock{"proj", s, std::move(rows)}}};
        return {std::move(q), State{sc}};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        const auto& rows = q.blocks.at(0).rows;
        const Field& fs = tower_.fs();
        AnswerBlock b{tower_.s(), Rational(1, 2), {}};
        b.symbols.reserve(params_.K);
        for (std::uint32_t k = 1; k <= params_.K; ++k) {
            Vec2 v = tower_.vec_rep(store.message(k)[0]);
            const auto& r = rows[k - 1];
            b.symbols.push_back(fs.add(fs.mul(r[0], v.v[0]), fs.mul(r[1], v.v[1])));
        }
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const Field& fs = tower_.fs();
        const auto& sym = ans.blocks.at(0).symbols;
        Fe acc = csi.y.at(0);
        for (std::uint32_t idx : state.sc.S)
            if (idx != state.sc.theta) acc = fs.sub(acc, sym[idx - 1]);
        Mat2 rep = tower_.mat_rep(state.sc.lambda[state.sc.theta_pos() - 1]);
        Vec2 rhs{{acc, sym[state.sc.theta - 1]}};
        Vec2 w = mat2_vec(fs, mat2_inverse(fs, rep), rhs);
        return {tower_.from_vec_rep(w)};
    }

private:
    struct State {
        Scenario sc;
    };

    Tower tower_;
    Params params_;
    std::string name_ = "ia_pcsi2";
};

inline std::unique_ptr<Scheme> make_ia_pcsi2(const Tower& tower, std::uint32_t K,
                                             std::uint32_t M) {
    return std::make_unique<IaPcsi2>(tower, K, M);
}

}  // namespace pcsilab
