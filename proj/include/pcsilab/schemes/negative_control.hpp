#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"
#include "pcsilab/tower.hpp"

namespace pcsilab {

/// Deliberately leaky variant of the alignment scheme, kept in-tree so the
/// privacy auditor's sensitivity is itself under test. The projection rows on
/// the support set are fixed ([0 1] at theta, [1 0] elsewhere) instead of
/// being rotated by the coefficients, so the query distribution differs
/// between scenario cells and any sound audit must flag it.
class BrokenIaPcsi2 final : public Scheme {
public:
    BrokenIaPcsi2(const Tower& tower, std::uint32_t K, std::uint32_t M)
        : tower_(tower), params_{tower.fq().q(), K, M, 1} {
        validate_params(params_, Variant::PcsiII);
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiII; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(2, params_.K); }
    Rational csi_alpha() const override { return Rational(1, 2); }

    SideInfo retain_csi(const std::vector<Fe>& y) const override {
        Vec2 v = tower_.vec_rep(y.at(0));
        return SideInfo{{v.v[0]}, tower_.s(), Rational(1, 2)};
    }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiII, params_);
        const std::uint32_t s = tower_.s();
        std::vector<std::vector<Fe>> rows(params_.K);
        std::vector<bool> in_s(params_.K + 1, false);
        for (auto idx : sc.S) {
            in_s[idx] = true;
            rows[idx - 1] = idx == sc.theta ? std::vector<Fe>{0, 1} : std::vector<Fe>{1, 0};
        }
        for (std::uint32_t k = 1; k <= params_.K; ++k) {
            if (in_s[k]) continue;
            auto r = draw_nonzero_row(rng, s);
            rows[k - 1] = {r[0], r[1]};
        }
        Query q{name_, {QueryBlock{"proj", s, std::move(rows)}}};
        return {std::move(q), sc};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        const auto& rows = q.blocks.at(0).rows;
        const Field& fs = tower_.fs();
        AnswerBlock b{tower_.s(), Rational(1, 2), {}};
        for (std::uint32_t k = 1; k <= params_.K; ++k) {
            Vec2 v = tower_.vec_rep(store.message(k)[0]);
            const auto& r = rows[k - 1];
            b.symbols.push_back(fs.add(fs.mul(r[0], v.v[0]), fs.mul(r[1], v.v[1])));
        }
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo&) const override {
        // Only meaningful for all-ones coefficients; privacy audits never
        // reach decoding anyway.
        const auto& sc = std::any_cast<const Scenario&>(st);
        return {tower_.from_vec_rep(Vec2{{0, ans.blocks.at(0).symbols[sc.theta - 1]}})};
    }

private:
    Tower tower_;
    Params params_;
    std::string name_ = "broken_ia_pcsi2";
};

inline std::unique_ptr<Scheme> make_broken_ia_pcsi2(const Tower& tower, std::uint32_t K,
                                                    std::uint32_t M) {
    return std::make_unique<BrokenIaPcsi2>(tower, K, M);
}

}  // namespace pcsilab
