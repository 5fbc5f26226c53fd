#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"

namespace pcsilab {

/// Full-support retrieval (M = K). For q != 2 the download is a single
/// combination of all messages whose theta coefficient is the CSI coefficient
/// blended with a fresh nonzero lambda', so rate 1. Over F_2 no such blend
/// exists and the scheme falls back to downloading a fixed K-1 of the
/// messages, rate 1/(K-1).
class MkPcsi2 final : public Scheme {
public:
    MkPcsi2(const Field& f, std::uint32_t K) : f_(f), params_{f.q(), K, K, 1} {
        validate_params(params_, Variant::PcsiII);
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiII; }
    Params params() const override { return params_; }
    Rational rate() const override {
        return params_.q == 2 ? Rational(1, params_.K - 1) : Rational(1);
    }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiII, params_);
        if (params_.q == 2) {
            std::vector<std::vector<Fe>> rows(params_.K - 1, std::vector<Fe>(params_.K, 0));
            for (std::uint32_t k = 0; k + 1 < params_.K; ++k) rows[k][k] = 1;
            Query q{name_, {QueryBlock{"rows", params_.q, std::move(rows)}}};
            return {std::move(q), State{sc, 0}};
        }
        Fe lam_t = sc.lambda[sc.theta - 1];  // S = [K], so position t = theta
        Fe lampr = draw_nonzero_excluding(rng, params_.q, f_.neg(lam_t));
        std::vector<Fe> c(params_.K);
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            c[k - 1] = k == sc.theta ? f_.add(lam_t, lampr) : sc.lambda[k - 1];
        Query q{name_, {QueryBlock{"rows", params_.q, {std::move(c)}}}};
        return {std::move(q), State{sc, lampr}};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        AnswerBlock b{params_.q, Rational(1), {}};
        for (const auto& row : q.blocks.at(0).rows) {
            Fe acc = 0;
            for (std::uint32_t k = 1; k <= params_.K; ++k)
                acc = f_.add(acc, f_.mul(row[k - 1], store.message(k)[0]));
            b.symbols.push_back(acc);
        }
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const auto& sym = ans.blocks.at(0).symbols;
        const std::uint32_t theta = state.sc.theta;
        if (params_.q == 2) {
            if (theta < params_.K) return {sym[theta - 1]};
            Fe acc = csi.y.at(0);
            for (std::uint32_t k = 1; k < params_.K; ++k)
                acc = f_.sub(acc, f_.mul(state.sc.lambda[k - 1], sym[k - 1]));
            return {f_.div(acc, state.sc.lambda[params_.K - 1])};
        }
        return {f_.div(f_.sub(sym[0], csi.y.at(0)), state.lambda_prime)};
    }

private:
    struct State {
        Scenario sc;
        Fe lambda_prime;
    };

    Field f_;
    Params params_;
    std::string name_ = "mk_pcsi2";
};

inline std::unique_ptr<Scheme> make_mk_pcsi2(const Field& f, std::uint32_t K) {
    return std::make_unique<MkPcsi2>(f, K);
}

}  // namespace pcsilab
