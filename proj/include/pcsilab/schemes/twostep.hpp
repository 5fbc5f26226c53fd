#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"
#include "pcsilab/schemes/generic.hpp"

namespace pcsilab {

/// Two-step retrieval for theta outside a large support set (K/2 < M <= K-1).
///
/// Step 1 downloads one masked combination of all K messages whose support
/// coefficients equal the CSI coefficients; subtracting Y leaves a fresh
/// combination over the complement of S, with theta inside it. Step 2 then
/// runs the coefficient-hiding support-set scheme on that complement. The
/// second step must hide its coefficients because the server has seen the
/// step-1 mask. Total cost L + K(K-M-1)L/(K-M), i.e. rate (K - M/(K-M))^-1.
///
/// When K-M = 1 the leftover combination is a scaled copy of the desired
/// message and step 2 downloads nothing.
class TwoStepPcsi1 final : public Scheme {
public:
    TwoStepPcsi1(const Field& f, std::uint32_t K, std::uint32_t M,
                 std::optional<VectorBank> inner_bank = std::nullopt)
        : f_(f), params_{f.q(), K, M, 1} {
        validate_params(params_, Variant::PcsiI);
        if (2 * M <= K)
            throw std::invalid_argument("twostep_pcsi1: needs K/2 < M <= K-1");
        const std::uint32_t Mi = K - M;
        if (Mi == 1) {
            if (inner_bank) throw std::invalid_argument("twostep_pcsi1: no inner bank for K-M=1");
        } else {
            if (!inner_bank) throw std::invalid_argument("twostep_pcsi1: inner bank required");
            if (inner_bank->mode != BankMode::Pcsi2Private)
                throw std::invalid_argument("twostep_pcsi1: inner bank must hide coefficients");
            if (inner_bank->q != f.q() || inner_bank->K != K || inner_bank->M != Mi)
                throw std::invalid_argument("twostep_pcsi1: inner bank does not match");
            params_.L = Mi * inner_bank->l;
            inner_.emplace(f, K, Mi, true, std::move(*inner_bank));
        }
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiI; }
    Params params() const override { return params_; }
    Rational rate() const override {
        const std::int64_t K = params_.K, M = params_.M;
        return Rational(K - M, K * (K - M) - M);
    }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiI, params_);
        std::vector<Fe> a(params_.K);
        std::vector<bool> in_s(params_.K + 1, false);
        for (std::size_t m = 0; m < sc.S.size(); ++m) {
            in_s[sc.S[m]] = true;
            a[sc.S[m] - 1] = sc.lambda[m];
        }
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            if (!in_s[k]) a[k - 1] = draw_nonzero(rng, params_.q);

        Query q{name_, {QueryBlock{"mix", params_.q, {a}}}};
        State st;
        st.sc = sc;
        st.a = a;
        if (inner_) {
            Scenario inner_sc = inner_scenario(sc, a);
            auto iq = inner_->make_query(inner_sc, rng);
            q.blocks.push_back(std::move(iq.query.blocks.at(0)));
            st.inner_state = std::move(iq.state);
        }
        return {std::move(q), std::move(st)};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        const auto& a = q.blocks.at(0).rows.at(0);
        std::vector<Fe> mixed(params_.L, 0);
        for (std::uint32_t k = 1; k <= params_.K; ++k) {
            const auto& w = store.message(k);
            for (std::uint32_t i = 0; i < params_.L; ++i)
                mixed[i] = f_.add(mixed[i], f_.mul(a[k - 1], w[i]));
        }
        Answer out;
        out.blocks.push_back(AnswerBlock{params_.q, Rational(1), std::move(mixed)});
        if (inner_) {
            Query iq{inner_->name(), {q.blocks.at(1)}};
            out.blocks.push_back(std::move(inner_->answer(iq, store).blocks.at(0)));
        }
        return out;
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const auto& mixed = ans.blocks.at(0).symbols;
        std::vector<Fe> yprime(params_.L);
        for (std::uint32_t i = 0; i < params_.L; ++i) yprime[i] = f_.sub(mixed[i], csi.y[i]);
        if (!inner_) {
            Fe ainv = f_.inv(state.a[state.sc.theta - 1]);
            for (auto& v : yprime) v = f_.mul(v, ainv);
            return yprime;
        }
        Answer inner_ans;
        inner_ans.blocks.push_back(ans.blocks.at(1));
        SideInfo inner_csi{std::move(yprime), params_.q, Rational(1)};
        return inner_->decode(inner_ans, state.inner_state, inner_csi);
    }

private:
    struct State {
        Scenario sc;
        std::vector<Fe> a;
        ClientState inner_state;
    };

    Scenario inner_scenario(const Scenario& sc, const std::vector<Fe>& a) const {
        Scenario inner;
        inner.variant = Variant::PcsiII;
        inner.theta = sc.theta;
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            if (!std::binary_search(sc.S.begin(), sc.S.end(), k)) {
                inner.S.push_back(k);
                inner.lambda.push_back(a[k - 1]);
            }
        return inner;
    }

    Field f_;
    Params params_;
    std::optional<GenericPcsi2> inner_;
    std::string name_ = "twostep_pcsi1";
};

inline std::unique_ptr<Scheme> make_twostep_pcsi1(const Field& f, std::uint32_t K, std::uint32_t M,
                                                  std::optional<VectorBank> inner_bank) {
    return std::make_unique<TwoStepPcsi1>(f, K, M, std::move(inner_bank));
}

}  // namespace pcsilab
