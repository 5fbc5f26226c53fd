#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"

namespace pcsilab {

/// Fixed two-row scheme over F_3 for K = 4, M = 3, rate 1/2.
///
/// The query shape is always { W1 + eb W2 + ec W3, 2 eb W2 + ec W3 + ed W4 }.
/// The client normalizes its CSI so the first coefficient is 1, sets two of
/// (eb, ec, ed) from a case table and draws the remaining one uniformly from
/// {1, 2}; decoding combines the normalized CSI with one derived download.
/// The three e's end up i.i.d. uniform regardless of the scenario.
class F3M3K4 final : public Scheme {
public:
    F3M3K4() : f_(3, 1), params_{3, 4, 3, 1} {}

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiII; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(1, 2); }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiII, params_);
        Fe l1inv = f_.inv(sc.lambda[0]);
        Fe l2 = f_.mul(sc.lambda[1], l1inv);
        Fe l3 = f_.mul(sc.lambda[2], l1inv);
        Fe coin = draw_nonzero(rng, 3);
        const std::uint32_t miss = 10 - sc.S[0] - sc.S[1] - sc.S[2];
        Fe eb = 0, ec = 0, ed = 0;
        const Fe two = 2;
        switch (miss) {
            case 4:  // S = {1,2,3}, free e_d
                ed = coin;
                if (sc.theta == 1) { eb = f_.mul(two, l2); ec = f_.mul(two, l3); }
                else if (sc.theta == 2) { eb = f_.mul(two, l2); ec = l3; }
                else { eb = l2; ec = f_.mul(two, l3); }
                break;
            case 1:  // S = {2,3,4}, free e_b
                eb = coin;
                if (sc.theta == 2) { ec = f_.mul(eb, l2); ed = f_.mul(eb, l3); }
                else if (sc.theta == 3) { ec = f_.mul(eb, l2); ed = f_.mul(f_.mul(two, eb), l3); }
                else { ec = f_.mul(f_.mul(two, eb), l2); ed = f_.mul(eb, l3); }
                break;
            case 2:  // S = {1,3,4}, free e_b
                eb = coin;
                if (sc.theta == 1) { ec = l2; ed = f_.mul(two, l3); }
                else if (sc.theta == 3) { ec = l2; ed = l3; }
                else { ec = f_.mul(two, l2); ed = f_.mul(two, l3); }
                break;
            case 3:  // S = {1,2,4}, free e_c
                ec = coin;
                if (sc.theta == 1) { eb = l2; ed = l3; }
                else if (sc.theta == 2) { eb = l2; ed = f_.mul(two, l3); }
                else { eb = f_.mul(two, l2); ed = l3; }
                break;
            default:
                throw std::logic_error("f3_m3k4: unexpected support set");
        }
        std::vector<std::vector<Fe>> rows{{1, eb, ec, 0}, {0, f_.mul(two, eb), ec, ed}};
        Query q{name_, {QueryBlock{"rows", 3, std::move(rows)}}};
        return {std::move(q), State{sc, eb}};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        AnswerBlock b{3, Rational(1), {}};
        for (const auto& row : q.blocks.at(0).rows) {
            Fe acc = 0;
            for (std::uint32_t k = 1; k <= 4; ++k)
                acc = f_.add(acc, f_.mul(row[k - 1], store.message(k)[0]));
            b.symbols.push_back(acc);
        }
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const auto& sc = state.sc;
        const auto& sym = ans.blocks.at(0).symbols;
        Fe l1inv = f_.inv(sc.lambda[0]);
        Fe l2 = f_.mul(sc.lambda[1], l1inv);
        Fe l3 = f_.mul(sc.lambda[2], l1inv);
        Fe ynorm = f_.mul(csi.y.at(0), l1inv);
        const std::uint32_t miss = 10 - sc.S[0] - sc.S[1] - sc.S[2];
        const Fe two = 2;
        Fe delta, u, d;
        switch (miss) {
            case 4:
                delta = sym[0];
                if (sc.theta == 1) { u = 1; d = two; }
                else if (sc.theta == 2) { u = two; d = l2; }
                else { u = two; d = l3; }
                break;
            case 1:
                delta = f_.div(sym[1], state.eb);
                if (sc.theta == 2) { u = two; d = 1; }
                else if (sc.theta == 3) { u = 1; d = f_.mul(two, l2); }
                else { u = 1; d = f_.mul(two, l3); }
                break;
            case 2:
                delta = f_.add(sym[0], sym[1]);
                if (sc.theta == 1) { u = 1; d = two; }
                else if (sc.theta == 3) { u = two; d = l2; }
                else { u = two; d = l3; }
                break;
            case 3:
                delta = f_.add(sym[0], f_.mul(two, sym[1]));
                if (sc.theta == 1) { u = 1; d = two; }
                else if (sc.theta == 2) { u = two; d = l2; }
                else { u = two; d = l3; }
                break;
            default:
                throw std::logic_error("f3_m3k4: unexpected support set");
        }
        return {f_.div(f_.add(f_.mul(u, ynorm), delta), d)};
    }

private:
    struct State {
        Scenario sc;
        Fe eb;
    };

    Field f_;
    Params params_;
    std::string name_ = "f3_m3k4";
};

inline std::unique_ptr<Scheme> make_f3_m3k4() { return std::make_unique<F3M3K4>(); }

}  // namespace pcsilab
