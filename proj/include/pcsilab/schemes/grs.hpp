#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"

namespace pcsilab {

namespace detail {

/// Rows of a scaled Vandermonde query: row i is [v_1 w_1^{i-1} .. v_K w_K^{i-1}].
inline std::vector<std::vector<Fe>> grs_rows(const Field& f, const std::vector<Fe>& omega,
                                             const std::vector<Fe>& v, std::uint32_t nrows) {
    const std::uint32_t K = static_cast<std::uint32_t>(omega.size());
    std::vector<std::vector<Fe>> rows(nrows, std::vector<Fe>(K));
    std::vector<Fe> cur = v;
    for (std::uint32_t i = 0; i < nrows; ++i) {
        rows[i] = cur;
        if (i + 1 < nrows)
            for (std::uint32_t k = 0; k < K; ++k) cur[k] = f.mul(cur[k], omega[k]);
    }
    return rows;
}

inline std::vector<Fe> apply_rows(const Field& f, const std::vector<std::vector<Fe>>& rows,
                                  const MessageStore& store) {
    std::vector<Fe> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        Fe acc = 0;
        for (std::size_t k = 0; k < r.size(); ++k)
            acc = f.add(acc, f.mul(r[k], store.message(static_cast<std::uint32_t>(k) + 1)[0]));
        out.push_back(acc);
    }
    return out;
}

}  // namespace detail

/// Annihilator-polynomial retrieval for theta outside the support set.
/// K-M Vandermonde rows scaled by a vector v that carries the CSI
/// coefficients on the support; combining the answers with the annihilator's
/// coefficients cancels everything except Y and a known multiple of the
/// desired message. Rate 1/(K-M).
class GrsPcsi1 final : public Scheme {
public:
    GrsPcsi1(const Field& f, std::uint32_t K, std::uint32_t M)
        : f_(f), params_{f.q(), K, M, 1}, omega_(grs_points(f, K)) {
        validate_params(params_, Variant::PcsiI);
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiI; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(1, params_.K - params_.M); }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiI, params_);
        std::vector<Fe> roots;
        std::vector<bool> in_s(params_.K + 1, false);
        for (auto idx : sc.S) in_s[idx] = true;
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            if (!in_s[k] && k != sc.theta) roots.push_back(omega_[k - 1]);
        auto pcoef = poly_from_roots(f_, roots);  // K-M coefficients

        std::vector<Fe> v(params_.K);
        for (std::size_t m = 0; m < sc.S.size(); ++m)
            v[sc.S[m] - 1] = f_.div(sc.lambda[m], poly_eval(f_, pcoef, omega_[sc.S[m] - 1]));
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            if (!in_s[k]) v[k - 1] = draw_nonzero(rng, params_.q);

        Fe scale = f_.mul(v[sc.theta - 1], poly_eval(f_, pcoef, omega_[sc.theta - 1]));
        auto rows = detail::grs_rows(f_, omega_, v, params_.K - params_.M);
        Query q{name_, {QueryBlock{"rows", params_.q, std::move(rows)}}};
        return {std::move(q), State{sc, std::move(pcoef), scale}};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        AnswerBlock b{params_.q, Rational(1),
                      detail::apply_rows(f_, q.blocks.at(0).rows, store)};
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const auto& sym = ans.blocks.at(0).symbols;
        Fe acc = 0;
        for (std::size_t i = 0; i < state.pcoef.size(); ++i)
            acc = f_.add(acc, f_.mul(state.pcoef[i], sym[i]));
        return {f_.div(f_.sub(acc, csi.y.at(0)), state.scale)};
    }

private:
    struct State {
        Scenario sc;
        std::vector<Fe> pcoef;
        Fe scale;  // v_theta * p(w_theta), nonzero
    };

    Field f_;
    Params params_;
    std::vector<Fe> omega_;
    std::string name_ = "grs_pcsi1";
};

/// Variant of the scaled-Vandermonde query for theta inside the support set:
/// one extra row, and the support coefficient at theta is blended with a
/// fresh nonzero lambda' so the combined equation reads Y + lambda' W_theta.
/// Rate 1/(K-M+1); needs q >= K and q != 2 for lambda' to exist.
class ModGrsPcsi2 final : public Scheme {
public:
    ModGrsPcsi2(const Field& f, std::uint32_t K, std::uint32_t M)
        : f_(f), params_{f.q(), K, M, 1}, omega_(grs_points(f, K)) {
        validate_params(params_, Variant::PcsiII);
        if (f.q() == 2) throw std::invalid_argument("modgrs_pcsi2: q = 2 unsupported");
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiII; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(1, params_.K - params_.M + 1); }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::PcsiII, params_);
        auto [rows, pcoef, lampr] = build(f_, omega_, params_, sc, rng);
        Query q{name_, {QueryBlock{"rows", params_.q, std::move(rows)}}};
        return {std::move(q), State{sc, std::move(pcoef), lampr}};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        AnswerBlock b{params_.q, Rational(1),
                      detail::apply_rows(f_, q.blocks.at(0).rows, store)};
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        return {decode_impl(f_, ans.blocks.at(0).symbols, state.pcoef, state.lambda_prime,
                            csi.y.at(0))};
    }

    struct Built {
        std::vector<std::vector<Fe>> rows;
        std::vector<Fe> pcoef;
        Fe lambda_prime;
    };

    /// Shared with the combined scheme.
    static Built build(const Field& f, const std::vector<Fe>& omega, const Params& p,
                       const Scenario& sc, RandomSource& rng) {
        std::vector<Fe> roots;
        std::vector<bool> in_s(p.K + 1, false);
        for (auto idx : sc.S) in_s[idx] = true;
        for (std::uint32_t k = 1; k <= p.K; ++k)
            if (!in_s[k]) roots.push_back(omega[k - 1]);
        auto pcoef = poly_from_roots(f, roots);  // K-M+1 coefficients

        Fe lam_t = sc.lambda[sc.theta_pos() - 1];
        Fe lampr = draw_nonzero_excluding(rng, p.q, f.neg(lam_t));
        std::vector<Fe> v(p.K);
        for (std::size_t m = 0; m < sc.S.size(); ++m) {
            Fe num = sc.S[m] == sc.theta ? f.add(lam_t, lampr) : sc.lambda[m];
            v[sc.S[m] - 1] = f.div(num, poly_eval(f, pcoef, omega[sc.S[m] - 1]));
        }
        for (std::uint32_t k = 1; k <= p.K; ++k)
            if (!in_s[k]) v[k - 1] = draw_nonzero(rng, p.q);
        auto rows = detail::grs_rows(f, omega, v, p.K - p.M + 1);
        return {std::move(rows), std::move(pcoef), lampr};
    }

    static Fe decode_impl(const Field& f, const std::vector<Fe>& sym,
                          const std::vector<Fe>& pcoef, Fe lampr, Fe y) {
        Fe acc = 0;
        for (std::size_t i = 0; i < pcoef.size(); ++i) acc = f.add(acc, f.mul(pcoef[i], sym[i]));
        return f.div(f.sub(acc, y), lampr);
    }

private:
    struct State {
        Scenario sc;
        std::vector<Fe> pcoef;
        Fe lambda_prime;
    };

    Field f_;
    Params params_;
    std::vector<Fe> omega_;
    std::string name_ = "modgrs_pcsi2";
};

/// Retrieval for theta drawn from all of [K]: runs the annihilator scheme
/// with one redundant row when theta is outside the support, and the blended
/// variant when it is inside. Both branches ship K-M+1 rows of a (K, K-M+1)
/// generalized Reed-Solomon generator with i.i.d. uniform nonzero scaling,
/// so the wire query carries no trace of the branch. Rate 1/(K-M+1).
class CombinedPcsi final : public Scheme {
public:
    CombinedPcsi(const Field& f, std::uint32_t K, std::uint32_t M)
        : f_(f), params_{f.q(), K, M, 1}, omega_(grs_points(f, K)) {
        validate_params(params_, Variant::Pcsi);
        if (M < 2) throw std::invalid_argument("combined_pcsi: M must be >= 2");
        if (f.q() == 2) throw std::invalid_argument("combined_pcsi: q = 2 unsupported");
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::Pcsi; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(1, params_.K - params_.M + 1); }

    QueryResult make_query(const Scenario& sc, RandomSource& rng) const override {
        validate_scenario(sc, Variant::Pcsi, params_);
        if (sc.theta_in_S()) {
            auto built = ModGrsPcsi2::build(f_, omega_, params_, sc, rng);
            Query q{name_, {QueryBlock{"rows", params_.q, std::move(built.rows)}}};
            return {std::move(q), State{sc, std::move(built.pcoef), built.lambda_prime, 0, true}};
        }
        std::vector<Fe> roots;
        std::vector<bool> in_s(params_.K + 1, false);
        for (auto idx : sc.S) in_s[idx] = true;
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            if (!in_s[k] && k != sc.theta) roots.push_back(omega_[k - 1]);
        auto pcoef = poly_from_roots(f_, roots);
        std::vector<Fe> v(params_.K);
        for (std::size_t m = 0; m < sc.S.size(); ++m)
            v[sc.S[m] - 1] = f_.div(sc.lambda[m], poly_eval(f_, pcoef, omega_[sc.S[m] - 1]));
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            if (!in_s[k]) v[k - 1] = draw_nonzero(rng, params_.q);
        Fe scale = f_.mul(v[sc.theta - 1], poly_eval(f_, pcoef, omega_[sc.theta - 1]));
        // One redundant row keeps the download length branch-independent.
        auto rows = detail::grs_rows(f_, omega_, v, params_.K - params_.M + 1);
        Query q{name_, {QueryBlock{"rows", params_.q, std::move(rows)}}};
        return {std::move(q), State{sc, std::move(pcoef), 0, scale, false}};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        AnswerBlock b{params_.q, Rational(1),
                      detail::apply_rows(f_, q.blocks.at(0).rows, store)};
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        const auto& state = std::any_cast<const State&>(st);
        const auto& sym = ans.blocks.at(0).symbols;
        if (state.in_support)
            return {ModGrsPcsi2::decode_impl(f_, sym, state.pcoef, state.lambda_prime,
                                             csi.y.at(0))};
        Fe acc = 0;
        for (std::size_t i = 0; i < state.pcoef.size(); ++i)
            acc = f_.add(acc, f_.mul(state.pcoef[i], sym[i]));
        return {f_.div(f_.sub(acc, csi.y.at(0)), state.scale)};
    }

private:
    struct State {
        Scenario sc;
        std::vector<Fe> pcoef;
        Fe lambda_prime;  // theta in S branch
        Fe scale;         // theta outside S branch
        bool in_support;
    };

    Field f_;
    Params params_;
    std::vector<Fe> omega_;
    std::string name_ = "combined_pcsi";
};

inline std::unique_ptr<Scheme> make_grs_pcsi1(const Field& f, std::uint32_t K, std::uint32_t M) {
    return std::make_unique<GrsPcsi1>(f, K, M);
}
inline std::unique_ptr<Scheme> make_modgrs_pcsi2(const Field& f, std::uint32_t K,
                                                 std::uint32_t M) {
    return std::make_unique<ModGrsPcsi2>(f, K, M);
}
inline std::unique_ptr<Scheme> make_combined_pcsi(const Field& f, std::uint32_t K,
                                                  std::uint32_t M) {
    return std::make_unique<CombinedPcsi>(f, K, M);
}

}  // namespace pcsilab
