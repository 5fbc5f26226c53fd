#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcsilab/extension.hpp"
#include "pcsilab/linalg.hpp"
#include "pcsilab/scheme.hpp"
#include "pcsilab/schemes/common.hpp"

namespace pcsilab {

enum class BankMode { Pcsi2, Pcsi2Private, Pcsi1, Pcsi1Private };

inline std::string to_string(BankMode m) {
    switch (m) {
        case BankMode::Pcsi2: return "pcsi2";
        case BankMode::Pcsi2Private: return "pcsi2_private";
        case BankMode::Pcsi1: return "pcsi1";
        case BankMode::Pcsi1Private: return "pcsi1_private";
    }
    return "?";
}

inline BankMode bank_mode_from_string(const std::string& s) {
    if (s == "pcsi2") return BankMode::Pcsi2;
    if (s == "pcsi2_private") return BankMode::Pcsi2Private;
    if (s == "pcsi1") return BankMode::Pcsi1;
    if (s == "pcsi1_private") return BankMode::Pcsi1Private;
    throw std::invalid_argument("unknown bank mode: " + s);
}

struct SearchFailed : std::runtime_error {
    SearchFailed(const std::string& what, std::uint64_t attempts)
        : std::runtime_error(what), attempts(attempts) {}
    std::uint64_t attempts;
};

/// Certified combination vectors for the generic schemes.
///
/// pcsi2 modes hold, per message, M-1 combination rows over F_{q^l}; the
/// certificate is that every stacked decoding system is invertible. pcsi1
/// modes hold K x (K-1) download matrices over F_{q^L}: one per coefficient
/// vector in plain mode, a single coefficient-independent one in private
/// mode.
struct VectorBank {
    BankMode mode = BankMode::Pcsi2;
    std::uint32_t q = 0, K = 0, M = 0, l = 0;
    std::shared_ptr<const ExtField> ext;
    std::vector<std::vector<std::vector<Fe>>> rows;  // [k][m] -> length-M row
    std::vector<Matrix> psi;                         // pcsi1: per lambda; private: one
    std::uint64_t attempts = 0;
    json attempt_log = json::array();
};

namespace detail {

/// Stacked decoding system for the support-set schemes: the coefficient
/// block on top, then each support message's combination rows on its own
/// column block.
inline Matrix build_support_system(std::uint32_t M, const std::vector<std::uint32_t>& S,
                                   const std::vector<Fe>& lambda_ext,
                                   const std::vector<std::vector<std::vector<Fe>>>& rows) {
    Matrix g(std::size_t(M) * M, std::size_t(M) * M);
    for (std::uint32_t r = 0; r < M; ++r)
        for (std::uint32_t j = 0; j < M; ++j) g.at(r, std::size_t(j) * M + r) = lambda_ext[j];
    for (std::uint32_t m = 0; m < M; ++m)
        for (std::uint32_t i = 0; i + 1 < M; ++i) {
            std::size_t r = M + std::size_t(m) * (M - 1) + i;
            const auto& row = rows[S[m] - 1][i];
            for (std::uint32_t c = 0; c < M; ++c) g.at(r, std::size_t(m) * M + c) = row[c];
        }
    return g;
}

/// Decoding system for the all-message schemes: coefficient row on top of
/// the download matrix, both transposed onto the message vector.
inline Matrix build_full_system(std::uint32_t K, const std::vector<std::uint32_t>& S,
                                const std::vector<Fe>& lambda_ext, const Matrix& psi) {
    Matrix g(K, K);
    for (std::size_t m = 0; m < S.size(); ++m) g.at(0, S[m] - 1) = lambda_ext[m];
    for (std::uint32_t i = 1; i < K; ++i)
        for (std::uint32_t k = 0; k < K; ++k) g.at(i, k) = psi.at(k, i - 1);
    return g;
}

inline std::vector<Fe> embed_lambda(const ExtField& e, const std::vector<Fe>& lambda) {
    std::vector<Fe> out(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) out[i] = e.embed(lambda[i]);
    return out;
}

}  // namespace detail

/// Smallest extension degree that satisfies the mode's existence bound.
inline std::uint32_t default_bank_degree(std::uint32_t q, std::uint32_t K, std::uint32_t M,
                                         BankMode mode) {
    std::uint64_t bound;
    switch (mode) {
        case BankMode::Pcsi2: bound = binomial(K, M) * M * (M - 1); break;
        case BankMode::Pcsi2Private:
            bound = lambda_count(q, M) * binomial(K, M) * M * (M - 1);
            break;
        case BankMode::Pcsi1: bound = binomial(K, M) * (K - 1); break;
        case BankMode::Pcsi1Private: bound = lambda_count(q, M) * binomial(K, M) * (K - 1); break;
    }
    std::uint32_t l = 1;
    std::uint64_t ql = q;
    while (ql <= bound) { ql *= q; ++l; }
    return l;
}

/// Re-runs the full determinant sweep a bank's certificate claims.
inline bool verify_bank(const VectorBank& bank) {
    const auto S_all = enumerate_support_sets(bank.K, bank.M);
    const ExtField& e = *bank.ext;
    switch (bank.mode) {
        case BankMode::Pcsi2: {
            std::vector<Fe> ones(bank.M, e.embed(1));
            for (const auto& S : S_all)
                if (mat_det(e.ext(), detail::build_support_system(bank.M, S, ones, bank.rows)) == 0)
                    return false;
            return true;
        }
        case BankMode::Pcsi2Private: {
            for (std::uint64_t li = 0; li < lambda_count(bank.q, bank.M); ++li) {
                auto lam = detail::embed_lambda(e, lambda_at(bank.q, bank.M, li));
                for (const auto& S : S_all)
                    if (mat_det(e.ext(),
                                detail::build_support_system(bank.M, S, lam, bank.rows)) == 0)
                        return false;
            }
            return true;
        }
        case BankMode::Pcsi1: {
            for (std::uint64_t li = 0; li < lambda_count(bank.q, bank.M); ++li) {
                auto lam = detail::embed_lambda(e, lambda_at(bank.q, bank.M, li));
                for (const auto& S : S_all)
                    if (mat_det(e.ext(),
                                detail::build_full_system(bank.K, S, lam, bank.psi[li])) == 0)
                        return false;
            }
            return true;
        }
        case BankMode::Pcsi1Private: {
            for (std::uint64_t li = 0; li < lambda_count(bank.q, bank.M); ++li) {
                auto lam = detail::embed_lambda(e, lambda_at(bank.q, bank.M, li));
                for (const auto& S : S_all)
                    if (mat_det(e.ext(),
                                detail::build_full_system(bank.K, S, lam, bank.psi[0])) == 0)
                        return false;
            }
            return true;
        }
    }
    return false;
}

/// Draws candidate combination vectors uniformly and certifies every
/// decoding system by determinant, retrying with fresh draws until the
/// certificate holds or the attempt budget runs out.
///
/// Plain pcsi2 certification runs at the all-ones coefficient vector; column
/// scaling turns that certificate into one for every coefficient vector.
/// Plain pcsi1 searches one matrix per coefficient vector, each under the
/// per-vector bound.
inline VectorBank search_vectors(const Field& f, std::uint32_t K, std::uint32_t M, BankMode mode,
                                 std::uint64_t seed, std::uint32_t l_override = 0,
                                 std::uint32_t budget = 64) {
    const bool support_mode = (mode == BankMode::Pcsi2 || mode == BankMode::Pcsi2Private);
    if (support_mode) {
        if (M < 2 || M > K) throw std::invalid_argument("search_vectors: need 2 <= M <= K");
    } else {
        if (M < 1 || M > K) throw std::invalid_argument("search_vectors: need 1 <= M <= K");
    }
    VectorBank bank;
    bank.mode = mode;
    bank.q = f.q();
    bank.K = K;
    bank.M = M;
    bank.l = l_override ? l_override : default_bank_degree(f.q(), K, M, mode);
    bank.ext = std::make_shared<ExtField>(f, bank.l);
    const ExtField& e = *bank.ext;
    const std::uint32_t Q = e.ext().q();
    const auto S_all = enumerate_support_sets(K, M);
    SeededSource rng(seed);

    auto log_attempt = [&](bool ok, const std::string& note) {
        bank.attempt_log.push_back(json{{"attempt", bank.attempts}, {"ok", ok}, {"note", note}});
    };

    if (support_mode) {
        const std::uint64_t nlam =
            mode == BankMode::Pcsi2Private ? lambda_count(f.q(), M) : 1;
        for (std::uint32_t att = 0; att < budget; ++att) {
            ++bank.attempts;
            bank.rows.assign(K, std::vector<std::vector<Fe>>(M - 1, std::vector<Fe>(M)));
            for (auto& per_msg : bank.rows)
                for (auto& row : per_msg)
                    for (auto& x : row) x = static_cast<Fe>(rng.uniform(Q));
            bool ok = true;
            std::string note;
            for (std::uint64_t li = 0; li < nlam && ok; ++li) {
                auto lam = mode == BankMode::Pcsi2Private
                               ? detail::embed_lambda(e, lambda_at(f.q(), M, li))
                               : std::vector<Fe>(M, e.embed(1));
                for (const auto& S : S_all) {
                    if (mat_det(e.ext(), detail::build_support_system(M, S, lam, bank.rows)) ==
                        0) {
                        ok = false;
                        note = "singular system";
                        break;
                    }
                }
            }
            log_attempt(ok, note);
            if (ok) return bank;
        }
        throw SearchFailed("search_vectors: budget exhausted (" + to_string(mode) + ")",
                           bank.attempts);
    }

    const std::uint64_t nlam = lambda_count(f.q(), M);
    const std::uint64_t npsi = mode == BankMode::Pcsi1Private ? 1 : nlam;
    bank.psi.resize(npsi);
    for (std::uint64_t pi = 0; pi < npsi; ++pi) {
        bool settled = false;
        for (std::uint32_t att = 0; att < budget && !settled; ++att) {
            ++bank.attempts;
            Matrix psi(K, K - 1);
            for (auto& x : psi.a) x = static_cast<Fe>(rng.uniform(Q));
            bool ok = true;
            const std::uint64_t lo = mode == BankMode::Pcsi1Private ? 0 : pi;
            const std::uint64_t hi = mode == BankMode::Pcsi1Private ? nlam : pi + 1;
            for (std::uint64_t li = lo; li < hi && ok; ++li) {
                auto lam = detail::embed_lambda(e, lambda_at(f.q(), M, li));
                for (const auto& S : S_all)
                    if (mat_det(e.ext(), detail::build_full_system(K, S, lam, psi)) == 0) {
                        ok = false;
                        break;
                    }
            }
            log_attempt(ok, ok ? "" : "singular system");
            if (ok) {
                bank.psi[pi] = std::move(psi);
                settled = true;
            }
        }
        if (!settled)
            throw SearchFailed("search_vectors: budget exhausted (" + to_string(mode) + ")",
                               bank.attempts);
    }
    return bank;
}

inline json bank_to_json(const VectorBank& b) {
    json j;
    j["q"] = b.q;
    j["l"] = b.l;
    j["K"] = b.K;
    j["M"] = b.M;
    j["mode"] = to_string(b.mode);
    if (b.mode == BankMode::Pcsi2 || b.mode == BankMode::Pcsi2Private) {
        j["vectors"] = b.rows;
    } else {
        json ps = json::array();
        for (const auto& m : b.psi) {
            json rows = json::array();
            for (std::size_t r = 0; r < m.rows; ++r) {
                json row = json::array();
                for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
                rows.push_back(row);
            }
            ps.push_back(rows);
        }
        j["vectors"] = ps;
    }
    j["attempts"] = b.attempts;
    j["attempt_log"] = b.attempt_log;
    return j;
}

inline VectorBank bank_from_json(const Field& f, const json& j) {
    VectorBank b;
    b.mode = bank_mode_from_string(j.at("mode").get<std::string>());
    b.q = j.at("q").get<std::uint32_t>();
    b.K = j.at("K").get<std::uint32_t>();
    b.M = j.at("M").get<std::uint32_t>();
    b.l = j.at("l").get<std::uint32_t>();
    b.attempts = j.value("attempts", 0ULL);
    if (b.q != f.q()) throw std::invalid_argument("bank_from_json: field mismatch");
    b.ext = std::make_shared<ExtField>(f, b.l);
    if (b.mode == BankMode::Pcsi2 || b.mode == BankMode::Pcsi2Private) {
        b.rows = j.at("vectors").get<std::vector<std::vector<std::vector<Fe>>>>();
    } else {
        for (const auto& pm : j.at("vectors")) {
            Matrix m(b.K, b.K - 1);
            for (std::size_t r = 0; r < m.rows; ++r)
                for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = pm.at(r).at(c).get<Fe>();
            b.psi.push_back(std::move(m));
        }
    }
    return b;
}

/// Fixed-combination retrieval for theta inside the support set: the server
/// returns M-1 certified combinations of every message, the client stacks
/// them under the side information and inverts, recovering the whole support
/// set. The download never depends on the scenario, so with a private-mode
/// bank the scheme hides the coefficients as well. Rate M / ((M-1) K).
class GenericPcsi2 final : public Scheme {
public:
    GenericPcsi2(const Field& f, std::uint32_t K, std::uint32_t M, bool private_coeffs,
                 VectorBank bank)
        : f_(f), bank_(std::move(bank)), private_(private_coeffs),
          params_{f.q(), K, M, M * bank_.l} {
        validate_params(params_, Variant::PcsiII);
        if (bank_.q != f.q() || bank_.K != K || bank_.M != M)
            throw std::invalid_argument("generic_pcsi2: bank does not match parameters");
        BankMode want = private_coeffs ? BankMode::Pcsi2Private : BankMode::Pcsi2;
        if (bank_.mode != want)
            throw std::invalid_argument("generic_pcsi2: bank certified for a different mode");
        name_ = private_coeffs ? "generic_pcsi2_private" : "generic_pcsi2";
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return Variant::PcsiII; }
    Params params() const override { return params_; }
    Rational rate() const override {
        return Rational(params_.M, std::int64_t(params_.M - 1) * params_.K);
    }
    const VectorBank& bank() const { return bank_; }

    QueryResult make_query(const Scenario& sc, RandomSource&) const override {
        validate_scenario(sc, Variant::PcsiII, params_);
        std::vector<std::vector<Fe>> rows;
        rows.reserve(std::size_t(params_.K) * (params_.M - 1));
        for (const auto& per_msg : bank_.rows)
            for (const auto& r : per_msg) rows.push_back(r);
        Query q{name_, {QueryBlock{"combos", bank_.ext->ext().q(), std::move(rows)}}};
        State st;
        st.sc = sc;
        auto lam = detail::embed_lambda(*bank_.ext, sc.lambda);
        auto g = detail::build_support_system(params_.M, sc.S, lam, bank_.rows);
        auto inv = mat_inverse(bank_.ext->ext(), g);
        if (!inv) throw std::logic_error("generic_pcsi2: certified system is singular");
        st.ginv = std::make_shared<Matrix>(std::move(*inv));
        return {std::move(q), std::move(st)};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        const ExtField& e = *bank_.ext;
        const auto& rows = q.blocks.at(0).rows;
        AnswerBlock b{e.ext().q(), Rational(bank_.l), {}};
        b.symbols.reserve(rows.size());
        for (std::uint32_t k = 1; k <= params_.K; ++k) {
            auto packed = pack_message(e, store.message(k), params_.M);
            for (std::uint32_t m = 0; m + 1 < params_.M; ++m)
                b.symbols.push_back(
                    dot(e.ext(), rows[std::size_t(k - 1) * (params_.M - 1) + m], packed));
        }
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        auto all = decode_support(ans, st, csi);
        const auto& state = std::any_cast<const State&>(st);
        const std::uint32_t t = state.sc.theta_pos();
        return std::vector<Fe>(all.begin() + std::size_t(t - 1) * params_.L,
                               all.begin() + std::size_t(t) * params_.L);
    }

    /// Every support-set message, concatenated in support order.
    std::vector<Fe> decode_support(const Answer& ans, const ClientState& st,
                                   const SideInfo& csi) const {
        const auto& state = std::any_cast<const State&>(st);
        const ExtField& e = *bank_.ext;
        const std::uint32_t M = params_.M;
        std::vector<Fe> rhs;
        rhs.reserve(std::size_t(M) * M);
        auto ypacked = pack_message(e, csi.y, M);
        rhs.insert(rhs.end(), ypacked.begin(), ypacked.end());
        const auto& sym = ans.blocks.at(0).symbols;
        for (std::uint32_t m = 0; m < M; ++m) {
            std::size_t base = std::size_t(state.sc.S[m] - 1) * (M - 1);
            for (std::uint32_t i = 0; i + 1 < M; ++i) rhs.push_back(sym[base + i]);
        }
        auto sol = mat_vec(e.ext(), *state.ginv, rhs);
        return unpack_message(e, sol);
    }

private:
    struct State {
        Scenario sc;
        std::shared_ptr<const Matrix> ginv;
    };

    Field f_;
    VectorBank bank_;
    bool private_;
    Params params_;
    std::string name_;
};

/// All-message retrieval: K-1 certified combinations plus the side
/// information pin down every message, so the query never depends on theta
/// or the support set. Plain mode picks the download matrix from the realized
/// coefficients; private mode uses one matrix for all of them. Rate 1/(K-1).
class GenericPcsi1 final : public Scheme {
public:
    GenericPcsi1(const Field& f, std::uint32_t K, std::uint32_t M, bool private_coeffs,
                 VectorBank bank, Variant variant = Variant::PcsiI)
        : f_(f), bank_(std::move(bank)), private_(private_coeffs), variant_(variant),
          params_{f.q(), K, M, bank_.l} {
        if (variant_ == Variant::PcsiII)
            throw std::invalid_argument("generic_pcsi1: serves PCSI-I or PCSI");
        validate_params(params_, variant_);
        if (bank_.q != f.q() || bank_.K != K || bank_.M != M)
            throw std::invalid_argument("generic_pcsi1: bank does not match parameters");
        BankMode want = private_coeffs ? BankMode::Pcsi1Private : BankMode::Pcsi1;
        if (bank_.mode != want)
            throw std::invalid_argument("generic_pcsi1: bank certified for a different mode");
        name_ = private_coeffs ? "generic_pcsi1_private" : "generic_pcsi1";
    }

    const std::string& name() const override { return name_; }
    Variant variant() const override { return variant_; }
    Params params() const override { return params_; }
    Rational rate() const override { return Rational(1, params_.K - 1); }
    const VectorBank& bank() const { return bank_; }

    QueryResult make_query(const Scenario& sc, RandomSource&) const override {
        validate_scenario(sc, variant_, params_);
        const Matrix& psi = select_psi(sc.lambda);
        std::vector<std::vector<Fe>> rows(params_.K - 1, std::vector<Fe>(params_.K));
        for (std::uint32_t i = 0; i + 1 < params_.K; ++i)
            for (std::uint32_t k = 0; k < params_.K; ++k) rows[i][k] = psi.at(k, i);
        Query q{name_, {QueryBlock{"psi", bank_.ext->ext().q(), std::move(rows)}}};
        State st;
        st.sc = sc;
        auto lam = detail::embed_lambda(*bank_.ext, sc.lambda);
        auto g = detail::build_full_system(params_.K, sc.S, lam, psi);
        auto inv = mat_inverse(bank_.ext->ext(), g);
        if (!inv) throw std::logic_error("generic_pcsi1: certified system is singular");
        st.ginv = std::make_shared<Matrix>(std::move(*inv));
        return {std::move(q), std::move(st)};
    }

    Answer answer(const Query& q, const MessageStore& store) const override {
        const ExtField& e = *bank_.ext;
        const auto& rows = q.blocks.at(0).rows;
        std::vector<Fe> w(params_.K);
        for (std::uint32_t k = 1; k <= params_.K; ++k)
            w[k - 1] = pack_message(e, store.message(k), 1)[0];
        AnswerBlock b{e.ext().q(), Rational(bank_.l), {}};
        for (const auto& r : rows) b.symbols.push_back(dot(e.ext(), r, w));
        return Answer{{std::move(b)}};
    }

    std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                           const SideInfo& csi) const override {
        auto all = decode_all(ans, st, csi);
        const auto& state = std::any_cast<const State&>(st);
        return std::vector<Fe>(all.begin() + std::size_t(state.sc.theta - 1) * params_.L,
                               all.begin() + std::size_t(state.sc.theta) * params_.L);
    }

    /// All K messages, concatenated in index order.
    std::vector<Fe> decode_all(const Answer& ans, const ClientState& st,
                               const SideInfo& csi) const {
        const auto& state = std::any_cast<const State&>(st);
        const ExtField& e = *bank_.ext;
        std::vector<Fe> rhs;
        rhs.reserve(params_.K);
        rhs.push_back(pack_message(e, csi.y, 1)[0]);
        const auto& sym = ans.blocks.at(0).symbols;
        rhs.insert(rhs.end(), sym.begin(), sym.end());
        auto sol = mat_vec(e.ext(), *state.ginv, rhs);
        return unpack_message(e, sol);
    }

private:
    struct State {
        Scenario sc;
        std::shared_ptr<const Matrix> ginv;
    };

    const Matrix& select_psi(const std::vector<Fe>& lambda) const {
        if (private_) return bank_.psi[0];
        std::uint64_t idx = 0;
        for (Fe l : lambda) idx = idx * (params_.q - 1) + (l - 1);
        return bank_.psi[idx];
    }

    Field f_;
    VectorBank bank_;
    bool private_;
    Variant variant_;
    Params params_;
    std::string name_;
};

inline std::unique_ptr<Scheme> make_generic_pcsi2(const Field& f, std::uint32_t K, std::uint32_t M,
                                                  bool private_coeffs, VectorBank bank) {
    return std::make_unique<GenericPcsi2>(f, K, M, private_coeffs, std::move(bank));
}

inline std::unique_ptr<Scheme> make_generic_pcsi1(const Field& f, std::uint32_t K, std::uint32_t M,
                                                  bool private_coeffs, VectorBank bank,
                                                  Variant variant = Variant::PcsiI) {
    return std::make_unique<GenericPcsi1>(f, K, M, private_coeffs, std::move(bank), variant);
}

}  // namespace pcsilab
