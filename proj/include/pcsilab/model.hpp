#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcsilab/gf.hpp"
#include "pcsilab/rational.hpp"
#include "pcsilab/rng.hpp"

namespace pcsilab {

using json = nlohmann::json;

/// Which set the retrieval index theta is drawn from: outside the side
/// information support, inside it, or anywhere.
enum class Variant { PcsiI, PcsiII, Pcsi };

enum class PrivacyMode { ThetaS, ThetaSLambda };

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::PcsiI: return "PCSI-I";
        case Variant::PcsiII: return "PCSI-II";
        case Variant::Pcsi: return "PCSI";
    }
    return "?";
}

inline std::string to_string(PrivacyMode m) {
    return m == PrivacyMode::ThetaS ? "theta_S" : "theta_S_lambda";
}

struct Params {
    std::uint32_t q = 0;  // field order
    std::uint32_t K = 0;  // number of messages
    std::uint32_t M = 0;  // side-information support size
    std::uint32_t L = 1;  // message length in q-ary symbols
};

inline void validate_params(const Params& p, Variant v) {
    if (p.K < 2) throw std::invalid_argument("params: K must be >= 2");
    if (p.L < 1) throw std::invalid_argument("params: L must be >= 1");
    switch (v) {
        case Variant::PcsiII:
            if (p.M < 2 || p.M > p.K) throw std::invalid_argument("params: PCSI-II needs 2 <= M <= K");
            break;
        case Variant::PcsiI:
            if (p.M < 1 || p.M > p.K - 1)
                throw std::invalid_argument("params: PCSI-I needs 1 <= M <= K-1");
            break;
        case Variant::Pcsi:
            if (p.M < 1 || p.M > p.K) throw std::invalid_argument("params: PCSI needs 1 <= M <= K");
            break;
    }
}

/// One problem realization: retrieval index, support set (ascending, 1-based)
/// and nonzero combination coefficients.
struct Scenario {
    Variant variant = Variant::PcsiII;
    std::uint32_t theta = 0;          // in [1, K]
    std::vector<std::uint32_t> S;     // strictly increasing, 1-based
    std::vector<Fe> lambda;           // length M, all nonzero

    bool theta_in_S() const {
        return std::binary_search(S.begin(), S.end(), theta);
    }

    /// Position t with S(t) == theta (1-based); throws when theta is outside S.
    std::uint32_t theta_pos() const {
        auto it = std::lower_bound(S.begin(), S.end(), theta);
        if (it == S.end() || *it != theta) throw std::logic_error("scenario: theta not in S");
        return static_cast<std::uint32_t>(it - S.begin()) + 1;
    }
};

/// The K stored messages, each a length-L column over F_q.
struct MessageStore {
    std::uint32_t q = 0;
    std::uint32_t K = 0;
    std::uint32_t L = 0;
    std::vector<std::vector<Fe>> W;  // W[k-1] is message k

    const std::vector<Fe>& message(std::uint32_t k) const { return W[k - 1]; }
};

/// Side information as the client retains it. For full-CSI schemes this is Y
/// itself; schemes that keep only a projection store the processed symbols
/// over their own alphabet and the retained fraction alpha.
struct SideInfo {
    std::vector<Fe> y;
    std::uint32_t field_order = 0;
    Rational alpha{1};
};

/// Deterministic i.i.d. uniform message sampling: symbols are drawn
/// message-major from a splitmix64 stream of the given seed.
inline MessageStore sample_messages(const Params& p, std::uint64_t seed) {
    MessageStore s;
    s.q = p.q;
    s.K = p.K;
    s.L = p.L;
    s.W.assign(p.K, std::vector<Fe>(p.L));
    SeededSource src(seed);
    for (auto& w : s.W)
        for (auto& sym : w) sym = static_cast<Fe>(src.uniform(p.q));
    return s;
}

/// Y = sum_m lambda_m W_{S(m)}, componentwise over F_q.
inline std::vector<Fe> compute_Y(const Field& f, const MessageStore& store, const Scenario& sc) {
    if (store.q != f.q()) throw std::invalid_argument("compute_Y: field mismatch");
    std::vector<Fe> y(store.L, 0);
    for (std::size_t m = 0; m < sc.S.size(); ++m) {
        const auto& w = store.message(sc.S[m]);
        for (std::uint32_t i = 0; i < store.L; ++i)
            y[i] = f.add(y[i], f.mul(sc.lambda[m], w[i]));
    }
    return y;
}

inline std::uint64_t binomial(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// All M-subsets of [K] in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> enumerate_support_sets(std::uint32_t K,
                                                                      std::uint32_t M) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> s(M);
    std::iota(s.begin(), s.end(), 1);
    while (true) {
        out.push_back(s);
        std::size_t i = M;
        while (i > 0 && s[i - 1] == K - M + i) --i;
        if (i == 0) break;
        ++s[i - 1];
        for (std::size_t j = i; j < M; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
}

inline std::uint64_t lambda_count(std::uint32_t q, std::uint32_t M) {
    std::uint64_t c = 1;
    for (std::uint32_t i = 0; i < M; ++i) c *= (q - 1);
    return c;
}

/// Coefficient vector for a given index, mixed radix with lambda_1 most
/// significant; digit d encodes the nonzero element d+1.
inline std::vector<Fe> lambda_at(std::uint32_t q, std::uint32_t M, std::uint64_t idx) {
    std::vector<Fe> lam(M);
    for (std::uint32_t m = M; m-- > 0;) {
        lam[m] = static_cast<Fe>(idx % (q - 1)) + 1;
        idx /= (q - 1);
    }
    return lam;
}

inline std::vector<std::uint32_t> feasible_thetas(Variant v, std::uint32_t K,
                                                  const std::vector<std::uint32_t>& S) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t k = 1; k <= K; ++k) {
        bool in = std::binary_search(S.begin(), S.end(), k);
        if ((v == Variant::PcsiI && !in) || (v == Variant::PcsiII && in) || v == Variant::Pcsi)
            out.push_back(k);
    }
    return out;
}

/// Full enumeration of feasible scenarios in lexicographic (S, theta, Lambda)
/// order. In theta_S mode the coefficient vector is left at all-ones and the
/// enumeration covers (theta, S) cells only; in theta_S_lambda mode every
/// coefficient vector appears.
inline std::vector<Scenario> enumerate_scenarios(const Params& p, Variant v, PrivacyMode mode) {
    validate_params(p, v);
    std::vector<Scenario> out;
    const std::uint64_t nlam = mode == PrivacyMode::ThetaSLambda ? lambda_count(p.q, p.M) : 1;
    for (const auto& S : enumerate_support_sets(p.K, p.M)) {
        for (std::uint32_t theta : feasible_thetas(v, p.K, S)) {
            for (std::uint64_t li = 0; li < nlam; ++li) {
                Scenario sc;
                sc.variant = v;
                sc.theta = theta;
                sc.S = S;
                sc.lambda = mode == PrivacyMode::ThetaSLambda ? lambda_at(p.q, p.M, li)
                                                              : std::vector<Fe>(p.M, 1);
                out.push_back(std::move(sc));
            }
        }
    }
    return out;
}

inline void to_json(json& j, const Scenario& sc) {
    j = json{{"variant", to_string(sc.variant)},
             {"theta", sc.theta},
             {"S", sc.S},
             {"lambda", sc.lambda}};
}

inline json store_to_json(const Params& p, const Scenario& sc, const MessageStore& s) {
    json j;
    j["q"] = p.q;
    j["K"] = p.K;
    j["M"] = p.M;
    j["L"] = p.L;
    j["variant"] = to_string(sc.variant);
    j["theta"] = sc.theta;
    j["S"] = sc.S;
    j["lambda"] = sc.lambda;
    j["W"] = s.W;
    return j;
}

}  // namespace pcsilab
