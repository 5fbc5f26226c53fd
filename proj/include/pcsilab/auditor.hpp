#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcsilab/model.hpp"
#include "pcsilab/rational.hpp"
#include "pcsilab/rng.hpp"
#include "pcsilab/scheme.hpp"
#include "pcsilab/stats.hpp"

namespace pcsilab {

struct CorrectnessReport {
    std::string message_mode;  // "exhaustive" | "sampled"
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    bool pass() const { return failures == 0; }
};

/// Exact query distribution for one conditioning cell, keyed by the
/// canonical query bytes. Probabilities are exact rationals summing to 1.
using QueryDistribution = std::map<std::string, Rational>;

struct PrivacyReport {
    std::string method;  // "exact" | "sampled"
    PrivacyMode mode = PrivacyMode::ThetaS;
    std::uint64_t cells = 0;
    bool budget_exceeded = false;
    // exact
    Rational max_tv{0};
    // sampled
    double max_tv_estimate = 0.0;
    double chi_square = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::uint64_t samples_per_cell = 0;
    double p_threshold = 0.01;

    bool pass() const {
        if (budget_exceeded) return false;
        return method == "exact" ? max_tv == Rational(0) : p_value > p_threshold;
    }
};

struct EnumerationBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t default_enumeration_budget() {
    if (const char* env = std::getenv("PCSILAB_ENUM_BUDGET")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 10'000'000;
}

namespace detail {

/// Iterates all q^{K L} message stores in place.
class StoreOdometer {
public:
    StoreOdometer(const Params& p) : q_(p.q) {
        store_.q = p.q;
        store_.K = p.K;
        store_.L = p.L;
        store_.W.assign(p.K, std::vector<Fe>(p.L, 0));
    }

    MessageStore& store() { return store_; }

    bool advance() {
        for (auto& w : store_.W)
            for (auto& sym : w) {
                if (sym + 1 < q_) { ++sym; return true; }
                sym = 0;
            }
        return false;
    }

    std::uint64_t total() const {
        std::uint64_t t = 1;
        for (std::uint32_t i = 0; i < store_.K * store_.L; ++i) {
            if (t > UINT64_MAX / q_) return UINT64_MAX;  // saturate
            t *= q_;
        }
        return t;
    }

private:
    std::uint32_t q_;
    MessageStore store_;
};

inline bool run_and_check(const Scheme& s, const Field& f, const MessageStore& store,
                          const Scenario& sc, const Query& q, const ClientState& st) {
    Answer ans = s.answer(q, store);
    SideInfo csi = s.retain_csi(compute_Y(f, store, sc));
    auto decoded = s.decode(ans, st, csi);
    return decoded == store.message(sc.theta);
}

/// Accumulates the product of requested domain sizes, saturating; one probe
/// query per scenario prices its coin space without enumerating it.
class CountingSource final : public RandomSource {
public:
    std::uint64_t uniform(std::uint64_t n) override {
        if (n == 0) throw std::invalid_argument("uniform(0)");
        if (product_ > UINT64_MAX / n)
            product_ = UINT64_MAX;
        else
            product_ *= n;
        return 0;
    }
    std::uint64_t product() const { return product_; }

private:
    std::uint64_t product_ = 1;
};

inline std::uint64_t estimate_exhaustive_trials(const Scheme& s,
                                                const std::vector<Scenario>& scenarios,
                                                std::uint64_t store_count) {
    std::uint64_t total = 0;
    for (const auto& sc : scenarios) {
        CountingSource probe;
        (void)s.make_query(sc, probe);
        std::uint64_t per = probe.product();
        if (store_count && per > UINT64_MAX / store_count) return UINT64_MAX;
        per *= store_count;
        if (total > UINT64_MAX - per) return UINT64_MAX;
        total += per;
    }
    return total;
}

}  // namespace detail

/// Replays the scheme across every feasible (theta, S, Lambda), every query
/// coin (exhaustive mode) and either every message store or n sampled ones.
/// Failure count is data, not an error; blowing through max_trials in
/// exhaustive mode is, so callers can fall back to sampling.
inline CorrectnessReport audit_correctness(const Scheme& s, const Field& f, bool exhaustive,
                                           std::uint64_t n_samples = 1000,
                                           std::uint64_t seed = 0,
                                           std::uint64_t max_trials = 0) {
    CorrectnessReport rep;
    rep.message_mode = exhaustive ? "exhaustive" : "sampled";
    const Params p = s.params();
    auto scenarios = enumerate_scenarios(p, s.variant(), PrivacyMode::ThetaSLambda);
    if (exhaustive && max_trials) {
        std::uint64_t est =
            detail::estimate_exhaustive_trials(s, scenarios, detail::StoreOdometer(p).total());
        if (est > max_trials)
            throw EnumerationBudgetExceeded(
                "audit_correctness: exhaustive replay exceeds the trial budget");
    }
    SplitMix64 seeder(seed);
    for (const auto& sc : scenarios) {
        if (exhaustive) {
            TapeSource coins;
            do {
                coins.rewind();
                auto qr = s.make_query(sc, coins);
                detail::StoreOdometer odo(p);
                do {
                    ++rep.trials;
                    if (max_trials && rep.trials > max_trials)
                        throw EnumerationBudgetExceeded(
                            "audit_correctness: exhaustive replay exceeds the trial budget");
                    if (!detail::run_and_check(s, f, odo.store(), sc, qr.query, qr.state))
                        ++rep.failures;
                } while (odo.advance());
            } while (coins.advance());
        } else {
            for (std::uint64_t i = 0; i < n_samples; ++i) {
                SeededSource coins(seeder.next());
                auto qr = s.make_query(sc, coins);
                MessageStore store = sample_messages(p, seeder.next());
                ++rep.trials;
                if (!detail::run_and_check(s, f, store, sc, qr.query, qr.state)) ++rep.failures;
            }
        }
    }
    return rep;
}

/// Exact privacy audit: per conditioning cell, enumerates the coefficient
/// vector (marginalized uniformly in theta_S mode) and every internal coin,
/// accumulating an exact query distribution. Passes iff every pair of cells
/// has total-variation distance exactly zero. Refuses (throws) if a cell
/// exceeds the enumeration budget.
inline PrivacyReport audit_privacy_exact(const Scheme& s, PrivacyMode mode,
                                         std::uint64_t budget = default_enumeration_budget()) {
    PrivacyReport rep;
    rep.method = "exact";
    rep.mode = mode;
    const Params p = s.params();
    auto cells = enumerate_scenarios(p, s.variant(), mode);
    rep.cells = cells.size();
    const std::uint64_t nlam = mode == PrivacyMode::ThetaS ? lambda_count(p.q, p.M) : 1;

    std::vector<QueryDistribution> dists;
    dists.reserve(cells.size());
    for (const auto& cell : cells) {
        {
            // Price the cell before enumerating it.
            Scenario probe_sc = cell;
            if (mode == PrivacyMode::ThetaS) probe_sc.lambda = lambda_at(p.q, p.M, 0);
            detail::CountingSource probe;
            (void)s.make_query(probe_sc, probe);
            if (probe.product() > budget / nlam)
                throw EnumerationBudgetExceeded(
                    "audit_privacy_exact: cell exceeds enumeration budget");
        }
        QueryDistribution dist;
        std::uint64_t outcomes = 0;
        for (std::uint64_t li = 0; li < nlam; ++li) {
            Scenario sc = cell;
            if (mode == PrivacyMode::ThetaS) sc.lambda = lambda_at(p.q, p.M, li);
            Rational lam_weight(1, static_cast<std::int64_t>(nlam));
            TapeSource coins;
            do {
                coins.rewind();
                auto qr = s.make_query(sc, coins);
                if (++outcomes > budget)
                    throw EnumerationBudgetExceeded(
                        "audit_privacy_exact: cell exceeds enumeration budget");
                dist[qr.query.canonical_key()] += lam_weight * coins.leaf_probability();
            } while (coins.advance());
        }
        Rational total(0);
        for (const auto& [k, v] : dist) total += v;
        if (total != Rational(1))
            throw std::logic_error("audit_privacy_exact: cell probabilities do not sum to 1");
        dists.push_back(std::move(dist));
    }

    Rational max_tv(0);
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (std::size_t j = i + 1; j < dists.size(); ++j) {
            Rational tv(0);
            auto it = dists[i].begin();
            auto jt = dists[j].begin();
            while (it != dists[i].end() || jt != dists[j].end()) {
                if (jt == dists[j].end() || (it != dists[i].end() && it->first < jt->first)) {
                    tv += it->second;
                    ++it;
                } else if (it == dists[i].end() || jt->first < it->first) {
                    tv += jt->second;
                    ++jt;
                } else {
                    tv += (it->second - jt->second).abs();
                    ++it;
                    ++jt;
                }
            }
            max_tv = Rational::max(max_tv, tv * Rational(1, 2));
        }
    rep.max_tv = max_tv;
    return rep;
}

/// Statistical fallback for coin spaces too large to enumerate: empirical
/// query distributions per cell, a max pairwise TV estimate, and a
/// chi-square homogeneity test over hash-binned queries. A smoke test, not a
/// proof; the exact audit is the normative gate wherever it fits the budget.
inline PrivacyReport audit_privacy_sampled(const Scheme& s, PrivacyMode mode,
                                           std::uint64_t n_per_cell, std::uint64_t seed,
                                           double p_threshold = 0.01) {
    if (n_per_cell < 100)
        throw std::invalid_argument("audit_privacy_sampled: need at least 100 samples per cell");
    PrivacyReport rep;
    rep.method = "sampled";
    rep.mode = mode;
    rep.samples_per_cell = n_per_cell;
    rep.p_threshold = p_threshold;
    const Params p = s.params();
    auto cells = enumerate_scenarios(p, s.variant(), mode);
    rep.cells = cells.size();
    const std::uint64_t nlam = lambda_count(p.q, p.M);

    constexpr std::uint64_t kBins = 64;
    auto fnv1a = [](const std::string& bytes) {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    };

    std::vector<std::map<std::string, std::uint64_t>> counts(cells.size());
    std::vector<std::vector<std::uint64_t>> bins(cells.size(),
                                                 std::vector<std::uint64_t>(kBins, 0));
    SplitMix64 seeder(seed);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        SeededSource src(seeder.next());
        for (std::uint64_t t = 0; t < n_per_cell; ++t) {
            Scenario sc = cells[ci];
            if (mode == PrivacyMode::ThetaS) sc.lambda = lambda_at(p.q, p.M, src.uniform(nlam));
            auto qr = s.make_query(sc, src);
            std::string key = qr.query.canonical_key();
            ++counts[ci][key];
            ++bins[ci][fnv1a(key) % kBins];
        }
    }

    double max_tv = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (std::size_t j = i + 1; j < counts.size(); ++j) {
            double tv = 0.0;
            for (const auto& [k, c] : counts[i]) {
                auto it = counts[j].find(k);
                double pj = it == counts[j].end() ? 0.0 : double(it->second);
                tv += std::abs(double(c) - pj);
            }
            for (const auto& [k, c] : counts[j])
                if (!counts[i].count(k)) tv += double(c);
            max_tv = std::max(max_tv, tv / (2.0 * double(n_per_cell)));
        }
    rep.max_tv_estimate = max_tv;

    // Chi-square homogeneity over hash bins, merging bins with tiny expected
    // counts so the asymptotics hold.
    std::vector<std::uint64_t> col_tot(kBins, 0);
    for (const auto& b : bins)
        for (std::uint64_t k = 0; k < kBins; ++k) col_tot[k] += b[k];
    const double grand = double(cells.size()) * double(n_per_cell);
    std::vector<std::size_t> keep;
    std::vector<std::size_t> merged;
    for (std::uint64_t k = 0; k < kBins; ++k) {
        double expected = double(col_tot[k]) * double(n_per_cell) / grand;
        if (expected >= 5.0)
            keep.push_back(k);
        else if (col_tot[k] > 0)
            merged.push_back(k);
    }
    const std::size_t ncols = keep.size() + (merged.empty() ? 0 : 1);
    if (ncols >= 2 && cells.size() >= 2) {
        double chi2 = 0.0;
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            auto cell_term = [&](double obs, double colsum) {
                double expected = colsum * double(n_per_cell) / grand;
                double d = obs - expected;
                chi2 += d * d / expected;
            };
            for (auto k : keep) cell_term(double(bins[ci][k]), double(col_tot[k]));
            if (!merged.empty()) {
                double obs = 0, colsum = 0;
                for (auto k : merged) {
                    obs += double(bins[ci][k]);
                    colsum += double(col_tot[k]);
                }
                cell_term(obs, colsum);
            }
        }
        rep.chi_square = chi2;
        rep.dof = double((cells.size() - 1) * (ncols - 1));
        rep.p_value = chi_square_sf(chi2, rep.dof);
    } else {
        // Every sample landed in one bin in every cell: distributions are
        // empirically identical.
        rep.chi_square = 0.0;
        rep.dof = 0.0;
        rep.p_value = 1.0;
    }
    return rep;
}

struct RateReport {
    Rational download_cost{0};
    Rational rate{0};
};

/// Averages the download cost over seeded rounds (constant for every scheme
/// here) and returns L / D as an exact rational. Every transcript must obey
/// the declared-rate identity D = L / rate.
inline RateReport measure_rate(const Scheme& s, const Field& f, std::uint64_t n_rounds,
                               std::uint64_t seed) {
    const Params p = s.params();
    auto scenarios = enumerate_scenarios(p, s.variant(), PrivacyMode::ThetaSLambda);
    SplitMix64 seeder(seed);
    Rational total(0);
    std::uint64_t rounds = 0;
    for (std::uint64_t i = 0; i < n_rounds; ++i) {
        const auto& sc = scenarios[seeder.next() % scenarios.size()];
        MessageStore store = sample_messages(p, seeder.next());
        SeededSource coins(seeder.next());
        auto t = run_round(s, store, f, sc, coins);
        if (t.download_cost != Rational(p.L) / s.rate())
            throw std::logic_error("measure_rate: transcript violates the declared rate");
        total += t.download_cost;
        ++rounds;
    }
    RateReport rep;
    rep.download_cost = total / Rational(static_cast<std::int64_t>(rounds));
    rep.rate = Rational(p.L) / rep.download_cost;
    return rep;
}

struct HalfCsiReport {
    CorrectnessReport retained;  // half-CSI client, must pass
    CorrectnessReport degraded;  // constant in place of the retained half, must fail somewhere
    bool pass() const { return retained.failures == 0 && degraded.failures > 0; }
};

/// Replays a half-CSI scheme with the retained projection only (must still
/// be exhaustively correct) and with the projection zeroed out (must break
/// somewhere, showing the retained half really is consumed).
inline HalfCsiReport audit_half_csi(const Scheme& s, const Field& f) {
    if (s.csi_alpha() != Rational(1, 2))
        throw std::invalid_argument("audit_half_csi: scheme does not use half CSI");
    HalfCsiReport rep;
    rep.retained = audit_correctness(s, f, true);

    rep.degraded.message_mode = "exhaustive";
    const Params p = s.params();
    auto scenarios = enumerate_scenarios(p, s.variant(), PrivacyMode::ThetaSLambda);
    for (const auto& sc : scenarios) {
        TapeSource coins;
        do {
            coins.rewind();
            auto qr = s.make_query(sc, coins);
            detail::StoreOdometer odo(p);
            do {
                ++rep.degraded.trials;
                Answer ans = s.answer(qr.query, odo.store());
                SideInfo csi = s.retain_csi(compute_Y(f, odo.store(), sc));
                for (auto& v : csi.y) v = 0;
                auto decoded = s.decode(ans, qr.state, csi);
                if (decoded != odo.store().message(sc.theta)) ++rep.degraded.failures;
            } while (odo.advance());
        } while (coins.advance());
    }
    return rep;
}

inline void to_json(json& j, const CorrectnessReport& r) {
    j = json{{"message_mode", r.message_mode},
             {"trials", r.trials},
             {"failures", r.failures},
             {"pass", r.pass()}};
}

inline void to_json(json& j, const PrivacyReport& r) {
    j = json{{"method", r.method}, {"mode", to_string(r.mode)}, {"cells", r.cells},
             {"pass", r.pass()}};
    if (r.method == "exact") {
        j["max_tv"] = r.max_tv.str();
    } else {
        j["max_tv_estimate"] = r.max_tv_estimate;
        j["chi_square"] = r.chi_square;
        j["dof"] = r.dof;
        j["p_value"] = r.p_value;
        j["samples_per_cell"] = r.samples_per_cell;
        j["p_threshold"] = r.p_threshold;
    }
}

inline void to_json(json& j, const RateReport& r) {
    j = json{{"download_cost", r.download_cost.str()}, {"rate", r.rate.str()}};
}

}  // namespace pcsilab
