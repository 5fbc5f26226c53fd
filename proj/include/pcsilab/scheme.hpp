#pragma once

#include <any>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcsilab/model.hpp"
#include "pcsilab/rational.hpp"
#include "pcsilab/rng.hpp"

namespace pcsilab {

/// One named group of query rows over a single alphabet. The wire query a
/// server sees is exactly the list of blocks; anything the client needs for
/// decoding stays in its private state.
struct QueryBlock {
    std::string name;
    std::uint32_t field_order = 0;
    std::vector<std::vector<Fe>> rows;
};

struct Query {
    std::string scheme;
    std::vector<QueryBlock> blocks;

    /// Canonical byte string; structurally equal queries collide.
    std::string canonical_key() const {
        std::string k = scheme;
        k.push_back('\0');
        for (const auto& b : blocks) {
            k += b.name;
            k.push_back('\0');
            append_u32(k, b.field_order);
            append_u32(k, static_cast<std::uint32_t>(b.rows.size()));
            for (const auto& r : b.rows) {
                append_u32(k, static_cast<std::uint32_t>(r.size()));
                for (Fe v : r) append_u32(k, v);
            }
        }
        return k;
    }

private:
    static void append_u32(std::string& s, std::uint32_t v) {
        for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
};

/// Answer symbols grouped by alphabet; qary_per_symbol is the download cost
/// of one symbol measured in q-ary units of the base field.
struct AnswerBlock {
    std::uint32_t field_order = 0;
    Rational qary_per_symbol{1};
    std::vector<Fe> symbols;
};

struct Answer {
    std::vector<AnswerBlock> blocks;

    Rational download_cost() const {
        Rational d(0);
        for (const auto& b : blocks)
            d += b.qary_per_symbol * Rational(static_cast<std::int64_t>(b.symbols.size()));
        return d;
    }
};

using ClientState = std::any;

struct QueryResult {
    Query query;
    ClientState state;
};

/// A retrieval protocol. Parameters are fixed and validated at construction;
/// per-round randomness enters through the explicit source, so rounds are
/// reproducible and schemes stay safe to share between threads.
///
/// make_query never sees the message store and answer never sees the client
/// state; the interface shape is what enforces query/message independence.
class Scheme {
public:
    virtual ~Scheme() = default;

    virtual const std::string& name() const = 0;
    virtual Variant variant() const = 0;
    virtual Params params() const = 0;
    virtual Rational rate() const = 0;
    /// Fraction of the side information the decoder consumes.
    virtual Rational csi_alpha() const { return Rational(1); }

    /// Maps the raw side information Y to what the client actually retains.
    virtual SideInfo retain_csi(const std::vector<Fe>& y) const {
        return SideInfo{y, params().q, Rational(1)};
    }

    virtual QueryResult make_query(const Scenario& sc, RandomSource& rng) const = 0;
    virtual Answer answer(const Query& q, const MessageStore& store) const = 0;
    virtual std::vector<Fe> decode(const Answer& ans, const ClientState& st,
                                   const SideInfo& csi) const = 0;
};

struct Transcript {
    Query query;
    Answer answer;
    std::vector<Fe> decoded;
    Rational download_cost;
};

inline Transcript run_round(const Scheme& s, const MessageStore& store, const Field& f,
                            const Scenario& sc, RandomSource& rng) {
    Transcript t;
    auto qr = s.make_query(sc, rng);
    t.query = std::move(qr.query);
    t.answer = s.answer(t.query, store);
    SideInfo csi = s.retain_csi(compute_Y(f, store, sc));
    t.decoded = s.decode(t.answer, qr.state, csi);
    t.download_cost = t.answer.download_cost();
    return t;
}

inline void to_json(json& j, const QueryBlock& b) {
    j = json{{"name", b.name}, {"field", b.field_order}, {"rows", b.rows}};
}

inline void to_json(json& j, const Query& q) {
    j = json{{"scheme", q.scheme}, {"blocks", q.blocks}};
}

inline void to_json(json& j, const AnswerBlock& b) {
    j = json{{"field", b.field_order},
             {"qary_per_symbol", b.qary_per_symbol.str()},
             {"symbols", b.symbols}};
}

inline void to_json(json& j, const Answer& a) { j = json{{"blocks", a.blocks}}; }

inline json transcript_to_json(const std::string& scheme, const Scenario& sc,
                               const Transcript& t) {
    json j;
    j["scheme"] = scheme;
    j["scenario"] = sc;
    j["query"] = t.query;
    j["answer"] = t.answer;
    j["decoded"] = t.decoded;
    j["D"] = t.download_cost.str();
    return j;
}

}  // namespace pcsilab
