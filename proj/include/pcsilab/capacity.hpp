#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pcsilab/model.hpp"
#include "pcsilab/rational.hpp"

namespace pcsilab {

enum class CapacityMode { Sup, Inf, AtQ };

inline std::string to_string(CapacityMode m) {
    switch (m) {
        case CapacityMode::Sup: return "sup";
        case CapacityMode::Inf: return "inf";
        case CapacityMode::AtQ: return "at_q";
    }
    return "?";
}

struct Interval {
    Rational lo, hi;
    bool operator==(const Interval&) const = default;
};

struct Unknown {
    bool operator==(const Unknown&) const = default;
};

/// Exact value, two-sided bound, or an honest "the formula is not pinned
/// down for these parameters". Never interpolates.
using CapacityValue = std::variant<Rational, Interval, Unknown>;

struct CapacityQuery {
    Variant variant = Variant::PcsiII;
    CapacityMode mode = CapacityMode::Sup;
    bool private_coeffs = false;
    std::uint32_t K = 0;
    std::uint32_t M = 0;
    std::uint32_t q = 0;  // AtQ only
};

inline std::string capacity_value_str(const CapacityValue& v) {
    if (std::holds_alternative<Rational>(v)) return std::get<Rational>(v).str();
    if (std::holds_alternative<Interval>(v)) {
        const auto& iv = std::get<Interval>(v);
        return "[" + iv.lo.str() + "," + iv.hi.str() + "]";
    }
    return "unknown";
}

namespace detail {

inline Rational pcsi2_sup(std::uint32_t K, std::uint32_t M) {
    return Rational::max(Rational(2, K), Rational(1, std::int64_t(K) - M + 1));
}

inline Rational pcsi2_inf(std::uint32_t K, std::uint32_t M) {
    return Rational(M, std::int64_t(M - 1) * K);
}

inline Rational pcsi1_sup(std::uint32_t K, std::uint32_t M) {
    return Rational(1, std::int64_t(K) - M);
}

inline Rational pcsi1_inf(std::uint32_t K, std::uint32_t M) {
    // max(1/(K-1), (K - M/(K-M))^-1)
    Rational alt = Rational(std::int64_t(K) - M, std::int64_t(K) * (K - M) - M);
    return Rational::max(Rational(1, std::int64_t(K) - 1), alt);
}

inline Rational pcsi_sup(std::uint32_t K, std::uint32_t M) {
    return Rational::max(Rational(1, std::int64_t(K) - 1), Rational(1, std::int64_t(K) - M + 1));
}

inline Rational pcsi_inf(std::uint32_t K) { return Rational(1, std::int64_t(K) - 1); }

}  // namespace detail

/// Closed-form capacity for every combination the results table pins down;
/// Unknown for anything left open.
inline CapacityValue capacity_value(const CapacityQuery& cq) {
    const std::uint32_t K = cq.K, M = cq.M;
    validate_params(Params{cq.q ? cq.q : 2, K, M, 1}, cq.variant);

    if (cq.private_coeffs) {
        switch (cq.variant) {
            case Variant::PcsiII:
                // Field-independent: equal to the infimum for every q.
                return detail::pcsi2_inf(K, M);
            case Variant::Pcsi:
                return detail::pcsi_inf(K);
            case Variant::PcsiI:
                switch (cq.mode) {
                    case CapacityMode::Sup: return detail::pcsi1_inf(K, M);
                    case CapacityMode::Inf: {
                        Rational lo(1, std::int64_t(K) - 1);
                        Rational hi = K >= 3 ? Rational::min(detail::pcsi1_inf(K, M),
                                                             Rational(1, std::int64_t(K) - 2))
                                             : detail::pcsi1_inf(K, M);
                        return Interval{lo, hi};
                    }
                    case CapacityMode::AtQ: return Unknown{};
                }
        }
        return Unknown{};
    }

    switch (cq.variant) {
        case Variant::PcsiII:
            switch (cq.mode) {
                case CapacityMode::Sup: return detail::pcsi2_sup(K, M);
                case CapacityMode::Inf: return detail::pcsi2_inf(K, M);
                case CapacityMode::AtQ:
                    if (cq.q == 2) return detail::pcsi2_inf(K, M);
                    if (M == 2) return Rational(2, K);  // sup = inf, field-independent
                    if (M == K) return Rational(1);
                    if (M == 3 && K == 4) return Rational(1, 2);
                    return Unknown{};
            }
            break;
        case Variant::PcsiI:
            switch (cq.mode) {
                case CapacityMode::Sup: return detail::pcsi1_sup(K, M);
                case CapacityMode::Inf: return detail::pcsi1_inf(K, M);
                case CapacityMode::AtQ:
                    if (cq.q == 2) return detail::pcsi1_inf(K, M);
                    if (M == K - 1) return Rational(1);  // sup = inf
                    return Unknown{};
            }
            break;
        case Variant::Pcsi:
            switch (cq.mode) {
                case CapacityMode::Sup: return detail::pcsi_sup(K, M);
                case CapacityMode::Inf: return detail::pcsi_inf(K);
                case CapacityMode::AtQ:
                    if (cq.q == 2) return detail::pcsi_inf(K);
                    if (M == 1) return detail::pcsi_inf(K);  // sup = inf
                    return Unknown{};
            }
            break;
    }
    return Unknown{};
}

struct RedundancyValue {
    enum class Kind { Exact, UpperBound } kind = Kind::Exact;
    Rational value{0};

    std::string str() const {
        return kind == Kind::Exact ? value.str() : ("<=" + value.str());
    }
    bool operator==(const RedundancyValue&) const = default;
};

/// Redundant fraction of the side information at supremum capacity.
inline RedundancyValue redundancy_value(Variant v, std::uint32_t K, std::uint32_t M) {
    validate_params(Params{2, K, M, 1}, v);
    switch (v) {
        case Variant::PcsiII:
            if (M > 1 && 2 * M <= K + 2) return {RedundancyValue::Kind::Exact, Rational(1, 2)};
            return {RedundancyValue::Kind::Exact, Rational(0)};
        case Variant::PcsiI:
            return {RedundancyValue::Kind::Exact, Rational(0)};
        case Variant::Pcsi:
            if (M == 2) return {RedundancyValue::Kind::Exact, Rational(1, 2)};
            if (M >= 3 && 2 * M <= K + 2)
                return {RedundancyValue::Kind::UpperBound, Rational(1, M)};
            return {RedundancyValue::Kind::Exact, Rational(0)};
    }
    throw std::logic_error("redundancy_value: unreachable");
}

struct GapReport {
    Rational measured_rate{0};
    CapacityValue reference;
    CapacityMode reference_mode = CapacityMode::AtQ;
    std::optional<Rational> gap;  // reference - rate, when reference is a value
    bool capacity_achieving = false;
    bool unknown = false;
};

/// Compares a measured rate against the capacity formula for the scheme's
/// field when that is pinned down, else against the supremum.
inline GapReport gap_report(Variant variant, const Params& p, const Rational& measured) {
    GapReport rep;
    rep.measured_rate = measured;
    CapacityQuery cq{variant, CapacityMode::AtQ, false, p.K, p.M, p.q};
    CapacityValue v = capacity_value(cq);
    rep.reference_mode = CapacityMode::AtQ;
    if (std::holds_alternative<Unknown>(v)) {
        cq.mode = CapacityMode::Sup;
        v = capacity_value(cq);
        rep.reference_mode = CapacityMode::Sup;
    }
    rep.reference = v;
    if (std::holds_alternative<Rational>(v)) {
        rep.gap = std::get<Rational>(v) - measured;
        rep.capacity_achieving = rep.gap->is_zero();
    } else {
        rep.unknown = true;
    }
    return rep;
}

struct CapacityRow {
    std::string variant;
    std::string mode;
    std::uint32_t K, M;
    std::string value;
    std::string source;
};

/// One row per (variant, mode, K, M) with exact rationals. Mirrors the
/// layout of the published results table.
inline std::vector<CapacityRow> capacity_table(std::uint32_t K_min, std::uint32_t K_max,
                                               std::uint32_t M_min = 1, std::uint32_t M_max = 0) {
    std::vector<CapacityRow> rows;
    struct Entry {
        Variant v;
        CapacityMode m;
        bool pri;
        const char* label;
        const char* source;
    };
    const Entry entries[] = {
        {Variant::PcsiI, CapacityMode::Sup, false, "sup", "prior"},
        {Variant::PcsiI, CapacityMode::Inf, false, "inf", "thm8"},
        {Variant::PcsiI, CapacityMode::Sup, true, "pri_sup", "thm9"},
        {Variant::PcsiI, CapacityMode::Inf, true, "pri_inf", "thm9"},
        {Variant::PcsiII, CapacityMode::Sup, false, "sup", "thm1"},
        {Variant::PcsiII, CapacityMode::Inf, false, "inf", "thm3"},
        {Variant::PcsiII, CapacityMode::Sup, true, "pri", "thm6"},
        {Variant::Pcsi, CapacityMode::Sup, false, "sup", "thm10"},
        {Variant::Pcsi, CapacityMode::Inf, false, "inf", "thm12"},
        {Variant::Pcsi, CapacityMode::Sup, true, "pri", "thm14"},
    };
    for (std::uint32_t K = K_min; K <= K_max; ++K) {
        std::uint32_t m_hi = M_max ? M_max : K;
        for (std::uint32_t M = M_min; M <= m_hi && M <= K; ++M) {
            for (const auto& e : entries) {
                if (e.v == Variant::PcsiI && M > K - 1) continue;
                if (e.v == Variant::PcsiII && M < 2) continue;
                CapacityQuery cq{e.v, e.m, e.pri, K, M, 0};
                rows.push_back(CapacityRow{to_string(e.v), e.label, K, M,
                                           capacity_value_str(capacity_value(cq)), e.source});
            }
        }
    }
    return rows;
}

inline std::string capacity_table_csv(const std::vector<CapacityRow>& rows) {
    auto cell = [](const std::string& v) {
        return v.find(',') == std::string::npos ? v : '"' + v + '"';
    };
    std::ostringstream out;
    out << "variant,mode,K,M,value,source\n";
    for (const auto& r : rows)
        out << r.variant << ',' << r.mode << ',' << r.K << ',' << r.M << ',' << cell(r.value)
            << ',' << r.source << '\n';
    return out.str();
}

}  // namespace pcsilab
