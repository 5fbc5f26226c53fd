#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "pcsilab/schemes/f3.hpp"
#include "pcsilab/schemes/generic.hpp"
#include "pcsilab/schemes/grs.hpp"
#include "pcsilab/schemes/halfdl.hpp"
#include "pcsilab/schemes/ia.hpp"
#include "pcsilab/schemes/mk.hpp"
#include "pcsilab/schemes/twostep.hpp"
#include "pcsilab/tower.hpp"

namespace pcsilab {

/// Decomposes q = p^n with p prime.
inline std::pair<std::uint32_t, std::uint32_t> factor_prime_power(std::uint32_t q) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    for (std::uint32_t p = 2; p * p <= q; ++p) {
        if (q % p) continue;
        std::uint32_t n = 0, v = q;
        while (v % p == 0) { v /= p; ++n; }
        if (v != 1) throw std::invalid_argument("q is not a prime power");
        return {p, n};
    }
    return {q, 1};  // q itself prime
}

inline Field make_field(std::uint32_t q) {
    auto [p, n] = factor_prime_power(q);
    return Field(p, n);
}

/// Builds any catalog scheme by name. Vector banks are searched internally
/// with the given seed, so a (name, q, K, M, l, seed) tuple pins the scheme
/// down completely.
inline std::unique_ptr<Scheme> build_scheme(const std::string& name, std::uint32_t q,
                                            std::uint32_t K, std::uint32_t M,
                                            std::uint32_t l = 0, std::uint64_t seed = 0,
                                            std::uint32_t search_budget = 64) {
    if (name == "f3_m3k4") {
        if ((q && q != 3) || (K && K != 4) || (M && M != 3))
            throw std::invalid_argument("f3_m3k4 is fixed at q=3, K=4, M=3");
        return make_f3_m3k4();
    }
    Field f = make_field(q);
    if (name == "ia_pcsi2") return make_ia_pcsi2(Tower(f), K, M);
    if (name == "halfdl_pcsi") return make_halfdl_pcsi(Tower(f), K, M);
    if (name == "grs_pcsi1") return make_grs_pcsi1(f, K, M);
    if (name == "modgrs_pcsi2") return make_modgrs_pcsi2(f, K, M);
    if (name == "combined_pcsi") return make_combined_pcsi(f, K, M);
    if (name == "mk_pcsi2") {
        if (M && M != K) throw std::invalid_argument("mk_pcsi2 requires M = K");
        return make_mk_pcsi2(f, K);
    }
    if (name == "generic_pcsi2" || name == "generic_pcsi2_private") {
        bool priv = name == "generic_pcsi2_private";
        auto bank = search_vectors(f, K, M, priv ? BankMode::Pcsi2Private : BankMode::Pcsi2, seed,
                                   l, search_budget);
        return make_generic_pcsi2(f, K, M, priv, std::move(bank));
    }
    if (name == "generic_pcsi1" || name == "generic_pcsi1_private") {
        bool priv = name == "generic_pcsi1_private";
        auto bank = search_vectors(f, K, M, priv ? BankMode::Pcsi1Private : BankMode::Pcsi1, seed,
                                   l, search_budget);
        return make_generic_pcsi1(f, K, M, priv, std::move(bank));
    }
    if (name == "twostep_pcsi1") {
        std::optional<VectorBank> inner;
        if (K - M >= 2)
            inner = search_vectors(f, K, K - M, BankMode::Pcsi2Private, seed, l, search_budget);
        return make_twostep_pcsi1(f, K, M, std::move(inner));
    }
    throw std::invalid_argument("unknown scheme: " + name);
}

}  // namespace pcsilab
