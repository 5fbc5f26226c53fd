#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcsilab/gf.hpp"
#include "pcsilab/linalg.hpp"

namespace pcsilab {

/// Degree-l extension of a base field F_q, together with the F_q-linear codec
/// between length-l blocks of F_q symbols and single F_{q^l} symbols. Schemes
/// that treat a message as a handful of large-field symbols go through this.
///
/// For prime q the codec is the identity on digit vectors. For q = p^n the
/// construction finds an embedding of F_q into F_{p^{nl}} (first root of the
/// base modulus, in element order) and the first basis element whose powers
/// span the extension over the embedded base field.
class ExtField {
public:
    ExtField(const Field& base, std::uint32_t l)
        : base_(base), ext_(base.p(), base.n() * l), l_(l) {
        if (l < 1) throw std::invalid_argument("ExtField: l must be >= 1");
        if (base_.n() > 1) build_general();
    }

    const Field& base() const { return base_; }
    const Field& ext() const { return ext_; }
    std::uint32_t l() const { return l_; }

    /// Field embedding F_q -> F_{q^l}.
    Fe embed(Fe c) const {
        if (base_.n() == 1) return c;
        return embed_[c];
    }

    /// Packs l base-field symbols into one extension symbol (F_q-linear).
    Fe pack(std::span<const Fe> chunk) const {
        if (chunk.size() != l_) throw std::invalid_argument("ExtField: chunk length");
        if (base_.n() == 1) {
            Fe v = 0;
            for (std::size_t i = chunk.size(); i-- > 0;) v = v * base_.p() + chunk[i];
            return v;
        }
        Fe acc = 0;
        for (std::uint32_t j = 0; j < l_; ++j)
            acc = ext_.add(acc, ext_.mul(embed_[chunk[j]], beta_pow_[j]));
        return acc;
    }

    std::vector<Fe> unpack(Fe v) const {
        if (base_.n() == 1) {
            std::vector<Fe> c(l_);
            for (std::uint32_t i = 0; i < l_; ++i) { c[i] = v % base_.p(); v /= base_.p(); }
            return c;
        }
        return unpack_[v];
    }

private:
    void build_general() {
        const std::uint32_t q = base_.q(), Q = ext_.q(), p = base_.p(), n = base_.n();
        // Root of the base modulus inside the extension, first in element order.
        const auto& mod = base_.modulus();
        Fe root = 0;
        bool found = false;
        for (Fe t = 0; t < Q && !found; ++t) {
            Fe acc = 0;
            for (std::size_t i = mod.size(); i-- > 0;)
                acc = ext_.add(ext_.mul(acc, t), static_cast<Fe>(mod[i] % p));
            if (acc == 0) { root = t; found = true; }
        }
        if (!found) throw std::logic_error("ExtField: no embedding root");

        std::vector<Fe> pw(n);
        Fe rp = ext_.one();
        for (std::uint32_t i = 0; i < n; ++i) { pw[i] = rp; rp = ext_.mul(rp, root); }
        embed_.assign(q, 0);
        for (Fe e = 0; e < q; ++e) {
            Fe acc = 0, v = e;
            for (std::uint32_t i = 0; i < n; ++i) {
                std::uint32_t digit = v % p;
                v /= p;
                if (digit) acc = ext_.add(acc, ext_.mul(static_cast<Fe>(digit), pw[i]));
            }
            embed_[e] = acc;
        }

        // First beta whose powers 1, beta, ..., beta^{l-1} are independent
        // over the embedded base field, checked as an F_p rank condition.
        const std::uint32_t nl = ext_.n();
        for (Fe beta = 0; beta < Q; ++beta) {
            std::vector<Fe> powers(l_);
            Fe bp = ext_.one();
            for (std::uint32_t j = 0; j < l_; ++j) { powers[j] = bp; bp = ext_.mul(bp, beta); }
            Matrix m(nl, nl);
            for (std::uint32_t j = 0; j < l_; ++j)
                for (std::uint32_t i = 0; i < n; ++i) {
                    // Column (j*n + i): embed(y^i) * beta^j as F_p coefficients.
                    Fe val = ext_.mul(embed_base_power(i), powers[j]);
                    auto c = ext_.coeffs(val);
                    for (std::uint32_t r = 0; r < nl; ++r) m.at(r, j * n + i) = c[r] % p;
                }
            Field fp(p, 1);
            if (mat_rank(fp, m) == nl) {
                beta_pow_ = std::move(powers);
                build_unpack();
                return;
            }
        }
        throw std::logic_error("ExtField: no spanning basis element");
    }

    Fe embed_base_power(std::uint32_t i) const {
        // embed(y^i) where y is the residue of x in the base field.
        Fe y = base_.element(base_.p());
        return embed_[base_.pow(y, i)];
    }

    void build_unpack() {
        const std::uint32_t Q = ext_.q();
        unpack_.assign(Q, {});
        std::vector<Fe> chunk(l_, 0);
        // Enumerate all chunks; the packing is a bijection.
        std::uint64_t total = 1;
        for (std::uint32_t j = 0; j < l_; ++j) total *= base_.q();
        for (std::uint64_t t = 0; t < total; ++t) {
            std::uint64_t v = t;
            for (std::uint32_t j = 0; j < l_; ++j) { chunk[j] = v % base_.q(); v /= base_.q(); }
            Fe packed = pack(chunk);
            if (!unpack_[packed].empty()) throw std::logic_error("ExtField: codec not injective");
            unpack_[packed] = chunk;
        }
    }

    Field base_;
    Field ext_;
    std::uint32_t l_;
    std::vector<Fe> embed_;              // base element -> extension element
    std::vector<Fe> beta_pow_;           // beta^0 .. beta^{l-1}
    std::vector<std::vector<Fe>> unpack_;
};

/// Packs a length M*l message into M extension symbols.
inline std::vector<Fe> pack_message(const ExtField& e, std::span<const Fe> msg,
                                    std::uint32_t chunks) {
    if (msg.size() != std::size_t(chunks) * e.l())
        throw std::invalid_argument("pack_message: length mismatch");
    std::vector<Fe> out(chunks);
    for (std::uint32_t c = 0; c < chunks; ++c)
        out[c] = e.pack(msg.subspan(std::size_t(c) * e.l(), e.l()));
    return out;
}

inline std::vector<Fe> unpack_message(const ExtField& e, std::span<const Fe> packed) {
    std::vector<Fe> out;
    out.reserve(packed.size() * e.l());
    for (Fe v : packed) {
        auto c = e.unpack(v);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

}  // namespace pcsilab
