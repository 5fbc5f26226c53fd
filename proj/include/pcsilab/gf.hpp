#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcsilab {

/// Field element, encoded as an integer in [0, q). The encoding is the base-p
/// value of the little-endian coefficient vector of the polynomial
/// representation; it is the normative serialization used by all file formats.
using Fe = std::uint32_t;

namespace detail {

inline bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Remainder of a mod m over F_p[x]; both little-endian, m monic.
inline std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a,
                                           const std::vector<std::uint32_t>& m,
                                           std::uint32_t p) {
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        std::uint32_t lead = a.back();
        std::size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (std::size_t j = 0; j <= dm; ++j) {
                std::uint32_t sub = (lead * m[j]) % p;
                std::uint32_t& c = a[shift + j];
                c = (c + p - sub) % p;
            }
        }
        a.pop_back();
    }
    return a;
}

inline bool poly_divides(const std::vector<std::uint32_t>& d,
                         const std::vector<std::uint32_t>& a, std::uint32_t p) {
    auto r = poly_mod(a, d, p);
    for (auto c : r)
        if (c != 0) return false;
    return true;
}

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree <= deg/2.
inline bool is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p) {
    const std::size_t deg = poly.size() - 1;
    if (deg == 0) return false;
    if (deg == 1) return true;
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t t = 0; t < count; ++t) {
            std::vector<std::uint32_t> cand(d + 1, 0);
            std::uint64_t v = t;
            for (std::size_t i = 0; i < d; ++i) { cand[i] = v % p; v /= p; }
            cand[d] = 1;
            if (poly_divides(cand, poly, p)) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Arithmetic context for F_{p^n}. Immutable after construction and safe to
/// share across threads; all operations are pure functions of their inputs.
///
/// The modulus is the lexicographically smallest monic irreducible of degree
/// n over F_p (coefficients compared from degree n-1 down to the constant
/// term), so contexts are identical across runs and implementations. Small
/// fields get full add/mul tables; larger ones compute per operation.
class Field {
public:
    /// Builds F_{p^n} with the canonical modulus.
    Field(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
        if (!detail::is_prime(p)) throw std::invalid_argument("Field: p is not prime");
        if (n < 1) throw std::invalid_argument("Field: n must be >= 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            q *= p;
            if (q > (1ULL << 20)) throw std::invalid_argument("Field: q exceeds 2^20");
        }
        q_ = static_cast<std::uint32_t>(q);
        modulus_ = find_modulus(p, n);
        if (q_ <= kTableLimit) build_tables();
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t q() const { return q_; }
    /// Monic modulus, little-endian, length n+1.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Fe zero() const { return 0; }
    Fe one() const { return n_ == 0 ? 0 : 1; }

    Fe element(std::uint64_t v) const {
        if (v >= q_) throw std::out_of_range("Field: element index out of range");
        return static_cast<Fe>(v);
    }

    std::vector<std::uint32_t> coeffs(Fe a) const {
        std::vector<std::uint32_t> c(n_);
        for (std::uint32_t i = 0; i < n_; ++i) { c[i] = a % p_; a /= p_; }
        return c;
    }

    Fe from_coeffs(const std::vector<std::uint32_t>& c) const {
        Fe a = 0;
        for (std::size_t i = c.size(); i-- > 0;) a = a * p_ + (c[i] % p_);
        return a;
    }

    Fe add(Fe a, Fe b) const {
        if (tables_) return tables_->add[std::size_t(a) * q_ + b];
        return add_impl(a, b);
    }
    Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }
    Fe neg(Fe a) const {
        if (p_ == 2) return a;
        Fe r = 0, pw = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            std::uint32_t d = a % p_;
            r += ((p_ - d) % p_) * pw;
            a /= p_;
            pw *= p_;
        }
        return r;
    }
    Fe mul(Fe a, Fe b) const {
        if (tables_) return tables_->mul[std::size_t(a) * q_ + b];
        return mul_impl(a, b);
    }
    Fe inv(Fe a) const {
        if (a == 0) throw std::domain_error("Field: inverse of zero");
        if (tables_) return tables_->inv[a];
        return pow(a, q_ - 2);
    }
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }
    Fe pow(Fe a, std::uint64_t e) const {
        Fe r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    bool operator==(const Field& o) const {
        return p_ == o.p_ && n_ == o.n_ && modulus_ == o.modulus_;
    }

private:
    static constexpr std::uint32_t kTableLimit = 2048;

    static std::vector<std::uint32_t> find_modulus(std::uint32_t p, std::uint32_t n) {
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < n; ++i) count *= p;
        // Ascending integer encoding varies the low coefficients fastest, so
        // this scans tuples (c_{n-1},...,c_0) in lexicographic order.
        for (std::uint64_t t = 0; t < count; ++t) {
            std::vector<std::uint32_t> cand(n + 1, 0);
            std::uint64_t v = t;
            for (std::uint32_t i = 0; i < n; ++i) { cand[i] = v % p; v /= p; }
            cand[n] = 1;
            if (detail::is_irreducible(cand, p)) return cand;
        }
        throw std::logic_error("Field: no irreducible modulus found");
    }

    Fe add_impl(Fe a, Fe b) const {
        if (p_ == 2) return a ^ b;
        Fe r = 0, pw = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            r += ((a % p_ + b % p_) % p_) * pw;
            a /= p_;
            b /= p_;
            pw *= p_;
        }
        return r;
    }

    Fe mul_impl(Fe a, Fe b) const {
        if (a == 0 || b == 0) return 0;
        auto ca = coeffs(a), cb = coeffs(b);
        std::vector<std::uint32_t> prod(2 * n_ - 1, 0);
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (ca[i] == 0) continue;
            for (std::uint32_t j = 0; j < n_; ++j)
                prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
        }
        prod = detail::poly_mod(prod, modulus_, p_);
        prod.resize(n_, 0);
        return from_coeffs(prod);
    }

    struct Tables {
        std::vector<Fe> add, mul, inv;
    };

    void build_tables() {
        auto t = std::make_shared<Tables>();
        t->add.resize(std::size_t(q_) * q_);
        t->mul.resize(std::size_t(q_) * q_);
        t->inv.resize(q_, 0);
        for (Fe a = 0; a < q_; ++a) {
            for (Fe b = a; b < q_; ++b) {
                Fe s = add_impl(a, b), m = mul_impl(a, b);
                t->add[std::size_t(a) * q_ + b] = s;
                t->add[std::size_t(b) * q_ + a] = s;
                t->mul[std::size_t(a) * q_ + b] = m;
                t->mul[std::size_t(b) * q_ + a] = m;
                if (m == 1) { t->inv[a] = b; t->inv[b] = a; }
            }
        }
        tables_ = std::move(t);
    }

    std::uint32_t p_, n_, q_;
    std::vector<std::uint32_t> modulus_;
    std::shared_ptr<const Tables> tables_;
};

}  // namespace pcsilab
