#pragma once

// Finite fields F_{p^k}. Prime fields use direct modular arithmetic; proper
// extensions are built from a user-supplied modulus and use log/antilog
// tables, so q = p^k is capped at 2^16 when k > 1.

#include <perfps/error.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace perfps {

/// An element of a FiniteField. For k > 1 the value packs the coefficient
/// vector over F_p in base p (digit i is the coefficient of g^i, where g is
/// the class of x modulo the field's modulus).
struct FieldElem {
    std::uint32_t value = 0;

    friend constexpr bool operator==(FieldElem, FieldElem) = default;
    friend constexpr auto operator<=>(FieldElem, FieldElem) = default;
};

inline constexpr std::uint32_t kDefaultDenominatorCap = 64;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace detail {

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t result = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1U) result = result * base % mod;
        base = base * base % mod;
        exp >>= 1U;
    }
    return result;
}

// Dense polynomials over F_p, coefficient i at index i, trailing zeros trimmed.
using DensePoly = std::vector<std::uint32_t>;

inline void trim(DensePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic b.
inline DensePoly poly_mod(DensePoly a, const DensePoly& b, std::uint32_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            const std::uint64_t sub = lead * b[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

} // namespace detail

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

/// Context for arithmetic in F_{p^k}. Immutable after construction and safe
/// to share between threads.
class FiniteField {
public:
    /// `modulus` lists coefficients from degree 0 upward and must be given
    /// exactly when k > 1. A non-monic modulus is rescaled to monic.
    static FieldPtr make(std::uint32_t p, std::uint32_t k = 1,
                         std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                         std::uint32_t denominator_cap = kDefaultDenominatorCap) {
        return FieldPtr(new FiniteField(p, k, std::move(modulus), denominator_cap));
    }

    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return k_; }
    std::uint32_t order() const noexcept { return q_; }
    /// Monic modulus, low degree first; empty for prime fields.
    std::span<const std::uint32_t> modulus() const noexcept { return modulus_; }
    std::uint32_t denominator_cap() const noexcept { return denominator_cap_; }

    FieldElem zero() const noexcept { return {0}; }
    FieldElem one() const noexcept { return {1}; }
    /// Class of x; only meaningful when k > 1.
    FieldElem generator() const noexcept { return {k_ > 1 ? p_ : 0}; }

    /// Image of an integer under Z -> F_p -> F_{p^k}.
    FieldElem from_int(std::int64_t n) const noexcept {
        const auto p = static_cast<std::int64_t>(p_);
        return {static_cast<std::uint32_t>(((n % p) + p) % p)};
    }

    FieldElem from_digits(std::span<const std::uint32_t> digits) const {
        if (digits.size() > k_) throw Error(Errc::invalid_argument, "too many digits for field element");
        std::uint64_t v = 0;
        for (std::size_t i = digits.size(); i-- > 0;) v = v * p_ + digits[i] % p_;
        return {static_cast<std::uint32_t>(v)};
    }

    std::vector<std::uint32_t> digits(FieldElem a) const {
        std::vector<std::uint32_t> d(k_);
        std::uint32_t v = a.value;
        for (std::uint32_t i = 0; i < k_; ++i) {
            d[i] = v % p_;
            v /= p_;
        }
        return d;
    }

    bool in_prime_field(FieldElem a) const noexcept { return a.value < p_; }
    bool is_zero(FieldElem a) const noexcept { return a.value == 0; }

    FieldElem add(FieldElem a, FieldElem b) const noexcept {
        if (k_ == 1) return {static_cast<std::uint32_t>((std::uint64_t{a.value} + b.value) % p_)};
        if (p_ == 2) return {a.value ^ b.value};
        if (!add_table_.empty()) return {add_table_[a.value * q_ + b.value]};
        return digitwise_add(a, b);
    }

    FieldElem neg(FieldElem a) const noexcept {
        if (k_ == 1) return {a.value == 0 ? 0 : p_ - a.value};
        if (p_ == 2) return a;
        std::uint32_t v = a.value, out = 0, place = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            const std::uint32_t d = v % p_;
            out += ((p_ - d) % p_) * place;
            v /= p_;
            place *= p_;
        }
        return {out};
    }

    FieldElem sub(FieldElem a, FieldElem b) const noexcept { return add(a, neg(b)); }

    FieldElem mul(FieldElem a, FieldElem b) const noexcept {
        if (k_ == 1) return {static_cast<std::uint32_t>(std::uint64_t{a.value} * b.value % p_)};
        if (a.value == 0 || b.value == 0) return {0};
        std::uint32_t e = log_[a.value] + log_[b.value];
        if (e >= q_ - 1) e -= q_ - 1;
        return {exp_[e]};
    }

    FieldElem inv(FieldElem a) const {
        if (a.value == 0) throw Error(Errc::division_by_zero, "inverse of zero");
        if (k_ == 1) return {static_cast<std::uint32_t>(detail::mod_pow(a.value, p_ - 2, p_))};
        return {exp_[(q_ - 1 - log_[a.value]) % (q_ - 1)]};
    }

    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    /// a^n for an integer n >= 0 (0^0 = 1).
    FieldElem pow(FieldElem a, std::uint64_t n) const noexcept {
        if (n == 0) return one();
        if (a.value == 0) return zero();
        if (k_ == 1) return {static_cast<std::uint32_t>(detail::mod_pow(a.value, n, p_))};
        const std::uint64_t e = static_cast<std::uint64_t>(log_[a.value]) * (n % (q_ - 1)) % (q_ - 1);
        return {exp_[e]};
    }

    /// a^(p^n); negative n uses the inverse of Frobenius, which on F_{p^k}
    /// equals a^(p^(n mod k)).
    FieldElem frobenius(FieldElem a, std::int64_t n) const noexcept {
        if (k_ == 1 || a.value == 0) return a;
        const auto kk = static_cast<std::int64_t>(k_);
        const auto shift = static_cast<std::uint64_t>(((n % kk) + kk) % kk);
        const std::uint64_t e = static_cast<std::uint64_t>(log_[a.value]) *
                                detail::mod_pow(p_, shift, q_ - 1) % (q_ - 1);
        return {exp_[e]};
    }

    /// Every element, in encoding order. Intended for brute-force searches
    /// over small fields.
    std::vector<FieldElem> elements() const {
        std::vector<FieldElem> out(q_);
        for (std::uint32_t v = 0; v < q_; ++v) out[v] = {v};
        return out;
    }

    friend bool operator==(const FiniteField& a, const FiniteField& b) noexcept {
        return a.p_ == b.p_ && a.k_ == b.k_ && a.modulus_ == b.modulus_;
    }

private:
    FiniteField(std::uint32_t p, std::uint32_t k, std::optional<std::vector<std::uint32_t>> modulus,
                std::uint32_t denominator_cap)
        : p_(p), k_(k), denominator_cap_(denominator_cap) {
        if (!is_prime(p)) throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
        if (k == 0) throw Error(Errc::degree_mismatch, "extension degree must be at least 1");
        if (k == 1) {
            if (modulus) throw Error(Errc::degree_mismatch, "prime fields take no modulus");
            q_ = p;
            return;
        }
        if (!modulus) throw Error(Errc::degree_mismatch, "k > 1 requires a modulus");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            q *= p;
            if (q > (1U << 16)) throw Error(Errc::field_too_large, "extension fields are limited to 2^16 elements");
        }
        q_ = static_cast<std::uint32_t>(q);

        detail::DensePoly m(modulus->begin(), modulus->end());
        for (auto& c : m) c %= p;
        detail::trim(m);
        if (m.size() != k + 1)
            throw Error(Errc::degree_mismatch, "modulus degree differs from extension degree");
        const std::uint64_t lead_inv = detail::mod_pow(m.back(), p - 2, p);
        for (auto& c : m) c = static_cast<std::uint32_t>(c * lead_inv % p);
        modulus_ = m;
        if (!modulus_irreducible()) throw Error(Errc::reducible_modulus, "modulus has a nontrivial factor");
        build_tables();
    }

    // No monic factor of degree 1..k/2 divides the modulus.
    bool modulus_irreducible() const {
        for (std::uint32_t d = 1; 2 * d <= k_; ++d) {
            std::uint64_t count = 1;
            for (std::uint32_t i = 0; i < d; ++i) count *= p_;
            for (std::uint64_t code = 0; code < count; ++code) {
                detail::DensePoly f(d + 1);
                std::uint64_t c = code;
                for (std::uint32_t i = 0; i < d; ++i) {
                    f[i] = static_cast<std::uint32_t>(c % p_);
                    c /= p_;
                }
                f[d] = 1;
                if (detail::poly_mod(modulus_, f, p_).empty()) return false;
            }
        }
        return true;
    }

    FieldElem digitwise_add(FieldElem a, FieldElem b) const noexcept {
        std::uint32_t x = a.value, y = b.value, out = 0, place = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            out += ((x % p_ + y % p_) % p_) * place;
            x /= p_;
            y /= p_;
            place *= p_;
        }
        return {out};
    }

    FieldElem slow_mul(FieldElem a, FieldElem b) const {
        const auto da = digits(a), db = digits(b);
        detail::DensePoly prod(2 * k_, 0);
        for (std::uint32_t i = 0; i < k_; ++i)
            for (std::uint32_t j = 0; j < k_; ++j)
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{da[i]} * db[j]) % p_);
        auto r = detail::poly_mod(std::move(prod), modulus_, p_);
        return from_digits(r);
    }

    FieldElem slow_pow(FieldElem a, std::uint64_t n) const {
        FieldElem r = one();
        while (n > 0) {
            if (n & 1U) r = slow_mul(r, a);
            a = slow_mul(a, a);
            n >>= 1U;
        }
        return r;
    }

    void build_tables() {
        const std::uint32_t order = q_ - 1;
        std::vector<std::uint32_t> prime_factors;
        std::uint32_t n = order;
        for (std::uint32_t d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                prime_factors.push_back(d);
                while (n % d == 0) n /= d;
            }
        }
        if (n > 1) prime_factors.push_back(n);

        std::uint32_t primitive = 0;
        for (std::uint32_t cand = 2; cand < q_ && primitive == 0; ++cand) {
            const bool ok = std::all_of(prime_factors.begin(), prime_factors.end(), [&](std::uint32_t r) {
                return slow_pow({cand}, order / r).value != 1;
            });
            if (ok) primitive = cand;
        }

        exp_.assign(order, 0);
        log_.assign(q_, 0);
        FieldElem x = one();
        for (std::uint32_t e = 0; e < order; ++e) {
            exp_[e] = x.value;
            log_[x.value] = e;
            x = slow_mul(x, {primitive});
        }
        if (p_ != 2 && q_ <= 256) {
            add_table_.resize(std::size_t{q_} * q_);
            for (std::uint32_t a = 0; a < q_; ++a)
                for (std::uint32_t b = 0; b < q_; ++b)
                    add_table_[std::size_t{a} * q_ + b] = digitwise_add({a}, {b}).value;
        }
    }

    std::uint32_t p_;
    std::uint32_t k_;
    std::uint32_t q_ = 0;
    std::uint32_t denominator_cap_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> add_table_;
};

/// Free-function spelling of FiniteField::make.
inline FieldPtr make_field(std::uint32_t p, std::uint32_t k = 1,
                           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
    return FiniteField::make(p, k, std::move(modulus));
}

} // namespace perfps
