#pragma once

// Exponents in Z[1/p]_{>=0}, stored as num / p^e with e = 0 or p not dividing
// num. Numerators are arbitrary precision because composing series
// multiplies exponents.

#include <perfps/error.hpp>
#include <perfps/field.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace perfps {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

inline BigInt pow_int(std::uint32_t base, std::uint64_t e) {
    BigInt r = 1;
    BigInt b = base;
    while (e > 0) {
        if (e & 1U) r *= b;
        b *= b;
        e >>= 1U;
    }
    return r;
}

// Multiplicity of p in n > 0, dividing it out of n.
inline std::int64_t strip_p(BigInt& n, std::uint32_t p) {
    std::int64_t v = 0;
    while (n != 0) {
        BigInt q, r;
        boost::multiprecision::divide_qr(n, BigInt(p), q, r);
        if (r != 0) break;
        n = std::move(q);
        ++v;
    }
    return v;
}

} // namespace detail

class Exponent {
public:
    /// Zero exponent for characteristic p.
    explicit Exponent(std::uint32_t p = 2) : p_(p) {}

    /// The value num / p^den_exp, normalized. Throws if the reduced
    /// denominator exponent exceeds `cap`.
    Exponent(std::uint32_t p, BigInt num, std::uint32_t den_exp = 0, std::uint32_t cap = kDefaultDenominatorCap)
        : num_(std::move(num)), den_exp_(den_exp), p_(p) {
        if (num_ < 0) throw Error(Errc::negative_exponent, "exponents must be nonnegative");
        normalize();
        check_cap(cap);
    }

    static Exponent integer(std::uint32_t p, std::int64_t n) { return Exponent(p, BigInt(n)); }

    /// Exact conversion from a rational; the denominator must be a power of p.
    static Exponent from_rational(std::uint32_t p, const BigRational& r,
                                  std::uint32_t cap = kDefaultDenominatorCap) {
        if (r < 0) throw Error(Errc::negative_exponent, "exponents must be nonnegative");
        BigInt den = boost::multiprecision::denominator(r);
        const std::int64_t e = detail::strip_p(den, p);
        if (den != 1) throw Error(Errc::bad_denominator, "denominator is not a power of " + std::to_string(p));
        if (e > cap)
            throw Error(Errc::denominator_cap_exceeded, "denominator p^" + std::to_string(e) + " exceeds cap");
        return Exponent(p, boost::multiprecision::numerator(r), static_cast<std::uint32_t>(e), cap);
    }

    std::uint32_t prime() const noexcept { return p_; }
    const BigInt& numerator() const noexcept { return num_; }
    std::uint32_t den_exp() const noexcept { return den_exp_; }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_exp_ == 0; }

    BigRational to_rational() const { return BigRational(num_, detail::pow_int(p_, den_exp_)); }

    /// p-adic valuation; negative for non-integers.
    std::int64_t vp() const {
        if (is_zero()) throw Error(Errc::zero_has_no_valuation, "v_p(0) is undefined");
        if (den_exp_ > 0) return -static_cast<std::int64_t>(den_exp_);
        BigInt n = num_;
        return detail::strip_p(n, p_);
    }

    /// p^n * this.
    Exponent scale_p(std::int64_t n, std::uint32_t cap = kDefaultDenominatorCap) const {
        if (is_zero()) return *this;
        if (n >= 0) {
            const auto shift = static_cast<std::uint64_t>(n);
            if (shift <= den_exp_) return Exponent(p_, num_, den_exp_ - static_cast<std::uint32_t>(shift), cap);
            return Exponent(p_, num_ * detail::pow_int(p_, shift - den_exp_), 0, cap);
        }
        const std::uint64_t e = den_exp_ + static_cast<std::uint64_t>(-n);
        if (e > cap)
            throw Error(Errc::denominator_cap_exceeded, "denominator p^" + std::to_string(e) + " exceeds cap");
        return Exponent(p_, num_, static_cast<std::uint32_t>(e), cap);
    }

    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        check_same(a, b);
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_exp_ == b.den_exp_) return Exponent(a.p_, a.num_ + b.num_, a.den_exp_, ~0U);
        if (a.den_exp_ > b.den_exp_)
            return Exponent(a.p_, a.num_ + b.num_ * detail::pow_int(a.p_, a.den_exp_ - b.den_exp_), a.den_exp_, ~0U);
        return Exponent(a.p_, b.num_ + a.num_ * detail::pow_int(a.p_, b.den_exp_ - a.den_exp_), b.den_exp_, ~0U);
    }

    Exponent& operator+=(const Exponent& o) { return *this = *this + o; }

    /// a - b, which must be nonnegative.
    friend Exponent operator-(const Exponent& a, const Exponent& b) {
        check_same(a, b);
        if (b.is_zero()) return a;
        const std::uint32_t e = std::max(a.den_exp_, b.den_exp_);
        BigInt n = a.num_ * detail::pow_int(a.p_, e - a.den_exp_) - b.num_ * detail::pow_int(a.p_, e - b.den_exp_);
        if (n < 0) throw Error(Errc::negative_exponent, "exponent difference is negative");
        return Exponent(a.p_, std::move(n), e, ~0U);
    }

    friend Exponent operator*(const Exponent& a, const Exponent& b) {
        check_same(a, b);
        if (a.is_zero()) return a;
        if (b.is_zero()) return b;
        return Exponent(a.p_, a.num_ * b.num_, a.den_exp_ + b.den_exp_, ~0U);
    }

    friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
        return a.num_ == b.num_ && a.den_exp_ == b.den_exp_ && (a.p_ == b.p_ || a.num_ == 0);
    }

    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
        if (a.den_exp_ == b.den_exp_) return cmp(a.num_, b.num_);
        check_same(a, b);
        if (a.den_exp_ > b.den_exp_) return cmp(a.num_, b.num_ * detail::pow_int(a.p_, a.den_exp_ - b.den_exp_));
        return cmp(a.num_ * detail::pow_int(a.p_, b.den_exp_ - a.den_exp_), b.num_);
    }

    /// `n` for integers, `n/d` otherwise.
    std::string to_string() const {
        if (den_exp_ == 0) return num_.str();
        return num_.str() + "/" + detail::pow_int(p_, den_exp_).str();
    }

private:
    static std::strong_ordering cmp(const BigInt& x, const BigInt& y) {
        const int c = x.compare(y);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    static void check_same(const Exponent& a, const Exponent& b) {
        if (a.p_ != b.p_ && !a.is_zero() && !b.is_zero())
            throw Error(Errc::context_mismatch, "exponents over different primes");
    }

    void normalize() {
        if (num_ == 0) {
            den_exp_ = 0;
            return;
        }
        if (den_exp_ == 0) return;
        static const BigInt small_limit = BigInt(1) << 62;
        if (num_ < small_limit) {
            auto n = static_cast<std::uint64_t>(num_);
            const std::uint32_t before = den_exp_;
            while (den_exp_ > 0 && n % p_ == 0) {
                n /= p_;
                --den_exp_;
            }
            if (den_exp_ != before) num_ = n;
            return;
        }
        while (den_exp_ > 0) {
            BigInt q, r;
            boost::multiprecision::divide_qr(num_, BigInt(p_), q, r);
            if (r != 0) break;
            num_ = std::move(q);
            --den_exp_;
        }
    }

    void check_cap(std::uint32_t cap) const {
        if (den_exp_ > cap)
            throw Error(Errc::denominator_cap_exceeded,
                        "denominator p^" + std::to_string(den_exp_) + " exceeds cap " + std::to_string(cap));
    }

    BigInt num_ = 0;
    std::uint32_t den_exp_ = 0;
    std::uint32_t p_;
};

} // namespace perfps
