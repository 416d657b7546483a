#pragma once

// Random generators and independent reference computations for the tests.
// The references work on plain maps from rational exponents to integers mod p
// and do not go through the library's Series arithmetic.

#include <perfps/perfps.hpp>

#include <map>
#include <random>

namespace testsupport {

using namespace perfps;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return n ? rng_() % n : 0; }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    bool chance(unsigned percent) { return below(100) < percent; }

    FieldElem elem(const FiniteField& F) { return FieldElem{static_cast<std::uint32_t>(below(F.order()))}; }
    FieldElem nonzero(const FiniteField& F) { return FieldElem{static_cast<std::uint32_t>(1 + below(F.order() - 1))}; }

    /// k / p^depth with k drawn from [lo * p^depth, hi * p^depth].
    Exponent exponent(std::uint32_t p, std::uint32_t depth, std::int64_t lo, std::int64_t hi) {
        const auto scale = static_cast<std::int64_t>(detail::pow_int(p, depth));
        return Exponent(p, BigInt(between(lo * scale, hi * scale)), depth);
    }

    /// Exact series with about `terms` terms, exponents in (1/p^depth)Z cap [lo, hi].
    PSeries series(const FieldPtr& F, std::uint32_t depth, std::int64_t lo, std::int64_t hi, int terms) {
        std::vector<std::pair<Monomial<1>, FieldElem>> raw;
        const auto p = F->characteristic();
        for (int i = 0; i < terms; ++i)
            raw.push_back({{exponent(p, static_cast<std::uint32_t>(below(depth + 1)), lo, hi)}, nonzero(*F)});
        return PSeries(F, std::move(raw), Precision::exact());
    }

    /// Exact series with v_t = 1, unit leading coefficient, further support in
    /// (1/p^depth)Z cap (1, hi].
    PSeries unit_series(const FieldPtr& F, std::uint32_t depth, std::int64_t hi, unsigned density) {
        const auto p = F->characteristic();
        const auto scale = static_cast<std::int64_t>(detail::pow_int(p, depth));
        std::vector<std::pair<Monomial<1>, FieldElem>> raw{{{Exponent::integer(p, 1)}, nonzero(*F)}};
        for (std::int64_t k = scale + 1; k <= hi * scale; ++k)
            if (chance(density)) raw.push_back({{Exponent(p, BigInt(k), depth)}, nonzero(*F)});
        return PSeries(F, std::move(raw), Precision::exact());
    }

    /// Random ordinary series w_1 t + ... + w_deg t^deg with w_1 nonzero.
    PSeries ordinary_unit(const FieldPtr& F, int deg) {
        const auto p = F->characteristic();
        std::vector<std::pair<Monomial<1>, FieldElem>> raw{{{Exponent::integer(p, 1)}, nonzero(*F)}};
        for (int d = 2; d <= deg; ++d) raw.push_back({{Exponent::integer(p, d)}, elem(*F)});
        return PSeries(F, std::move(raw), Precision::exact());
    }

    template <std::size_t N>
    Series<N> multi(const FieldPtr& F, std::uint32_t depth, std::int64_t hi, int terms, bool constant_ok = true) {
        const auto p = F->characteristic();
        std::vector<std::pair<Monomial<N>, FieldElem>> raw;
        for (int i = 0; i < terms; ++i) {
            Monomial<N> m = zero_monomial<N>(p);
            for (auto& e : m) e = exponent(p, static_cast<std::uint32_t>(below(depth + 1)), 0, hi);
            if (!constant_ok && total_degree(m).is_zero()) m[0] = Exponent::integer(p, 1);
            raw.push_back({m, nonzero(*F)});
        }
        return Series<N>(F, std::move(raw), Precision::exact());
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Reference arithmetic over F_p with rational exponents.

using RefSeries = std::map<BigRational, std::int64_t>;

inline RefSeries to_ref(const PSeries& s) {
    RefSeries r;
    for (const auto& t : s.terms()) r[t.degree.to_rational()] = t.coeff.value;
    return r;
}

inline void clean(RefSeries& r) {
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
}

inline RefSeries ref_mul(const RefSeries& a, const RefSeries& b, std::int64_t p, const BigRational& bound) {
    RefSeries r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b)
            if (ea + eb < bound) r[ea + eb] = (r[ea + eb] + ca * cb) % p;
    clean(r);
    return r;
}

inline RefSeries ref_truncate(RefSeries r, const BigRational& bound) {
    for (auto it = r.begin(); it != r.end();) it = it->first < bound ? std::next(it) : r.erase(it);
    return r;
}

inline std::int64_t mod_pow(std::int64_t b, std::uint64_t e, std::int64_t p) {
    std::int64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

/// Catalan numbers mod p: the compositional inverse of t + t^2 over Z is
/// sum_{n>=1} (-1)^(n-1) C_{n-1} t^n.
inline std::vector<std::int64_t> reversion_t_plus_t2(std::int64_t p, int below) {
    std::vector<std::int64_t> coeffs(static_cast<std::size_t>(below), 0);
    BigInt catalan = 1;  // C_0
    for (int n = 1; n < below; ++n) {
        BigInt c = catalan % p;
        if ((n - 1) % 2) c = (p - c) % p;
        coeffs[static_cast<std::size_t>(n)] = static_cast<std::int64_t>(c);
        const int k = n - 1;
        catalan = catalan * 2 * (2 * k + 1) / (k + 2);  // C_{k+1}
    }
    return coeffs;
}

/// Coefficients of (1+t)^m - 1 mod p for m >= 0, via exact binomials.
inline std::vector<std::int64_t> binomial_series(std::int64_t m, std::int64_t p, int below) {
    std::vector<std::int64_t> coeffs(static_cast<std::size_t>(below), 0);
    BigInt b = 1;
    for (int k = 1; k < below && k <= m; ++k) {
        b = b * (m - k + 1) / k;
        coeffs[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(b % p);
    }
    return coeffs;
}

inline PSeries from_coeffs(const FieldPtr& F, const std::vector<std::int64_t>& coeffs, std::int64_t bound) {
    const auto p = F->characteristic();
    std::vector<std::pair<Monomial<1>, FieldElem>> raw;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] % p) raw.push_back({{Exponent::integer(p, static_cast<std::int64_t>(k))}, F->from_int(coeffs[k])});
    return PSeries(F, std::move(raw), Precision::modulo(Exponent::integer(p, bound)));
}

/// a_n straight from the definition, on rational exponents: the least i - 1
/// with p^n dividing the reduced denominator of i. nullopt for +infinity.
inline std::optional<BigRational> ref_profile_entry(const std::vector<BigRational>& support, std::int64_t p, int n) {
    std::optional<BigRational> best;
    const BigInt pn = detail::pow_int(static_cast<std::uint32_t>(p), static_cast<std::uint64_t>(n));
    for (const auto& i : support) {
        if (boost::multiprecision::denominator(i) % pn != 0) continue;
        const BigRational v = i - 1;
        if (!best || v < *best) best = v;
    }
    return best;
}

} // namespace testsupport
