#pragma once

// Substitution of series into series: f(g_1, ..., g_N) for f in N variables
// and g_k in M variables. Univariate composition is the N = M = 1 case.

#include <perfps/series.hpp>

#include <array>
#include <map>
#include <optional>

namespace perfps {

namespace detail {

// Memoized fractional powers of one substituted argument.
template <std::size_t M>
class PowerCache {
public:
    PowerCache(const Series<M>& base, const std::optional<Exponent>& bound) : base_(base), bound_(bound) {}

    const Series<M>& get(const Exponent& i) {
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(i, pow(base_, i, bound_)).first->second;
    }

private:
    const Series<M>& base_;
    const std::optional<Exponent>& bound_;
    std::map<Exponent, Series<M>> cache_;
};

} // namespace detail

/// Computes sum over terms c_m * prod_k args[k]^(m_k), truncated at total
/// degree `bound` when given. Every argument must lack a constant term.
///
/// Precision: each product carries the precision of its factors, and when f
/// itself is truncated at rho_f the unseen terms are bounded below by
/// rho_f * min_k v(args[k]).
template <std::size_t N, std::size_t M>
Series<M> substitute(const Series<N>& f, const std::array<Series<M>, N>& args,
                     const std::optional<Exponent>& bound = std::nullopt) {
    const auto& field = f.field();
    std::array<std::optional<Exponent>, N> lower;
    for (std::size_t k = 0; k < N; ++k) {
        if (!(*args[k].field() == *field)) throw Error(Errc::context_mismatch, "substituted series over another field");
        if (args[k].has_constant_term())
            throw Error(Errc::inner_has_constant_term, "substituted series must have zero constant term");
        lower[k] = order_lower_bound(args[k]);
    }

    Precision prec = bound ? Precision::modulo(*bound) : Precision::exact();
    if (!f.is_exact()) {
        std::optional<Exponent> vmin;
        for (const auto& v : lower)
            if (v && (!vmin || *v < *vmin)) vmin = v;
        if (vmin) prec = min(prec, Precision::modulo(f.precision().bound() * *vmin));
    }

    std::vector<detail::PowerCache<M>> caches;
    caches.reserve(N);
    for (std::size_t k = 0; k < N; ++k) caches.emplace_back(args[k], bound);

    std::vector<Term<M>> collected;
    for (const auto& term : f.terms()) {
        // Skip terms whose image cannot reach below the precision claimed so far.
        std::optional<Exponent> image_floor = Exponent(field->characteristic());
        for (std::size_t k = 0; k < N && image_floor; ++k) {
            if (term.mono[k].is_zero()) continue;
            if (!lower[k]) image_floor.reset();
            else *image_floor += term.mono[k] * *lower[k];
        }
        if (!image_floor) continue;  // a zero argument raised to a positive power
        if (!prec.admits(*image_floor)) continue;

        std::optional<Series<M>> product;
        for (std::size_t k = 0; k < N; ++k) {
            if (term.mono[k].is_zero()) continue;
            const auto& power = caches[k].get(term.mono[k]);
            product = product ? mul(*product, power, bound) : power;
        }
        if (!product) product = truncate_at_most(Series<M>::one(field), bound);
        prec = min(prec, product->precision());
        for (const auto& t : product->terms())
            collected.push_back(Term<M>{t.mono, t.degree, field->mul(t.coeff, term.coeff)});
    }
    return Series<M>::from_terms(field, std::move(collected), prec);
}

/// y(z) = sum_i y_i z^i. The inner series z must lie in the maximal ideal.
inline PSeries compose(const PSeries& y, const PSeries& z, const std::optional<Exponent>& bound = std::nullopt) {
    return substitute<1, 1>(y, {z}, bound);
}

} // namespace perfps
