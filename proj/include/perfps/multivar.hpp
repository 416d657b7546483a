#pragma once

// Perfect series in two and three variables and maps between them.

#include <perfps/series.hpp>
#include <perfps/substitute.hpp>

#include <array>

namespace perfps {

using Series2 = Series<2>;
using Series3 = Series<3>;

/// f(t_k) as a series in M variables (k counts from 0).
template <std::size_t M>
Series<M> embed(const PSeries& f, std::size_t k) {
    return substitute<1, M>(f, {Series<M>::variable(f.field(), k)});
}

/// The identity map (t_1, ..., t_M).
template <std::size_t M>
std::array<Series<M>, M> identity_map(const FieldPtr& field) {
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
        return std::array<Series<M>, M>{Series<M>::variable(field, I)...};
    }(std::make_index_sequence<M>{});
}

/// f(t2, t1).
inline Series2 swap_variables(const Series2& f) {
    std::vector<std::pair<Monomial<2>, FieldElem>> raw;
    raw.reserve(f.size());
    for (const auto& t : f.terms()) raw.push_back({{t.mono[1], t.mono[0]}, t.coeff});
    return Series2(f.field(), std::move(raw), f.precision());
}

/// Substitutes the map `inner` into every component of `outer`:
/// (outer_1(inner), ..., outer_K(inner)).
template <std::size_t K, std::size_t N, std::size_t M>
std::array<Series<M>, K> compose_maps(const std::array<Series<N>, K>& outer, const std::array<Series<M>, N>& inner,
                                      const std::optional<Exponent>& bound = std::nullopt) {
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
        return std::array<Series<M>, K>{substitute<N, M>(outer[I], inner, bound)...};
    }(std::make_index_sequence<K>{});
}

/// The shear t1 -> t1, t2 -> t2 + sign * f(t1), for f without constant term.
inline std::array<Series2, 2> shear(const PSeries& f, bool negate = false) {
    const auto& field = f.field();
    const Series2 ft1 = embed<2>(f, 0);
    return {Series2::variable(field, 0), Series2::variable(field, 1) + (negate ? -ft1 : ft1)};
}

} // namespace perfps
