#pragma once

// Leading-term solver shared by the term-at-a-time inversion routines.
//
// An unknown series z = z_1 t + ... is being refined by adding a single term
// c t^s. Each contributor k perturbs the residual, at lowest order, by
// alpha_k c^(p^v_k) t^(base_k + p^v_k (s - 1)). To cancel the residual's
// leading term r t^e we need the smallest such exponent to equal e, which
// fixes s = max_k (1 + (e - base_k) p^-v_k) over contributors with
// base_k < e, and then c must solve sum_{k achieving s} alpha_k c^(p^v_k) = r.

#include <perfps/exponent.hpp>
#include <perfps/field.hpp>

#include <optional>
#include <vector>

namespace perfps::detail {

struct Contributor {
    Exponent base;
    std::int64_t shift;  // v_k
    FieldElem alpha;
};

struct LeadingTermStep {
    Exponent exponent;  // s
    FieldElem coeff;    // c
};

/// The exponent s a new term needs so that its lowest-order effect lands at
/// e. nullopt when no contributor can reach e.
inline std::optional<Exponent> required_exponent(const std::vector<Contributor>& contributors, const Exponent& e,
                                                 std::uint32_t cap) {
    std::optional<Exponent> best;
    for (const auto& k : contributors) {
        if (!(k.base < e)) continue;
        Exponent s = (e - k.base).scale_p(-k.shift, cap) + Exponent::integer(e.prime(), 1);
        if (!best || *best < s) best = std::move(s);
    }
    return best;
}

/// Solves for (s, c); nullopt when the achievers' linearized equation has
/// no solution in the field (the residual term cannot be cancelled).
inline std::optional<LeadingTermStep> solve_leading_term(const FiniteField& F,
                                                         const std::vector<Contributor>& contributors,
                                                         const Exponent& e, FieldElem target) {
    auto s = required_exponent(contributors, e, F.denominator_cap());
    if (!s) return std::nullopt;
    std::vector<const Contributor*> achievers;
    for (const auto& k : contributors) {
        if (!(k.base < e)) continue;
        if ((e - k.base).scale_p(-k.shift, F.denominator_cap()) + Exponent::integer(e.prime(), 1) == *s)
            achievers.push_back(&k);
    }
    auto evaluate = [&](FieldElem c) {
        FieldElem sum = F.zero();
        for (const auto* k : achievers) sum = F.add(sum, F.mul(k->alpha, F.frobenius(c, k->shift)));
        return sum;
    };
    if (achievers.size() == 1 && !F.is_zero(achievers.front()->alpha)) {
        const auto* k = achievers.front();
        return LeadingTermStep{*s, F.frobenius(F.div(target, k->alpha), -k->shift)};
    }
    for (auto c : F.elements())
        if (evaluate(c) == target) return LeadingTermStep{*s, c};
    return std::nullopt;
}

} // namespace perfps::detail
