#pragma once

// Automorphisms of the perfected power series ring. Every continuous
// automorphism is (Frobenius power n) followed by substitution of an ordinary
// series w = w_1 t + ... with w_1 a unit; PerfAut stores that normal form.

#include <perfps/detail/leading_term.hpp>
#include <perfps/series.hpp>
#include <perfps/substitute.hpp>

#include <optional>
#include <variant>

namespace perfps {

/// Writes v = p^n when possible.
inline std::optional<std::int64_t> log_p(const Exponent& v) {
    if (v.is_zero()) return std::nullopt;
    if (v.den_exp() > 0) {
        if (v.numerator() == 1) return -static_cast<std::int64_t>(v.den_exp());
        return std::nullopt;
    }
    BigInt n = v.numerator();
    const std::int64_t k = detail::strip_p(n, v.prime());
    if (n != 1) return std::nullopt;
    return k;
}

namespace detail {

inline Exponent one_exponent(std::uint32_t p) { return Exponent::integer(p, 1); }

// Coefficient x^i for i in Z[1/p]_{>=0}.
inline FieldElem field_pow_exponent(const FiniteField& F, FieldElem x, const Exponent& i) {
    if (i.is_zero()) return F.one();
    if (F.is_zero(x)) return F.zero();
    const std::uint64_t reduced = F.order() > 1 ? static_cast<std::uint64_t>(i.numerator() % (F.order() - 1)) : 0;
    return F.frobenius(F.pow(x, reduced), -static_cast<std::int64_t>(i.den_exp()));
}

// i = u p^v with p not dividing u; returns (u mod p, v, u - 1 reduced for pow).
struct PFreePart {
    std::uint32_t u_mod_p;
    std::int64_t v;
    BigInt u;
};

inline PFreePart p_free_part(const Exponent& i) {
    BigInt u = i.numerator();
    std::int64_t v = -static_cast<std::int64_t>(i.den_exp());
    if (i.den_exp() == 0) v = strip_p(u, i.prime());
    return {static_cast<std::uint32_t>(u % i.prime()), v, u};
}

} // namespace detail

/// Frobenius power n, then substitution of w.
struct PerfAut {
    std::int64_t n = 0;
    PSeries w;

    /// Checks the normal-form invariants: w ordinary (possibly up to
    /// precision), no constant term, valuation exactly 1.
    static PerfAut make(std::int64_t n, PSeries w) {
        if (w.has_constant_term()) throw Error(Errc::inner_has_constant_term, "w must lie in the maximal ideal");
        if (is_ordinary(w).is_no()) throw Error(Errc::not_ordinary, "w must have integral exponents");
        const auto v = valuation(w);
        if (!v || *v != detail::one_exponent(w.prime()))
            throw Error(Errc::non_unit_leading_coefficient, "coefficient of t in w must be a unit");
        return PerfAut{n, std::move(w)};
    }

    static PerfAut identity(FieldPtr field) { return PerfAut{0, PSeries::variable(std::move(field))}; }
};

struct Invertible {
    PerfAut aut;
};
struct NotInvertibleValuation {
    Exponent valuation;
};
struct NotInvertibleNonOrdinary {
    Exponent witness;
};
/// Kept for completeness: over a field a nonzero t-coefficient is a unit, so
/// classify_invertible never produces it.
struct NotInvertibleNonUnit {};
struct InconclusiveAtPrecision {
    Exponent precision;
};

using InvertVerdict = std::variant<Invertible, NotInvertibleValuation, NotInvertibleNonOrdinary, NotInvertibleNonUnit,
                                   InconclusiveAtPrecision>;

/// Decides whether substituting y is an automorphism of the perfected ring.
/// The valuation must be a power p^n of p; then w = y^(p^-n) must be
/// ordinary. Truncated inputs whose visible part is consistent with
/// invertibility are reported inconclusive.
inline InvertVerdict classify_invertible(const PSeries& y) {
    if (y.empty()) {
        if (y.is_exact()) throw Error(Errc::invalid_argument, "the zero series is not classified");
        throw IndeterminateBelow(y.precision().bound());
    }
    const Exponent v = *valuation(y);
    const auto n = log_p(v);
    if (!n) return NotInvertibleValuation{v};
    PSeries w = frobenius(y, -*n);
    const auto ord = is_ordinary(w);
    if (ord.is_no()) return NotInvertibleNonOrdinary{(*ord.witness)[0]};
    if (!y.is_exact()) return InconclusiveAtPrecision{y.precision().bound()};
    return Invertible{PerfAut{*n, std::move(w)}};
}

/// Classical reversion: the z with w(z) = z(w) = t modulo t^rho, solved one
/// coefficient at a time. rho must be an integer; the result is capped by
/// w's own precision.
inline PSeries comp_inverse_ordinary(const PSeries& w, const Exponent& rho) {
    const auto& F = *w.field();
    const auto p = w.prime();
    if (!rho.is_integer() || rho.is_zero()) throw Error(Errc::invalid_argument, "reversion precision must be a positive integer");
    if (w.has_constant_term()) throw Error(Errc::inner_has_constant_term, "w must lie in the maximal ideal");
    if (is_ordinary(w).is_no()) throw Error(Errc::not_ordinary, "classical reversion needs integral exponents");
    if (w.empty() || w.terms().front().degree != detail::one_exponent(p))
        throw Error(Errc::non_unit_leading_coefficient, "coefficient of t must be a unit");

    Exponent target = rho;
    if (!w.is_exact() && w.precision().bound() < target) target = w.precision().bound();
    const FieldElem lead_inv = F.inv(w.terms().front().coeff);

    PSeries z = scale(PSeries::variable(w.field()), lead_inv);
    const auto top = static_cast<std::int64_t>(target.numerator());
    for (std::int64_t k = 2; k < top; ++k) {
        const Exponent ek = Exponent::integer(p, k);
        const auto image = compose(w, z, Exponent::integer(p, k + 1));
        const FieldElem r = image.coeff(ek);
        if (F.is_zero(r)) continue;
        z = z + PSeries::monomial(w.field(), {ek}, F.neg(F.mul(r, lead_inv)));
    }
    return truncate_at_most(z, target);
}

/// Applies the automorphism: Frobenius power first, then substitution of w.
inline PSeries aut_apply(const PerfAut& a, const PSeries& g, const std::optional<Exponent>& bound = std::nullopt) {
    return compose(frobenius(g, a.n), a.w, bound);
}

/// Image of t, i.e. the series y with Sub(y) equal to this automorphism.
inline PSeries aut_image(const PerfAut& a) { return frobenius(a.w, a.n); }

/// The automorphism g -> a(b(g)). Absolute Frobenius commutes with every
/// substitution, so the Frobenius powers add and the ordinary parts compose
/// as w_b(w_a) with no coefficient twist.
inline PerfAut aut_compose(const PerfAut& a, const PerfAut& b) {
    return PerfAut{a.n + b.n, compose(b.w, a.w)};
}

/// Group inverse; the ordinary part is correct modulo t^rho.
inline PerfAut aut_invert(const PerfAut& a, const Exponent& rho) {
    return PerfAut{-a.n, comp_inverse_ordinary(a.w, rho)};
}

struct GreedyInverse {
    PSeries z;
    /// Residual exponent that no admissible single term can cancel.
    std::optional<Exponent> stuck;
    std::size_t steps = 0;
};

struct GreedyOptions {
    std::size_t max_steps = 20000;
};

/// Builds z term by term so that y(z) - t vanishes below rho. At each step the
/// residual's leading term r t^e is cancelled by the unique forced term
/// c t^s (see detail/leading_term.hpp). A term is admissible when its
/// exponent lies in p^-D Z, D being the deepest denominator exponent in y's
/// support; if the forced exponent falls outside that lattice, or the forced
/// coefficient equation has no solution, the run reports stuck = e.
///
/// For ordinary y the forced exponents are integers and the run completes
/// with the classical inverse. A run that leaves the lattice is the finite
/// trace of a would-be inverse whose support accumulates below a finite
/// exponent.
inline GreedyInverse greedy_perfect_inverse(const PSeries& y, const Exponent& rho, GreedyOptions opts = {}) {
    const auto& field = y.field();
    const auto& F = *field;
    const auto p = y.prime();
    const Exponent one = detail::one_exponent(p);
    if (!(one < rho)) throw Error(Errc::invalid_argument, "greedy inversion needs rho > 1");
    const auto v = valuation(y);
    if (!v || *v != one) throw Error(Errc::invalid_argument, "greedy inversion needs v_t(y) = 1");

    std::uint32_t depth = 0;
    for (const auto& t : y.terms()) depth = std::max(depth, t.degree.den_exp());

    const FieldElem z1 = F.inv(y.terms().front().coeff);
    const PSeries t = PSeries::variable(field);
    PSeries z = scale(t, z1);

    // Contributor data depends only on y and z_1.
    struct Prepared {
        Exponent i;
        detail::Contributor c;
    };
    std::vector<Prepared> prepared;
    for (const auto& term : y.terms()) {
        const auto part = detail::p_free_part(term.degree);
        // alpha = y_i * u * z_1^(p^v (u - 1))
        const auto reduced = static_cast<std::uint64_t>((part.u - 1) % (F.order() - 1 > 0 ? F.order() - 1 : 1));
        const FieldElem lead = F.frobenius(F.pow(z1, reduced), part.v);
        const FieldElem alpha = F.mul(F.mul(term.coeff, F.from_int(part.u_mod_p)), lead);
        prepared.push_back({term.degree, detail::Contributor{term.degree, part.v, alpha}});
    }

    std::optional<Exponent> previous;
    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        const PSeries residual = compose(y, z, rho) - t;
        if (residual.empty()) {
            if (!residual.is_exact() && residual.precision().bound() < rho)
                throw Error(Errc::precision_exhausted,
                            "input precision " + residual.precision().bound().to_string() + " is below rho");
            return {truncate_at_most(z, rho), std::nullopt, step};
        }
        const auto& lead = residual.terms().front();
        if (previous && !(*previous < lead.degree))
            throw Error(Errc::precision_exhausted, "residual exponent failed to increase");
        previous = lead.degree;

        std::vector<detail::Contributor> contributors;
        for (const auto& pr : prepared)
            if (pr.i < lead.degree) contributors.push_back(pr.c);
        const auto solved = detail::solve_leading_term(F, contributors, lead.degree, F.neg(lead.coeff));
        if (!solved || solved->exponent.den_exp() > depth) return {z, lead.degree, step};
        z = z + PSeries::monomial(field, {solved->exponent}, solved->coeff);
    }
    throw Error(Errc::precision_exhausted, "greedy inversion exceeded its step budget");
}

} // namespace perfps
