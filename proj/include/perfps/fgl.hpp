#pragma once

// Perfect formal group laws f(t1, t2): symmetric, f = t1 + t2 + (terms with
// positive exponent in both variables), and associative. Multiplication by
// integers and its p-adic interpolation act on the univariate perfect ring.

#include <perfps/detail/leading_term.hpp>
#include <perfps/multivar.hpp>
#include <perfps/substitution.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace perfps {

struct FglReport {
    /// Total degree below which all three axioms were compared.
    Exponent checked_to;
    bool symmetric = true;
    bool unital = true;
    bool associative = true;
    /// Term of f whose mirror image has a different coefficient.
    std::optional<Monomial<2>> symmetry_witness;
    /// Term of f - t1 - t2 with a zero exponent in some variable.
    std::optional<Monomial<2>> unit_witness;
    /// Least monomial where the two association orders differ.
    std::optional<Monomial<3>> associativity_witness;

    bool passed() const noexcept { return symmetric && unital && associative; }

    std::string describe() const;
};

namespace detail {

template <std::size_t N>
std::string monomial_string(const Monomial<N>& m) {
    std::string s = "(";
    for (std::size_t i = 0; i < N; ++i) s += (i ? "," : "") + m[i].to_string();
    return s + ")";
}

template <std::size_t N>
std::optional<Monomial<N>> first_difference(const Series<N>& a, const Series<N>& b, const Exponent& rho) {
    const auto& F = *a.field();
    std::map<Monomial<N>, FieldElem> diff;
    for (const auto& t : a.terms())
        if (t.degree < rho) diff[t.mono] = t.coeff;
    for (const auto& t : b.terms())
        if (t.degree < rho) {
            auto& c = diff.try_emplace(t.mono, F.zero()).first->second;
            c = F.sub(c, t.coeff);
        }
    for (const auto& [m, c] : diff)
        if (!F.is_zero(c)) return m;
    return std::nullopt;
}

} // namespace detail

inline std::string FglReport::describe() const {
    std::string s = "checked below total degree " + checked_to.to_string() + "\n";
    s += "commutativity: " + std::string(symmetric ? "pass" : "FAIL");
    if (symmetry_witness)
        s += " witness " + detail::monomial_string(*symmetry_witness) + " vs " +
             detail::monomial_string(Monomial<2>{(*symmetry_witness)[1], (*symmetry_witness)[0]});
    s += "\nidentity: " + std::string(unital ? "pass" : "FAIL");
    if (unit_witness) s += " witness " + detail::monomial_string(*unit_witness);
    s += "\nassociativity: " + std::string(associative ? "pass" : "FAIL");
    if (associativity_witness) s += " witness " + detail::monomial_string(*associativity_witness);
    return s;
}

/// Checks the three axioms below total degree rho (or f's own precision).
inline FglReport fgl_check(const Series2& f, const Exponent& rho) {
    if (f.has_constant_term()) throw Error(Errc::invalid_argument, "a formal group law has no constant term");
    const auto& field = f.field();
    const auto p = f.prime();
    FglReport rep{rho};
    if (!f.is_exact() && f.precision().bound() < rep.checked_to) rep.checked_to = f.precision().bound();

    for (const auto& t : f.terms()) {
        if (!(t.degree < rep.checked_to)) continue;
        if (f.coeff(Monomial<2>{t.mono[1], t.mono[0]}) != t.coeff) {
            rep.symmetric = false;
            rep.symmetry_witness = t.mono;
            break;
        }
    }

    const Series2 rest = f - Series2::variable(field, 0) - Series2::variable(field, 1);
    for (const auto& t : rest.terms()) {
        if (!(t.degree < rep.checked_to)) continue;
        if (t.mono[0].is_zero() || t.mono[1].is_zero()) {
            rep.unital = false;
            rep.unit_witness = t.mono;
            break;
        }
    }

    const auto [t1, t2, t3] = identity_map<3>(field);
    const Series3 f12 = substitute<2, 3>(f, {t1, t2}, rep.checked_to);
    const Series3 f23 = substitute<2, 3>(f, {t2, t3}, rep.checked_to);
    const Series3 left = substitute<2, 3>(f, {f12, t3}, rep.checked_to);
    const Series3 right = substitute<2, 3>(f, {t1, f23}, rep.checked_to);
    const Precision both = min(left.precision(), right.precision());
    if (!both.is_exact() && both.bound() < rep.checked_to) rep.checked_to = both.bound();
    if (auto w = detail::first_difference(left, right, rep.checked_to)) {
        rep.associative = false;
        rep.associativity_witness = *w;
    }
    (void)p;
    return rep;
}

/// Raised when p-adic stabilization needs a longer approximant.
class NotStabilized : public Error {
public:
    NotStabilized(const Exponent& achieved, const std::string& what)
        : Error(Errc::not_stabilized, what + "; agreement only below " + achieved.to_string()),
          achieved_(achieved) {}
    const Exponent& achieved() const noexcept { return achieved_; }

private:
    Exponent achieved_;
};

struct ZpMultiplication {
    PSeries series;
    /// Least K with [p^K] = 0 modulo t^rho.
    unsigned stabilized_at = 0;
    /// The integer a_K mod p^stabilized_at whose [m]-series was returned.
    BigInt representative;
};

/// A formal group law whose axioms were verified below `checked_to`.
/// Copies share the [m]-series cache, which is guarded by a mutex.
class FormalGroupLaw {
public:
    /// Verifies the axioms below rho; throws AxiomsNotVerified on failure.
    static FormalGroupLaw verified(Series2 f, const Exponent& rho) {
        auto rep = fgl_check(f, rho);
        if (!rep.passed()) throw Error(Errc::axioms_not_verified, rep.describe());
        return FormalGroupLaw(std::move(f), std::move(rep));
    }

    const Series2& law() const noexcept { return f_; }
    const FglReport& report() const noexcept { return report_; }
    const Exponent& checked_to() const noexcept { return report_.checked_to; }
    const FieldPtr& field() const noexcept { return f_.field(); }

    /// The series iota with f(t, iota(t)) = 0 modulo t^rho, solved one term
    /// at a time.
    PSeries formal_inverse(const Exponent& rho) const {
        require(rho);
        const auto& field = f_.field();
        const auto& F = *field;
        const PSeries t = PSeries::variable(field);
        const FieldElem lead = F.neg(F.one());

        std::vector<detail::Contributor> all;
        for (const auto& term : f_.terms()) {
            if (term.mono[1].is_zero()) continue;
            const auto part = detail::p_free_part(term.mono[1]);
            const auto reduced = static_cast<std::uint64_t>((part.u - 1) % (F.order() - 1));
            const FieldElem scale_lead = F.frobenius(F.pow(lead, reduced), part.v);
            all.push_back({term.degree, part.v, F.mul(F.mul(term.coeff, F.from_int(part.u_mod_p)), scale_lead)});
        }

        PSeries iota = scale(t, lead);
        std::optional<Exponent> previous;
        for (std::size_t step = 0; step < 20000; ++step) {
            const PSeries residual = substitute<2, 1>(f_, {t, iota}, rho);
            if (residual.empty()) return truncate_at_most(iota, rho);
            const auto& head = residual.terms().front();
            if (previous && !(*previous < head.degree))
                throw Error(Errc::precision_exhausted, "formal inverse residual failed to increase");
            previous = head.degree;
            std::vector<detail::Contributor> active;
            for (const auto& k : all)
                if (k.base < head.degree) active.push_back(k);
            auto solved = detail::solve_leading_term(F, active, head.degree, F.neg(head.coeff));
            if (!solved) throw Error(Errc::precision_exhausted, "formal inverse: leading term cannot be cancelled");
            iota = iota + PSeries::monomial(field, {solved->exponent}, solved->coeff);
        }
        throw Error(Errc::precision_exhausted, "formal inverse exceeded its step budget");
    }

    /// [m](t) modulo t^rho: [0] = 0, [1] = t, [m] = f([m-1], t), and
    /// [-m] = [m](iota).
    PSeries mul_int(std::int64_t m, const Exponent& rho) const {
        require(rho);
        const auto& field = f_.field();
        if (m == 0) return PSeries::zero(field, Precision::modulo(rho));
        if (m < 0) return compose(mul_int(-m, rho), formal_inverse(rho), rho);

        std::lock_guard lock(cache_->mutex);
        auto usable = [&](const PSeries& s) { return s.is_exact() || !(s.precision().bound() < rho); };
        if (auto it = cache_->series.find(m); it != cache_->series.end() && usable(it->second))
            return truncate_at_most(it->second, rho);

        // Resume from the largest usable cached multiple below m.
        std::int64_t start = 1;
        PSeries current = truncate_at_most(PSeries::variable(field), rho);
        for (auto it = cache_->series.begin(); it != cache_->series.end() && it->first <= m; ++it)
            if (usable(it->second) && it->first > start) {
                start = it->first;
                current = truncate_at_most(it->second, rho);
            }
        const PSeries t = PSeries::variable(field);
        for (std::int64_t k = start + 1; k <= m; ++k) {
            current = substitute<2, 1>(f_, {current, t}, rho);
            cache_->series.insert_or_assign(k, current);
        }
        cache_->series.insert_or_assign(1, truncate_at_most(t, rho));
        return current;
    }

    /// [a](t) for a in Z_p given by an approximant a_K = a mod p^K. Returns
    /// [a_K mod p^K*] where K* is the least depth with [p^K*] = 0 mod t^rho,
    /// which makes the result independent of the digits beyond K*.
    ZpMultiplication mul_zp(const BigInt& a_K, unsigned K, const Exponent& rho) const {
        require(rho);
        const auto p = f_.prime();
        const PSeries mult_p = mul_int(static_cast<std::int64_t>(p), rho);
        PSeries power = mult_p;  // [p^k]
        for (unsigned k = 1; k <= K; ++k) {
            if (k > 1) power = compose(mult_p, power, rho);
            if (power.empty()) {
                const BigInt modulus = detail::pow_int(p, k);
                BigInt rep = a_K % modulus;
                if (rep < 0) rep += modulus;
                return {mul_int(static_cast<std::int64_t>(rep), rho), k, rep};
            }
        }
        throw NotStabilized(*order_lower_bound(power),
                            "[p^" + std::to_string(K) + "] is nonzero below " + rho.to_string());
    }

    /// v(f(u(t1), u(t2))) where v is the compositional inverse of u; u must
    /// be invertible in the perfected sense.
    Series2 conjugate(const PSeries& u, const Exponent& rho) const {
        require(rho);
        const auto verdict = classify_invertible(u);
        const auto* inv = std::get_if<Invertible>(&verdict);
        if (!inv) throw Error(Errc::not_invertible, "conjugating series is not an automorphism");
        const auto& field = f_.field();
        const auto p = f_.prime();
        const std::int64_t n = inv->aut.n;

        // u = w^(p^n), so u^-1 = w^-1(t^(p^-n)). The inner values have valuation
        // p^n, so w^-1 is needed below rho and the inner series below rho * p^n.
        const Exponent inner_bound = rho.scale_p(n, field->denominator_cap());
        BigInt need = rho.numerator() / detail::pow_int(p, rho.den_exp()) + 2;
        const PSeries w_inv = comp_inverse_ordinary(inv->aut.w, Exponent(p, need));
        const PSeries root_t = PSeries::monomial(field, {Exponent::integer(p, 1).scale_p(-n, field->denominator_cap())},
                                                 field->one());
        const PSeries u_inv = compose(w_inv, root_t);

        const Series2 inner = substitute<2, 2>(f_, {embed<2>(u, 0), embed<2>(u, 1)}, inner_bound);
        return substitute<1, 2>(u_inv, {inner}, rho);
    }

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::int64_t, PSeries> series;
    };

    FormalGroupLaw(Series2 f, FglReport rep)
        : f_(std::move(f)), report_(std::move(rep)), cache_(std::make_shared<Cache>()) {}

    void require(const Exponent& rho) const {
        if (report_.checked_to < rho)
            throw Error(Errc::axioms_not_verified,
                        "axioms verified only below " + report_.checked_to.to_string() + ", requested " + rho.to_string());
    }

    Series2 f_;
    FglReport report_;
    std::shared_ptr<Cache> cache_;
};

/// The additive law t1 + t2.
inline Series2 additive_law(const FieldPtr& field) {
    return Series2::variable(field, 0) + Series2::variable(field, 1);
}

/// The multiplicative law t1 + t2 + t1 t2.
inline Series2 multiplicative_law(const FieldPtr& field) {
    const auto t1 = Series2::variable(field, 0), t2 = Series2::variable(field, 1);
    return t1 + t2 + t1 * t2;
}

} // namespace perfps
