#pragma once

// Truncated sparse series with exponents in Z[1/p]_{>=0}, in N = 1, 2 or 3
// variables. Series<1> covers both R[[t]] (integral support) and its
// perfection; Series<2> and Series<3> are the multivariate rings used by
// formal group laws.
//
// Precision is absolute and bounds the total degree: Modulo(rho) means every
// coefficient of total degree < rho is known and nothing is claimed at or
// above rho. Precision rules may under-claim but never over-claim.

#include <perfps/error.hpp>
#include <perfps/exponent.hpp>
#include <perfps/field.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace perfps {

template <std::size_t N>
using Monomial = std::array<Exponent, N>;

template <std::size_t N>
Monomial<N> zero_monomial(std::uint32_t p) {
    Monomial<N> m;
    m.fill(Exponent(p));
    return m;
}

template <std::size_t N>
Exponent total_degree(const Monomial<N>& m) {
    Exponent d = m[0];
    for (std::size_t i = 1; i < N; ++i) d += m[i];
    return d;
}

/// Exact, or known modulo total degree `bound`.
class Precision {
public:
    static Precision exact() { return Precision(); }
    static Precision modulo(Exponent bound) {
        if (bound.is_zero()) throw Error(Errc::invalid_argument, "precision bound must be positive");
        Precision p;
        p.bound_ = std::move(bound);
        return p;
    }

    bool is_exact() const noexcept { return !bound_.has_value(); }
    const Exponent& bound() const {
        if (!bound_) throw Error(Errc::invalid_argument, "exact series have no precision bound");
        return *bound_;
    }
    const std::optional<Exponent>& bound_or_infinity() const noexcept { return bound_; }

    /// True when a term of this total degree is representable.
    bool admits(const Exponent& degree) const { return !bound_ || degree < *bound_; }

    friend Precision min(const Precision& a, const Precision& b) {
        if (a.is_exact()) return b;
        if (b.is_exact()) return a;
        return *a.bound_ <= *b.bound_ ? a : b;
    }

    friend bool operator==(const Precision&, const Precision&) = default;

private:
    std::optional<Exponent> bound_;
};

/// Raised when a quantity depends on coefficients hidden by truncation, e.g.
/// the valuation of a series that is zero modulo t^bound.
class IndeterminateBelow : public Error {
public:
    explicit IndeterminateBelow(const Exponent& bound)
        : Error(Errc::indeterminate_below, "series vanishes below precision " + bound.to_string()), bound_(bound) {}
    const Exponent& bound() const noexcept { return bound_; }

private:
    Exponent bound_;
};

template <std::size_t N>
struct Term {
    Monomial<N> mono;
    Exponent degree;
    FieldElem coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

template <std::size_t N>
class Series {
    static_assert(N >= 1 && N <= 3, "series are supported in one to three variables");

public:
    static constexpr std::size_t arity = N;

    /// Exact zero.
    explicit Series(FieldPtr field) : field_(std::move(field)) {}

    /// Builds a normalized series: duplicate monomials are summed, zero
    /// coefficients and terms not admitted by `prec` are dropped.
    Series(FieldPtr field, std::vector<std::pair<Monomial<N>, FieldElem>> raw, Precision prec = Precision::exact())
        : field_(std::move(field)), prec_(std::move(prec)) {
        terms_.reserve(raw.size());
        for (auto& [m, c] : raw) {
            check_prime(m);
            if (c.value >= field_->order()) throw Error(Errc::invalid_argument, "coefficient outside the field");
            auto d = total_degree(m);
            terms_.push_back(Term<N>{std::move(m), std::move(d), c});
        }
        normalize();
    }

    static Series from_terms(FieldPtr field, std::vector<Term<N>> terms, Precision prec) {
        Series s(std::move(field));
        s.terms_ = std::move(terms);
        s.prec_ = std::move(prec);
        s.normalize();
        return s;
    }

    static Series zero(FieldPtr field, Precision prec = Precision::exact()) {
        Series s(std::move(field));
        s.prec_ = std::move(prec);
        return s;
    }

    static Series constant(FieldPtr field, FieldElem c) {
        const auto p = field->characteristic();
        return Series(field, {{zero_monomial<N>(p), c}});
    }

    static Series one(FieldPtr field) { return constant(field, field->one()); }

    static Series monomial(FieldPtr field, Monomial<N> m, FieldElem c) {
        return Series(std::move(field), {{std::move(m), c}});
    }

    /// The variable t_{index+1} (t itself when N = 1).
    static Series variable(FieldPtr field, std::size_t index = 0) {
        const auto p = field->characteristic();
        auto m = zero_monomial<N>(p);
        m.at(index) = Exponent::integer(p, 1);
        return Series(field, {{std::move(m), field->one()}});
    }

    const FieldPtr& field() const noexcept { return field_; }
    std::uint32_t prime() const noexcept { return field_->characteristic(); }
    std::span<const Term<N>> terms() const noexcept { return terms_; }
    const Precision& precision() const noexcept { return prec_; }
    bool is_exact() const noexcept { return prec_.is_exact(); }
    /// No visible terms; for truncated series this does not mean zero.
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    FieldElem coeff(const Monomial<N>& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term<N>& t, const Monomial<N>& key) { return t.mono < key; });
        if (it != terms_.end() && it->mono == m) return it->coeff;
        return field_->zero();
    }

    FieldElem coeff(const Exponent& e) const
        requires(N == 1)
    {
        return coeff(Monomial<1>{e});
    }

    bool has_constant_term() const {
        return !terms_.empty() && terms_.front().degree.is_zero();
    }

    friend bool operator==(const Series& a, const Series& b) {
        return *a.field_ == *b.field_ && a.prec_ == b.prec_ && a.terms_ == b.terms_;
    }

    // Access for the free-function algorithms in this header.
    std::vector<Term<N>>& mutable_terms() noexcept { return terms_; }
    void set_precision(Precision p) { prec_ = std::move(p); }

private:
    void check_prime(const Monomial<N>& m) const {
        for (const auto& e : m)
            if (!e.is_zero() && e.prime() != field_->characteristic())
                throw Error(Errc::context_mismatch, "exponent over a different prime");
    }

    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term<N>& a, const Term<N>& b) { return a.mono < b.mono; });
        std::vector<Term<N>> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().mono == t.mono) {
                out.back().coeff = field_->add(out.back().coeff, t.coeff);
            } else {
                if (!out.empty() && field_->is_zero(out.back().coeff)) out.pop_back();
                out.push_back(std::move(t));
            }
        }
        if (!out.empty() && field_->is_zero(out.back().coeff)) out.pop_back();
        if (!prec_.is_exact())
            std::erase_if(out, [&](const Term<N>& t) { return !prec_.admits(t.degree); });
        terms_ = std::move(out);
    }

    FieldPtr field_;
    std::vector<Term<N>> terms_;
    Precision prec_ = Precision::exact();
};

using PSeries = Series<1>;

namespace detail {

template <std::size_t N>
void check_same_field(const Series<N>& a, const Series<N>& b) {
    if (a.field() != b.field() && !(*a.field() == *b.field()))
        throw Error(Errc::context_mismatch, "series over different fields");
}

inline std::optional<Exponent> add_bounds(const std::optional<Exponent>& a, const std::optional<Exponent>& b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

} // namespace detail

/// Lower bound for the total-degree valuation: the least visible degree, the
/// precision bound for a truncated zero, nullopt (+infinity) for exact zero.
template <std::size_t N>
std::optional<Exponent> valuation(const Series<N>& a);

template <std::size_t N>
std::optional<Exponent> order_lower_bound(const Series<N>& a) {
    if (!a.empty()) return valuation(a);
    if (a.is_exact()) return std::nullopt;
    return a.precision().bound();
}

/// Least total degree of a nonzero term; the t-adic valuation when N = 1.
/// nullopt stands for +infinity (exact zero). Throws IndeterminateBelow for
/// a truncated series with no visible terms.
template <std::size_t N>
std::optional<Exponent> valuation(const Series<N>& a) {
    if (a.empty()) {
        if (a.is_exact()) return std::nullopt;
        throw IndeterminateBelow(a.precision().bound());
    }
    if constexpr (N == 1) return a.terms().front().degree;
    else {
        Exponent best = a.terms().front().degree;
        for (const auto& t : a.terms())
            if (t.degree < best) best = t.degree;
        return best;
    }
}

/// Drops every term of total degree >= rho. Refuses to claim more
/// precision than the input carries.
template <std::size_t N>
Series<N> truncate(const Series<N>& a, const Exponent& rho) {
    if (!a.is_exact() && a.precision().bound() < rho)
        throw Error(Errc::precision_increase,
                    "cannot refine precision " + a.precision().bound().to_string() + " to " + rho.to_string());
    std::vector<Term<N>> kept(a.terms().begin(), a.terms().end());
    return Series<N>::from_terms(a.field(), std::move(kept), Precision::modulo(rho));
}

/// Truncates to min(rho, current precision).
template <std::size_t N>
Series<N> truncate_at_most(const Series<N>& a, const std::optional<Exponent>& rho) {
    if (!rho) return a;
    if (!a.is_exact() && a.precision().bound() <= *rho) return a;
    return truncate(a, *rho);
}

template <std::size_t N>
Series<N> operator+(const Series<N>& a, const Series<N>& b) {
    detail::check_same_field(a, b);
    const auto& F = *a.field();
    const Precision prec = min(a.precision(), b.precision());
    std::vector<Term<N>> out;
    out.reserve(a.size() + b.size());
    auto ia = a.terms().begin(), ea = a.terms().end();
    auto ib = b.terms().begin(), eb = b.terms().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->mono < ib->mono)) {
            out.push_back(*ia++);
        } else if (ia == ea || ib->mono < ia->mono) {
            out.push_back(*ib++);
        } else {
            const auto c = F.add(ia->coeff, ib->coeff);
            if (!F.is_zero(c)) out.push_back(Term<N>{ia->mono, ia->degree, c});
            ++ia;
            ++ib;
        }
    }
    if (!prec.is_exact()) std::erase_if(out, [&](const Term<N>& t) { return !prec.admits(t.degree); });
    auto r = Series<N>::zero(a.field(), prec);
    r.mutable_terms() = std::move(out);
    return r;
}

template <std::size_t N>
Series<N> operator-(const Series<N>& a) {
    auto r = a;
    for (auto& t : r.mutable_terms()) t.coeff = a.field()->neg(t.coeff);
    return r;
}

template <std::size_t N>
Series<N> operator-(const Series<N>& a, const Series<N>& b) {
    return a + (-b);
}

/// c * a for a field element c.
template <std::size_t N>
Series<N> scale(const Series<N>& a, FieldElem c) {
    const auto& F = *a.field();
    if (F.is_zero(c)) return Series<N>::zero(a.field(), a.precision());
    auto r = a;
    for (auto& t : r.mutable_terms()) t.coeff = F.mul(t.coeff, c);
    return r;
}

/// Product, optionally truncated at total degree `bound`. The claimed
/// precision is min(rho_a + v(b), rho_b + v(a)) where v is the valuation
/// lower bound (a truncated zero counts as its own bound).
template <std::size_t N>
Series<N> mul(const Series<N>& a, const Series<N>& b, const std::optional<Exponent>& bound = std::nullopt) {
    detail::check_same_field(a, b);
    const auto& F = *a.field();
    Precision prec = Precision::exact();
    if (!a.is_exact())
        if (auto s = detail::add_bounds(a.precision().bound(), order_lower_bound(b))) prec = Precision::modulo(*s);
    if (!b.is_exact())
        if (auto s = detail::add_bounds(b.precision().bound(), order_lower_bound(a)))
            prec = min(prec, Precision::modulo(*s));
    if (bound) prec = min(prec, Precision::modulo(*bound));

    std::vector<Term<N>> out;
    out.reserve(a.size() * b.size());
    for (const auto& ta : a.terms()) {
        if (!prec.admits(ta.degree)) {
            if constexpr (N == 1) break;
            else continue;
        }
        for (const auto& tb : b.terms()) {
            Exponent d = ta.degree + tb.degree;
            if (!prec.admits(d)) {
                if constexpr (N == 1) break;
                else continue;
            }
            Monomial<N> m;
            if constexpr (N == 1) m[0] = d;
            else
                for (std::size_t i = 0; i < N; ++i) m[i] = ta.mono[i] + tb.mono[i];
            out.push_back(Term<N>{std::move(m), std::move(d), F.mul(ta.coeff, tb.coeff)});
        }
    }
    return Series<N>::from_terms(a.field(), std::move(out), prec);
}

template <std::size_t N>
Series<N> operator*(const Series<N>& a, const Series<N>& b) {
    return mul(a, b);
}

/// The p^n-power map: every exponent is scaled by p^n and every
/// coefficient raised to p^n. Negative n takes iterated p-th roots.
template <std::size_t N>
Series<N> frobenius(const Series<N>& a, std::int64_t n) {
    if (n == 0) return a;
    const auto& F = *a.field();
    const auto cap = F.denominator_cap();
    std::vector<Term<N>> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) {
        Monomial<N> m;
        for (std::size_t i = 0; i < N; ++i) m[i] = t.mono[i].scale_p(n, cap);
        out.push_back(Term<N>{std::move(m), t.degree.scale_p(n, cap), F.frobenius(t.coeff, n)});
    }
    Precision prec = a.is_exact() ? Precision::exact() : Precision::modulo(a.precision().bound().scale_p(n, cap));
    auto r = Series<N>::zero(a.field(), prec);
    r.mutable_terms() = std::move(out);  // scaling preserves order
    return r;
}

/// a^i for i in Z[1/p]_{>=0}. Writes i = sum_k d_k p^(k-e) in base p and
/// multiplies Frobenius images, since a^(p^j) is the p^j-power map.
template <std::size_t N>
Series<N> pow(const Series<N>& a, const Exponent& i, const std::optional<Exponent>& bound = std::nullopt) {
    const auto& field = a.field();
    if (i.is_zero()) return truncate_at_most(Series<N>::one(field), bound);
    if (a.empty() && a.is_exact()) return Series<N>::zero(field);
    const std::uint32_t p = field->characteristic();
    const auto e = static_cast<std::int64_t>(i.den_exp());

    auto result = truncate_at_most(Series<N>::one(field), bound);
    BigInt num = i.numerator();
    for (std::int64_t k = 0; num != 0; ++k) {
        BigInt q, r;
        boost::multiprecision::divide_qr(num, BigInt(p), q, r);
        num = std::move(q);
        const auto digit = static_cast<std::uint32_t>(r);
        if (digit == 0) continue;
        const auto factor = truncate_at_most(frobenius(a, k - e), bound);
        for (std::uint32_t d = 0; d < digit; ++d) result = mul(result, factor, bound);
    }
    return result;
}

/// Ordinary means every exponent is an integer (an element of R[[t]] or
/// R[[t1,...,tN]]).
template <std::size_t N>
struct Ordinariness {
    enum class Kind { yes, no, yes_up_to_precision };
    Kind kind;
    /// For `no`: the least monomial with a non-integral exponent.
    std::optional<Monomial<N>> witness;

    bool is_no() const noexcept { return kind == Kind::no; }
};

template <std::size_t N>
Ordinariness<N> is_ordinary(const Series<N>& a) {
    using K = typename Ordinariness<N>::Kind;
    for (const auto& t : a.terms())
        for (const auto& e : t.mono)
            if (!e.is_integer()) return {K::no, t.mono};
    return {a.is_exact() ? K::yes : K::yes_up_to_precision, std::nullopt};
}

/// True when a and b have identical terms of total degree < rho.
template <std::size_t N>
bool agree_below(const Series<N>& a, const Series<N>& b, const Exponent& rho) {
    auto below = [&](const Series<N>& s) {
        std::vector<Term<N>> v;
        for (const auto& t : s.terms())
            if (t.degree < rho) v.push_back(t);
        return v;
    };
    return below(a) == below(b);
}

/// Precision common to both operands (min of their bounds).
template <std::size_t N>
Precision common_precision(const Series<N>& a, const Series<N>& b) {
    return min(a.precision(), b.precision());
}

/// Equality at the precision both series claim: terms agree below the
/// smaller bound (everywhere, if both are exact).
template <std::size_t N>
bool equal_at_precision(const Series<N>& a, const Series<N>& b) {
    const auto prec = common_precision(a, b);
    if (prec.is_exact()) return a.terms().size() == b.terms().size() && std::equal(a.terms().begin(), a.terms().end(), b.terms().begin());
    return agree_below(a, b, prec.bound());
}

} // namespace perfps
