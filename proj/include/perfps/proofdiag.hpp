#pragma once

// Numerical skeleton of the non-invertibility argument for series with
// fractional support: the depth profile a_n, the pair constant c with its
// scaled values c_n, the maximal depths l and m, and the coefficient of
// t^(1 + c_{l+m}) in y(z).

#include <perfps/series.hpp>
#include <perfps/substitute.hpp>
#include <perfps/substitution.hpp>

#include <optional>
#include <string>
#include <vector>

namespace perfps {

/// a_n for one depth n: a value with its witness exponent i (a_n = i - 1),
/// +infinity, or only a lower bound when truncation hides the witness.
struct ProfileEntry {
    enum class Kind { finite, infinite, at_least };
    Kind kind = Kind::infinite;
    Exponent value;
    std::optional<Exponent> witness;

    bool finite() const noexcept { return kind == Kind::finite; }

    std::string to_string() const {
        switch (kind) {
        case Kind::finite: return value.to_string();
        case Kind::infinite: return "inf";
        case Kind::at_least: return ">=" + value.to_string();
        }
        return "?";
    }
};

struct ProofProfile {
    std::uint32_t p = 2;
    /// entries[n - 1] holds a_n for n = 1..n_max; a_n = 0 for n <= 0.
    std::vector<ProfileEntry> entries;
    /// Deepest denominator exponent in the (normalized) support.
    std::uint32_t depth = 0;

    int n_max() const noexcept { return static_cast<int>(entries.size()); }

    ProfileEntry at(int n) const {
        if (n <= 0) return {ProfileEntry::Kind::finite, Exponent(p), std::nullopt};
        return entries.at(static_cast<std::size_t>(n - 1));
    }

    bool any_finite() const {
        for (const auto& e : entries)
            if (e.finite()) return true;
        return false;
    }
};

/// Rescales y by Frobenius so that v_t(y) = 1. Valuations outside p^Z, or
/// a constant term, make the profile meaningless.
inline PSeries normalize_valuation(const PSeries& y) {
    const auto v = valuation(y);
    if (!v) throw Error(Errc::degenerate_profile, "the zero series has no profile");
    const auto n = log_p(*v);
    if (!n) throw Error(Errc::degenerate_profile, "valuation " + v->to_string() + " is not a power of p");
    return frobenius(y, -*n);
}

inline std::uint32_t support_depth(const PSeries& y) {
    std::uint32_t d = 0;
    for (const auto& t : y.terms()) d = std::max(d, t.degree.den_exp());
    return d;
}

/// a_n = min{ i - 1 : v_p(i) <= -n, y_i != 0 } for n = 1..n_max (default
/// 2 * depth + 2).
inline ProofProfile profile(const PSeries& y_in, std::optional<int> n_max = std::nullopt) {
    const PSeries y = normalize_valuation(y_in);
    ProofProfile prof;
    prof.p = y.prime();
    prof.depth = support_depth(y);
    const int top = n_max.value_or(2 * static_cast<int>(prof.depth) + 2);
    const Exponent one = Exponent::integer(prof.p, 1);
    for (int n = 1; n <= top; ++n) {
        ProfileEntry entry;
        for (const auto& t : y.terms()) {
            if (t.degree.den_exp() >= static_cast<std::uint32_t>(n)) {
                entry = {ProfileEntry::Kind::finite, t.degree - one, t.degree};
                break;
            }
        }
        if (!entry.finite() && !y.is_exact()) entry = {ProfileEntry::Kind::at_least, y.precision().bound() - one, std::nullopt};
        prof.entries.push_back(std::move(entry));
    }
    return prof;
}

enum class Side { y, z };

struct PairConstants {
    std::uint32_t p = 2;
    BigRational c;
    int l = 0;
    int m = 0;
    std::vector<std::pair<Side, int>> achievers;
    ProofProfile a;
    ProofProfile b;

    /// c_n = (p^n - 1) / p^n * c, for any integer n.
    BigRational c_n(int n) const {
        const BigRational pn = n >= 0 ? BigRational(detail::pow_int(p, static_cast<std::uint64_t>(n)))
                                      : BigRational(BigInt(1), detail::pow_int(p, static_cast<std::uint64_t>(-n)));
        return (pn - 1) / pn * c;
    }

    /// 1 + c_{l+m} as an exponent.
    Exponent obstruction_exponent() const { return Exponent::from_rational(p, 1 + c_n(l + m)); }
};

/// p-adic valuation of a nonzero rational.
inline std::int64_t rational_vp(const BigRational& r, std::uint32_t p) {
    if (r == 0) throw Error(Errc::zero_has_no_valuation, "v_p(0) is undefined");
    BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(r));
    BigInt den = boost::multiprecision::denominator(r);
    return detail::strip_p(num, p) - detail::strip_p(den, p);
}

namespace detail {

inline BigRational depth_weight(std::uint32_t p, int n) {
    const BigInt pn = pow_int(p, static_cast<std::uint64_t>(n));
    return BigRational(pn, pn - 1);
}

} // namespace detail

/// c = min over n >= 1 of p^n/(p^n - 1) a_n and the same for b_n, with the
/// maximal depths l, m at which a_l = c_l and b_m = c_m.
inline PairConstants pair_constants(const PSeries& y, const PSeries& z, std::optional<int> n_max = std::nullopt) {
    const auto depth = std::max(support_depth(normalize_valuation(y)), support_depth(normalize_valuation(z)));
    const int top = n_max.value_or(2 * static_cast<int>(depth) + 2);
    PairConstants pc;
    pc.a = profile(y, top);
    pc.b = profile(z, top);
    pc.p = pc.a.p;
    if (!pc.a.any_finite() && !pc.b.any_finite())
        throw Error(Errc::both_ordinary, "no fractional support below precision on either side");

    std::optional<BigRational> best;
    for (const auto* prof : {&pc.a, &pc.b})
        for (int n = 1; n <= top; ++n) {
            const auto& e = prof->at(n);
            if (!e.finite()) continue;
            const BigRational cand = detail::depth_weight(pc.p, n) * e.value.to_rational();
            if (!best || cand < *best) best = cand;
        }
    pc.c = *best;

    // Entries that are only bounded below, and depths beyond n_max, must be
    // unable to reach c.
    for (const auto* prof : {&pc.a, &pc.b}) {
        for (int n = 1; n <= top; ++n) {
            const auto& e = prof->at(n);
            if (e.kind == ProfileEntry::Kind::at_least &&
                !(pc.c < detail::depth_weight(pc.p, n) * e.value.to_rational()))
                throw Error(Errc::range_too_small, "truncation hides entries that may attain c");
        }
        const auto& last = prof->at(top);
        if (last.kind != ProfileEntry::Kind::infinite && pc.c > last.value.to_rational())
            throw Error(Errc::range_too_small, "depths beyond n_max may attain c");
    }

    for (int n = 1; n <= top; ++n) {
        if (pc.a.at(n).finite() && detail::depth_weight(pc.p, n) * pc.a.at(n).value.to_rational() == pc.c) {
            pc.achievers.emplace_back(Side::y, n);
            pc.l = n;
        }
        if (pc.b.at(n).finite() && detail::depth_weight(pc.p, n) * pc.b.at(n).value.to_rational() == pc.c) {
            pc.achievers.emplace_back(Side::z, n);
            pc.m = n;
        }
    }
    return pc;
}

struct Contribution {
    Exponent i;
    std::int64_t d = 0;      // -v_p(i)
    bool deep = false;       // d >= l + m
    FieldElem value;         // coefficient of t^(1 + c_{l+m}) in y_i z^i
};

struct ContradictionReport {
    PairConstants constants;
    Exponent exponent;              // 1 + c_{l+m}
    FieldElem coefficient;          // coefficient of t^exponent in y(z)
    FieldElem predicted;            // y_{1+a_l} z_1^(1+a_l)
    std::vector<Contribution> contributions;  // nonzero per-i contributions
};

/// Evaluates y(z) at t^(1 + c_{l+m}) and splits the coefficient by the
/// index i of y's support, tagging each by whether d = -v_p(i) reaches l+m.
inline ContradictionReport contradiction_coeff(const PSeries& y_in, const PSeries& z_in) {
    if (!y_in.is_exact() || !z_in.is_exact())
        throw Error(Errc::invalid_argument, "contradiction analysis needs exact series");
    const PSeries y = normalize_valuation(y_in);
    const PSeries z = normalize_valuation(z_in);
    const auto& F = *y.field();

    ContradictionReport rep{pair_constants(y, z), Exponent(y.prime()), F.zero(), F.zero(), {}};
    rep.exponent = rep.constants.obstruction_exponent();
    const Exponent bound = rep.exponent + Exponent::integer(y.prime(), 1);
    const int lm = rep.constants.l + rep.constants.m;

    for (const auto& term : y.terms()) {
        const auto power = pow(z, term.degree, bound);
        const FieldElem value = F.mul(term.coeff, power.coeff(rep.exponent));
        rep.coefficient = F.add(rep.coefficient, value);
        if (F.is_zero(value)) continue;
        const std::int64_t d = term.degree.den_exp() > 0 ? static_cast<std::int64_t>(term.degree.den_exp())
                                                         : -term.degree.vp();
        rep.contributions.push_back({term.degree, d, d >= lm, value});
    }

    const Exponent one = Exponent::integer(y.prime(), 1);
    const Exponent index = one + rep.constants.a.at(rep.constants.l).value;
    const FieldElem z1 = z.coeff(one);
    rep.predicted = F.mul(y.coeff(index), detail::field_pow_exponent(F, z1, index));
    return rep;
}

} // namespace perfps
