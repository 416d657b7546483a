#pragma once

// Text form of series and fields.
//
//   field:   GF(p)  or  GF(p^k; x^2+x+1)
//   series:  t + 2*t^(3/2) + O(t^4)        (univariate, variable t)
//            t1 + t2 + t1*t2 + O(t^5)      (two or three variables)
//
// Coefficients are integers mod p, or for k > 1 polynomials in the class g
// of x, written in parentheses when they have more than one term. O(t^r)
// bounds the total degree.

#include <perfps/series.hpp>

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <variant>

namespace perfps {

using AnySeries = std::variant<Series<1>, Series<2>, Series<3>>;

namespace detail {

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool at_end() { return peek() == '\0'; }
    std::size_t pos() const { return pos_; }

    BigInt integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return BigInt(std::string(s_.substr(start, pos_ - start)));
    }
    std::string identifier() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(Errc::syntax_error, pos_, what); }
    [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw SyntaxError(Errc::syntax_error, at, what); }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

inline FieldElem reduce_int(const FiniteField& F, const BigInt& n) {
    BigInt r = n % F.characteristic();
    if (r < 0) r += F.characteristic();
    return F.from_int(static_cast<std::int64_t>(r));
}

// Polynomial over F_p in one letter, as dense coefficients mod p.
inline std::vector<std::uint32_t> parse_prime_poly(Lexer& lx, std::uint32_t p, char letter) {
    std::vector<std::uint32_t> coeffs;
    auto add = [&](std::size_t deg, const BigInt& c) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
        BigInt r = (BigInt(coeffs[deg]) + c) % p;
        if (r < 0) r += p;
        coeffs[deg] = static_cast<std::uint32_t>(r);
    };
    bool first = true;
    while (true) {
        int sign = 1;
        if (lx.accept('-')) sign = -1;
        else if (!lx.accept('+') && !first) break;
        first = false;
        BigInt c = 1;
        bool have_number = false;
        if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
            c = lx.integer();
            have_number = true;
            if (!lx.accept('*')) {
                add(0, sign * c);
                continue;
            }
        }
        if (lx.peek() != letter) {
            if (have_number) lx.fail(std::string("expected '") + letter + "'");
            lx.fail("expected a term");
        }
        lx.expect(letter);
        std::size_t deg = 1;
        if (lx.accept('^')) deg = static_cast<std::size_t>(lx.integer());
        add(deg, sign * c);
    }
    return coeffs;
}

} // namespace detail

/// Parses `GF(p)` or `GF(p^k; poly in x)`.
inline FieldPtr parse_field(std::string_view text, std::uint32_t cap = kDefaultDenominatorCap) {
    detail::Lexer lx(text);
    if (lx.identifier() != "GF") lx.fail("expected GF(...)");
    lx.expect('(');
    const BigInt p = lx.integer();
    if (p > 65536) lx.fail("characteristic too large");
    std::uint32_t k = 1;
    if (lx.accept('^')) k = static_cast<std::uint32_t>(lx.integer());
    std::optional<std::vector<std::uint32_t>> modulus;
    if (lx.accept(';')) modulus = detail::parse_prime_poly(lx, static_cast<std::uint32_t>(p), 'x');
    lx.expect(')');
    if (!lx.at_end()) lx.fail("trailing input after field");
    return FiniteField::make(static_cast<std::uint32_t>(p), k, modulus, cap);
}

inline std::string print_field(const FiniteField& F) {
    std::string s = "GF(" + std::to_string(F.characteristic());
    if (F.degree() == 1) return s + ")";
    s += "^" + std::to_string(F.degree()) + "; ";
    const auto m = F.modulus();
    bool first = true;
    for (std::size_t d = m.size(); d-- > 0;) {
        if (m[d] == 0) continue;
        if (!first) s += "+";
        first = false;
        if (d == 0 || m[d] != 1) s += std::to_string(m[d]) + (d ? "*" : "");
        if (d >= 1) s += "x";
        if (d >= 2) s += "^" + std::to_string(d);
    }
    return s + ")";
}

namespace detail {

struct RawTerm {
    std::array<Exponent, 3> exps;
    FieldElem coeff;
};

struct RawSeries {
    std::vector<RawTerm> terms;
    std::optional<Exponent> bound;
    bool plain_t = false;       // uses `t`
    std::size_t max_index = 0;  // largest k in `tk`
};

class SeriesParser {
public:
    SeriesParser(std::string_view text, const FieldPtr& field) : lx_(text), F_(*field), p_(field->characteristic()) {}

    RawSeries parse() {
        RawSeries out;
        if (lx_.at_end()) lx_.fail("empty series");
        bool first = true;
        while (!lx_.at_end()) {
            bool negate = false;
            if (lx_.accept('-')) negate = true;
            else if (!lx_.accept('+') && !first) lx_.fail("expected '+' or '-'");
            first = false;
            if (lx_.peek() == 'O') {
                if (negate) lx_.fail("a big-O term cannot be negated");
                big_o(out);
                continue;
            }
            RawTerm term = product(out);
            if (negate) term.coeff = F_.neg(term.coeff);
            out.terms.push_back(std::move(term));
        }
        return out;
    }

private:
    Exponent exponent() {
        const std::size_t at = lx_.pos();
        if (!lx_.accept('(')) {
            if (lx_.peek() == '-') throw Error(Errc::negative_exponent, "negative exponent at position " + std::to_string(at));
            return Exponent(p_, lx_.integer(), 0, F_.denominator_cap());
        }
        if (lx_.peek() == '-') throw Error(Errc::negative_exponent, "negative exponent at position " + std::to_string(at));
        BigInt num = lx_.integer();
        BigInt den = 1;
        if (lx_.accept('/')) den = lx_.integer();
        lx_.expect(')');
        if (den == 0) lx_.fail_at("zero denominator", at);
        BigInt rest = den;
        const auto e = strip_p(rest, p_);
        if (rest != 1)
            throw Error(Errc::bad_denominator, "denominator " + den.str() + " is not a power of " + std::to_string(p_));
        return Exponent(p_, num, static_cast<std::uint32_t>(e), F_.denominator_cap());
    }

    std::size_t variable_index(const std::string& id, std::size_t at, RawSeries& out) {
        if (id == "t") {
            out.plain_t = true;
            return 0;
        }
        if (id.size() == 2 && id[0] == 't' && id[1] >= '1' && id[1] <= '3') {
            const std::size_t k = static_cast<std::size_t>(id[1] - '1');
            out.max_index = std::max(out.max_index, k + 1);
            return k;
        }
        throw Error(Errc::unknown_variable, "unknown variable '" + id + "' at position " + std::to_string(at));
    }

    FieldElem g_power() {
        std::uint64_t d = 1;
        if (lx_.accept('^')) d = static_cast<std::uint64_t>(lx_.integer());
        return F_.pow(F_.generator(), d);
    }

    FieldElem g_polynomial() {
        FieldElem acc = F_.zero();
        bool first = true;
        while (true) {
            int sign = 1;
            if (lx_.accept('-')) sign = -1;
            else if (!lx_.accept('+') && !first) break;
            first = false;
            FieldElem c = F_.one();
            bool have_number = false;
            if (std::isdigit(static_cast<unsigned char>(lx_.peek()))) {
                c = reduce_int(F_, lx_.integer());
                have_number = true;
            }
            if (!have_number || lx_.accept('*')) {
                const std::size_t at = lx_.pos();
                if (lx_.identifier() != "g") lx_.fail_at("expected 'g'", at);
                require_extension(at);
                c = F_.mul(c, g_power());
            }
            acc = sign > 0 ? F_.add(acc, c) : F_.sub(acc, c);
        }
        return acc;
    }

    void require_extension(std::size_t at) {
        if (F_.degree() == 1)
            throw Error(Errc::unknown_variable, "'g' needs an extension field (position " + std::to_string(at) + ")");
    }

    RawTerm product(RawSeries& out) {
        RawTerm term{{Exponent(p_), Exponent(p_), Exponent(p_)}, F_.one()};
        do {
            const char c = lx_.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                term.coeff = F_.mul(term.coeff, reduce_int(F_, lx_.integer()));
            } else if (c == '(') {
                lx_.expect('(');
                term.coeff = F_.mul(term.coeff, g_polynomial());
                lx_.expect(')');
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t at = lx_.pos();
                const std::string id = lx_.identifier();
                if (id == "g") {
                    require_extension(at);
                    term.coeff = F_.mul(term.coeff, g_power());
                    continue;
                }
                const std::size_t k = variable_index(id, at, out);
                Exponent e = Exponent::integer(p_, 1);
                if (lx_.accept('^')) e = exponent();
                term.exps[k] = term.exps[k] + e;
            } else {
                lx_.fail("expected a term");
            }
        } while (lx_.accept('*'));
        return term;
    }

    void big_o(RawSeries& out) {
        lx_.expect('O');
        lx_.expect('(');
        const std::size_t at = lx_.pos();
        const std::string id = lx_.identifier();
        if (id != "t") throw Error(Errc::unknown_variable, "big-O uses 't' (position " + std::to_string(at) + ")");
        Exponent e = Exponent::integer(p_, 1);
        if (lx_.accept('^')) e = exponent();
        lx_.expect(')');
        if (e.is_zero()) lx_.fail_at("big-O bound must be positive", at);
        if (!out.bound || e < *out.bound) out.bound = e;
    }

    Lexer lx_;
    const FiniteField& F_;
    std::uint32_t p_;
};

template <std::size_t N>
Series<N> build_series(const FieldPtr& field, const RawSeries& raw) {
    std::vector<std::pair<Monomial<N>, FieldElem>> terms;
    terms.reserve(raw.terms.size());
    for (const auto& t : raw.terms) {
        Monomial<N> m = zero_monomial<N>(field->characteristic());
        for (std::size_t i = 0; i < N; ++i) m[i] = t.exps[i];
        terms.push_back({m, t.coeff});
    }
    return Series<N>(field, std::move(terms), raw.bound ? Precision::modulo(*raw.bound) : Precision::exact());
}

} // namespace detail

/// Parses a series in N variables. For N = 1 the variable is `t` (or `t1`);
/// otherwise `t1`..`tN`.
template <std::size_t N>
Series<N> parse_series(std::string_view text, const FieldPtr& field) {
    if (text.find_first_not_of(" \t\r\n") != std::string_view::npos && text.substr(text.find_first_not_of(" \t\r\n")) == "0")
        return Series<N>::zero(field);
    const auto raw = detail::SeriesParser(text, field).parse();
    if (N == 1 ? raw.max_index > 1 : raw.plain_t || raw.max_index > N)
        throw Error(Errc::unknown_variable, "variables do not match a series in " + std::to_string(N) + " variable(s)");
    return detail::build_series<N>(field, raw);
}

/// Parses a series and infers the number of variables: `t` alone means one,
/// otherwise the largest index among `t1`, `t2`, `t3`.
inline AnySeries parse_any_series(std::string_view text, const FieldPtr& field) {
    const auto raw = detail::SeriesParser(text, field).parse();
    if (raw.plain_t && raw.max_index > 0) throw Error(Errc::unknown_variable, "cannot mix 't' with indexed variables");
    switch (raw.max_index) {
    case 0:
    case 1: return detail::build_series<1>(field, raw);
    case 2: return detail::build_series<2>(field, raw);
    default: return detail::build_series<3>(field, raw);
    }
}

inline std::string print_coeff(const FiniteField& F, FieldElem c) {
    if (F.degree() == 1) return std::to_string(c.value);
    const auto digits = F.digits(c);
    std::string s;
    int parts = 0;
    for (std::size_t d = digits.size(); d-- > 0;) {
        if (digits[d] == 0) continue;
        if (parts++) s += "+";
        if (d == 0) {
            s += std::to_string(digits[d]);
            continue;
        }
        if (digits[d] != 1) s += std::to_string(digits[d]) + "*";
        s += "g";
        if (d >= 2) s += "^" + std::to_string(d);
    }
    if (parts == 0) return "0";
    return parts == 1 ? s : "(" + s + ")";
}

inline std::string print_exponent(const Exponent& e) {
    if (e.is_integer()) return e.to_string();
    return "(" + e.to_string() + ")";
}

template <std::size_t N>
std::string print_series(const Series<N>& s) {
    const auto& F = *s.field();
    // Multivariate terms go by total degree, then t1 before t2 before t3.
    std::vector<const Term<N>*> order;
    for (const auto& term : s.terms()) order.push_back(&term);
    if constexpr (N > 1)
        std::stable_sort(order.begin(), order.end(), [](const Term<N>* a, const Term<N>* b) {
            if (a->degree != b->degree) return a->degree < b->degree;
            return b->mono < a->mono;
        });
    std::string out;
    for (const auto* tp : order) {
        const auto& term = *tp;
        if (!out.empty()) out += " + ";
        std::string mono;
        for (std::size_t i = 0; i < N; ++i) {
            const auto& e = term.mono[i];
            if (e.is_zero()) continue;
            if (!mono.empty()) mono += "*";
            mono += N == 1 ? std::string("t") : "t" + std::to_string(i + 1);
            if (e != Exponent::integer(e.prime(), 1)) mono += "^" + print_exponent(e);
        }
        const bool unit = term.coeff == F.one();
        if (mono.empty()) out += print_coeff(F, term.coeff);
        else if (unit) out += mono;
        else out += print_coeff(F, term.coeff) + "*" + mono;
    }
    if (!s.is_exact()) {
        if (!out.empty()) out += " + ";
        out += "O(t";
        const auto& b = s.precision().bound();
        if (b != Exponent::integer(b.prime(), 1)) out += "^" + print_exponent(b);
        out += ")";
    }
    return out.empty() ? "0" : out;
}

inline std::string print_any(const AnySeries& s) {
    return std::visit([](const auto& x) { return print_series(x); }, s);
}

} // namespace perfps
