#pragma once

// Command-line front end. run_cli is separate from main so the test suite can
// drive it in-process and compare output byte for byte.

#include <perfps/perfps.hpp>

#include "CLI11.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace perfps::cli {

enum ExitCode : int { ok = 0, failure = 1, verdict = 2, usage = 64 };

namespace detail {

inline std::string load_input(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw Error(Errc::invalid_argument, "cannot read " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

inline Exponent parse_exponent(const std::string& text, const FieldPtr& field) {
    // Reuse the series grammar: "t^(text)".
    const std::string wrapped = text.find('/') != std::string::npos ? "t^(" + text + ")" : "t^" + text;
    const auto s = parse_series<1>(wrapped, field);
    if (s.empty()) throw Error(Errc::invalid_argument, "bad exponent '" + text + "'");
    return s.terms().front().degree;
}

inline PSeries inverse_series(const PerfAut& a, const Exponent& rho) {
    // y = w^(p^n) has inverse w^-1(t^(p^-n)), known below rho when w^-1 is
    // known below rho * p^n.
    const auto& field = a.w.field();
    const auto p = field->characteristic();
    const Exponent needed = rho.scale_p(a.n, ~0U);
    const BigInt top = needed.numerator() / perfps::detail::pow_int(p, needed.den_exp()) + 2;
    const PSeries w_inv = comp_inverse_ordinary(a.w, Exponent(p, top));
    const PSeries root = PSeries::monomial(field, {Exponent::integer(p, 1).scale_p(-a.n, field->denominator_cap())},
                                           field->one());
    return truncate_at_most(compose(w_inv, root, rho), rho);
}

inline std::string rational_string(const BigRational& r) {
    const BigInt n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
    return d == 1 ? n.str() : n.str() + "/" + d.str();
}

inline void table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], r[i].size());
        }
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) line += "  ";
            line += std::string(width[i] - r[i].size(), ' ') + r[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    }
}

inline std::string weighted(const ProfileEntry& e, std::uint32_t p, int n) {
    if (!e.finite()) return e.kind == ProfileEntry::Kind::infinite ? "inf" : "?";
    const BigInt pn = perfps::detail::pow_int(p, static_cast<std::uint64_t>(n));
    return rational_string(BigRational(pn, pn - 1) * e.value.to_rational());
}

// Uniform draw in [0, n) from the raw generator so output does not depend on
// the standard library's distribution implementation.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return n ? rng() % n : 0; }

inline PSeries random_ordinary_unit(std::mt19937_64& rng, const FieldPtr& field, int max_degree) {
    const auto& F = *field;
    const auto p = F.characteristic();
    std::vector<std::pair<Monomial<1>, FieldElem>> terms;
    terms.push_back({{Exponent::integer(p, 1)}, FieldElem{static_cast<std::uint32_t>(1 + draw(rng, F.order() - 1))}});
    for (int d = 2; d <= max_degree; ++d)
        terms.push_back({{Exponent::integer(p, d)}, FieldElem{static_cast<std::uint32_t>(draw(rng, F.order()))}});
    return PSeries(field, std::move(terms), Precision::exact());
}

} // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Arithmetic in perfect power series rings over finite fields", "perfps"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all");

    std::string field_text = "GF(2)";
    std::string prec_text;
    std::uint64_t seed = 0;
    app.add_option("--field", field_text, "coefficient field, GF(p) or GF(p^k; modulus in x)");
    app.add_option("--prec", prec_text, "precision bound rho (exclusive), e.g. 16 or 7/4");
    app.add_option("--seed", seed, "seed for randomized searches");

    std::vector<std::string> inputs;
    std::int64_t count = 0;
    std::string zp_value;
    unsigned zp_digits = 0;
    int n_max = 0;

    auto two = [&](const char* name, const char* desc) {
        auto* c = app.add_subcommand(name, desc);
        c->add_option("inputs", inputs, "series or @file")->expected(2)->required();
        return c;
    };
    auto one = [&](const char* name, const char* desc) {
        auto* c = app.add_subcommand(name, desc);
        c->add_option("inputs", inputs, "series or @file")->expected(1)->required();
        return c;
    };
    two("add", "sum of two series");
    two("sub", "difference of two series");
    two("mul", "product of two series");
    two("compose", "y(z) for univariate y, z");
    one("frobenius", "p^n-th power map")->add_option("-n,--power", count, "n (may be negative)")->required();
    one("invert", "compositional inverse of an automorphism-inducing series");
    one("classify", "decide whether substitution of y is an automorphism");
    one("greedy", "term-by-term inversion attempt; reports where it gets stuck");
    one("profile", "depth profile a_n")->add_option("--n-max", n_max, "largest depth n");
    two("pair-constants", "constants c, c_n, l, m for a pair y, z")->add_option("--n-max", n_max, "largest depth n");
    two("contradiction", "coefficient of y(z) at t^(1 + c_{l+m})");
    one("fgl-check", "verify the formal group law axioms");
    one("fgl-mul", "[m](t) for an integer m")->add_option("-m", count, "multiplier")->required();
    auto* zp = one("fgl-zp", "[a](t) for a p-adic integer a");
    zp->add_option("-a", zp_value, "a as an integer or a fraction with denominator prime to p")->required();
    zp->add_option("-K", zp_digits, "number of p-adic digits of a to use")->required();
    two("fgl-conjugate", "law f conjugated by the automorphism u: fgl-conjugate F U");
    one("fgl-search", "check random conjugates of a law for fractional exponents")
        ->add_option("--trials", count, "number of conjugates")
        ->default_val(20);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        const FieldPtr field = parse_field(field_text);
        const auto p = field->characteristic();
        std::optional<Exponent> prec;
        if (!prec_text.empty()) prec = detail::parse_exponent(prec_text, field);
        auto prec_or = [&](std::int64_t fallback) { return prec ? *prec : Exponent::integer(p, fallback); };
        for (auto& s : inputs) s = detail::load_input(s);
        auto uni = [&](std::size_t i) { return parse_series<1>(inputs.at(i), field); };

        if (verb == "add" || verb == "sub" || verb == "mul") {
            auto a = parse_any_series(inputs[0], field);
            auto b = parse_any_series(inputs[1], field);
            if (a.index() != b.index()) throw Error(Errc::arity_mismatch, "operands have different numbers of variables");
            std::visit(
                [&](const auto& x) {
                    using S = std::decay_t<decltype(x)>;
                    const auto& y = std::get<S>(b);
                    S r = verb == "add" ? x + y : verb == "sub" ? x - y : mul(x, y, prec);
                    if (prec && verb != "mul") r = truncate_at_most(r, *prec);
                    out << print_series(r) << "\n";
                },
                a);
            return ok;
        }
        if (verb == "compose") {
            out << print_series(compose(uni(0), uni(1), prec)) << "\n";
            return ok;
        }
        if (verb == "frobenius") {
            auto r = frobenius(uni(0), count);
            if (prec) r = truncate_at_most(r, *prec);
            out << print_series(r) << "\n";
            return ok;
        }
        if (verb == "classify" || verb == "invert") {
            const auto v = classify_invertible(uni(0));
            if (const auto* inv = std::get_if<Invertible>(&v)) {
                if (verb == "invert") out << print_series(detail::inverse_series(inv->aut, prec_or(16))) << "\n";
                else out << "invertible: n=" << inv->aut.n << " w=" << print_series(inv->aut.w) << "\n";
                return ok;
            }
            if (const auto* nv = std::get_if<NotInvertibleValuation>(&v))
                out << "not-invertible: valuation " << nv->valuation.to_string() << " is not a power of " << p << "\n";
            else if (const auto* no = std::get_if<NotInvertibleNonOrdinary>(&v))
                out << "not-invertible: non-ordinary witness " << no->witness.to_string() << "\n";
            else if (std::holds_alternative<NotInvertibleNonUnit>(v))
                out << "not-invertible: non-unit leading coefficient\n";
            else
                out << "inconclusive: at precision " << std::get<InconclusiveAtPrecision>(v).precision.to_string() << "\n";
            return verdict;
        }
        if (verb == "greedy") {
            const auto g = greedy_perfect_inverse(uni(0), prec_or(16));
            if (g.stuck) {
                out << "stuck: " << g.stuck->to_string() << "\n" << "partial: " << print_series(g.z) << "\n";
                return verdict;
            }
            out << print_series(g.z) << "\n";
            return ok;
        }
        if (verb == "profile") {
            const auto prof = profile(uni(0), n_max > 0 ? std::optional<int>(n_max) : std::nullopt);
            std::vector<std::vector<std::string>> rows{{"n", "a_n", "witness", "weighted"}};
            for (int n = 1; n <= prof.n_max(); ++n) {
                const auto e = prof.at(n);
                rows.push_back({std::to_string(n), e.to_string(), e.witness ? e.witness->to_string() : "-",
                                detail::weighted(e, p, n)});
            }
            detail::table(out, rows);
            out << "\n" << "a_1=" << prof.at(1).to_string() << "\n";
            for (int n = 1; n <= prof.n_max(); ++n) out << "a_n@" << n << "=" << prof.at(n).to_string() << "\n";
            return ok;
        }
        if (verb == "pair-constants" || verb == "contradiction") {
            const auto y = uni(0), z = uni(1);
            if (verb == "contradiction") {
                const auto rep = contradiction_coeff(y, z);
                std::vector<std::vector<std::string>> rows{{"i", "d", "deep", "value"}};
                for (const auto& c : rep.contributions)
                    rows.push_back({c.i.to_string(), std::to_string(c.d), c.deep ? "yes" : "no",
                                    print_coeff(*field, c.value)});
                detail::table(out, rows);
                out << "\n"
                    << "c=" << detail::rational_string(rep.constants.c) << "\n"
                    << "l=" << rep.constants.l << "\n"
                    << "m=" << rep.constants.m << "\n"
                    << "exponent=" << rep.exponent.to_string() << "\n"
                    << "coefficient=" << print_coeff(*field, rep.coefficient) << "\n"
                    << "predicted=" << print_coeff(*field, rep.predicted) << "\n";
                return ok;
            }
            const auto pc = pair_constants(y, z, n_max > 0 ? std::optional<int>(n_max) : std::nullopt);
            std::vector<std::vector<std::string>> rows{{"n", "a_n", "b_n", "c_n"}};
            for (int n = 1; n <= pc.a.n_max(); ++n)
                rows.push_back({std::to_string(n), pc.a.at(n).to_string(), pc.b.at(n).to_string(),
                                detail::rational_string(pc.c_n(n))});
            detail::table(out, rows);
            out << "\n"
                << "a_1=" << pc.a.at(1).to_string() << "\n"
                << "b_1=" << pc.b.at(1).to_string() << "\n"
                << "c=" << detail::rational_string(pc.c) << "\n";
            for (int n = 1; n <= std::max(pc.l + pc.m, 1); ++n)
                out << "c_n@" << n << "=" << detail::rational_string(pc.c_n(n)) << "\n";
            out << "l=" << pc.l << "\n" << "m=" << pc.m << "\n";
            return ok;
        }
        if (verb.rfind("fgl-", 0) == 0) {
            const auto f = parse_series<2>(inputs.at(0), field);
            const Exponent rho = prec_or(8);
            if (verb == "fgl-check") {
                const auto rep = fgl_check(f, rho);
                out << rep.describe() << "\n";
                return rep.passed() ? ok : verdict;
            }
            const auto law = FormalGroupLaw::verified(f, rho);
            if (verb == "fgl-mul") {
                out << print_series(law.mul_int(count, rho)) << "\n";
                return ok;
            }
            if (verb == "fgl-zp") {
                // a = num/den with p not dividing den, reduced mod p^K.
                const auto slash = zp_value.find('/');
                const BigInt num(zp_value.substr(0, slash));
                const BigInt den(slash == std::string::npos ? "1" : zp_value.substr(slash + 1));
                const BigInt mod = perfps::detail::pow_int(p, zp_digits);
                if (den % p == 0) throw Error(Errc::invalid_argument, "denominator must be prime to p");
                // den^-1 mod p^K by Euler: den^(phi(p^K) - 1).
                const BigInt phi = mod / p * (p - 1);
                const BigInt den_inv = boost::multiprecision::powm(((den % mod) + mod) % mod, phi - 1, mod);
                const BigInt a_K = (((num % mod) + mod) % mod * den_inv) % mod;
                const auto r = law.mul_zp(a_K, zp_digits, rho);
                out << print_series(r.series) << "\n";
                return ok;
            }
            if (verb == "fgl-conjugate") {
                out << print_series(law.conjugate(uni(1), rho)) << "\n";
                return ok;
            }
            // fgl-search
            std::mt19937_64 rng(seed);
            std::int64_t fractional = 0, failed = 0;
            for (std::int64_t trial = 0; trial < count; ++trial) {
                const std::int64_t n = static_cast<std::int64_t>(detail::draw(rng, 3)) - 1;
                const auto w = detail::random_ordinary_unit(rng, field, 4);
                const auto g = law.conjugate(frobenius(w, n), rho);
                if (!fgl_check(g, rho).passed()) ++failed;
                if (is_ordinary(g).is_no()) ++fractional;
            }
            out << "trials=" << count << "\n"
                << "fractional=" << fractional << "\n"
                << "axiom_failures=" << failed << "\n";
            if (fractional == 0) out << "note: no conjugate with fractional exponents; this proves nothing\n";
            return ok;
        }
        err << "error: unknown command " << verb << "\n";
        return usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.code()) {
        case Errc::syntax_error:
        case Errc::bad_denominator:
        case Errc::unknown_variable:
        case Errc::negative_exponent:
        case Errc::not_prime:
        case Errc::reducible_modulus:
        case Errc::degree_mismatch:
        case Errc::field_too_large: return usage;
        default: return failure;
        }
    }
}

} // namespace perfps::cli
