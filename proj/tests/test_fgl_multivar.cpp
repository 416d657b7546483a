#include "support.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace perfps;
using testsupport::Gen;

namespace {

Exponent E(std::uint32_t p, std::int64_t num, std::uint32_t den_exp = 0) { return Exponent(p, BigInt(num), den_exp); }

Series2 law(const FieldPtr& F, const std::string& text) { return parse_series<2>(text, F); }

// Conjugates of the multiplicative law by random automorphisms.
std::vector<FormalGroupLaw> random_conjugates(Gen& g, const FieldPtr& F, int count, const Exponent& rho) {
    const auto base = FormalGroupLaw::verified(multiplicative_law(F), rho);
    std::vector<FormalGroupLaw> out;
    for (int i = 0; i < count; ++i) {
        const auto u = frobenius(g.ordinary_unit(F, 3), g.between(-1, 1));
        out.push_back(FormalGroupLaw::verified(base.conjugate(u, rho), rho));
    }
    return out;
}

} // namespace

TEST(Multivar, SwapAndEmbed) {
    const auto F = FiniteField::make(3);
    const auto f = law(F, "t1 + 2*t1^2*t2^(1/3) + t2^3");
    EXPECT_EQ(print_series(swap_variables(f)), "t2 + 2*t1^(1/3)*t2^2 + t1^3");
    EXPECT_EQ(swap_variables(swap_variables(f)), f);
    const auto g = embed<3>(parse_series<1>("t + t^(4/3)", F), 2);
    EXPECT_EQ(print_series(g), "t3 + t3^(4/3)");
}

TEST(Multivar, IdentitySubstitution) {
    Gen g(51);
    for (int i = 0; i < 100; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto f = g.multi<2>(F, 2, 3, 5);
        EXPECT_EQ((substitute<2, 2>(f, identity_map<2>(F))), f);
        const auto h = g.multi<3>(F, 1, 2, 5);
        EXPECT_EQ((substitute<3, 3>(h, identity_map<3>(F))), h);
    }
}

TEST(Multivar, SubstitutionIsAssociative) {
    Gen g(52);
    for (int i = 0; i < 100; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto p = F->characteristic();
        const auto f = g.multi<2>(F, 1, 2, 3);
        const std::array<Series2, 2> G{g.multi<2>(F, 1, 2, 2, false), g.multi<2>(F, 1, 2, 2, false)};
        const std::array<Series2, 2> H{g.multi<2>(F, 1, 2, 2, false), g.multi<2>(F, 1, 2, 2, false)};
        const auto bound = E(p, 5);
        const auto lhs = substitute<2, 2>(substitute<2, 2>(f, G, bound), H, bound);
        const auto rhs = substitute<2, 2>(f, compose_maps(G, H, bound), bound);
        ASSERT_TRUE(equal_at_precision(lhs, rhs)) << print_series(lhs) << " vs " << print_series(rhs);
    }
}

TEST(Multivar, ShearRoundTrip) {
    Gen g(53);
    for (int i = 0; i < 100; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto p = F->characteristic();
        const auto f = g.series(F, 2, 0, 5, 4);
        const auto fm = f - PSeries::constant(F, f.coeff(E(p, 0)));
        const auto bound = E(p, 6);
        const auto there = shear(fm), back = shear(fm, true);
        const auto round = compose_maps(there, back, bound);
        const auto id = identity_map<2>(F);
        EXPECT_TRUE(equal_at_precision(round[0], truncate(id[0], bound)));
        EXPECT_TRUE(equal_at_precision(round[1], truncate(id[1], bound)));
    }
}

TEST(Multivar, ArityMismatchOnParse) {
    const auto F = FiniteField::make(2);
    EXPECT_THROW(parse_series<2>("t1 + t3", F), Error);
    EXPECT_THROW(parse_series<2>("t + t2", F), Error);
}

// ---------------------------------------------------------------------------

TEST(Fgl, ExampleLawsPass) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto F = FiniteField::make(p);
        EXPECT_TRUE(fgl_check(additive_law(F), E(p, 8)).passed());
        EXPECT_TRUE(fgl_check(multiplicative_law(F), E(p, 8)).passed());
    }
}

TEST(Fgl, CheckReportsWitnesses) {
    const auto F = FiniteField::make(3);
    const auto asym = fgl_check(law(F, "t1 + t2 + t1^2*t2"), E(3, 6));
    EXPECT_FALSE(asym.symmetric);
    EXPECT_EQ(asym.symmetry_witness->at(0), E(3, 2));

    const auto nonunital = fgl_check(law(F, "t1 + t2 + t1^2 + t2^2"), E(3, 6));
    EXPECT_TRUE(nonunital.symmetric);
    EXPECT_FALSE(nonunital.unital);
    ASSERT_TRUE(nonunital.unit_witness.has_value());

    const auto nonassoc = fgl_check(law(F, "t1 + t2 + t1^2*t2 + t1*t2^2"), E(3, 6));
    EXPECT_TRUE(nonassoc.symmetric);
    EXPECT_TRUE(nonassoc.unital);
    EXPECT_FALSE(nonassoc.associative);
    EXPECT_TRUE(nonassoc.associativity_witness.has_value());

    EXPECT_THROW(FormalGroupLaw::verified(law(F, "t1 + t2 + t1^2*t2"), E(3, 6)), Error);
}

TEST(Fgl, CheckedRangeLimitsOperations) {
    const auto F = FiniteField::make(2);
    const auto G = FormalGroupLaw::verified(multiplicative_law(F), E(2, 6));
    EXPECT_NO_THROW(G.mul_int(3, E(2, 6)));
    try {
        (void)G.mul_int(3, E(2, 7));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::axioms_not_verified);
    }
    // A truncated law is only checked up to its own precision.
    const auto T = fgl_check(truncate(multiplicative_law(F), E(2, 4)), E(2, 10));
    EXPECT_EQ(T.checked_to, E(2, 4));
}

TEST(Fgl, MultiplicationByIntegersMatchesBinomials) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto F = FiniteField::make(p);
        const auto G = FormalGroupLaw::verified(multiplicative_law(F), E(p, 12));
        for (std::int64_t m = 0; m <= 12; ++m)
            EXPECT_EQ(G.mul_int(m, E(p, 12)), testsupport::from_coeffs(F, testsupport::binomial_series(m, p, 12), 12));
        EXPECT_EQ(G.mul_int(p, E(p, 12)), truncate(PSeries::monomial(F, {E(p, p)}, F->one()), E(p, 12)));
    }
    const auto F5 = FiniteField::make(5);
    const auto G5 = FormalGroupLaw::verified(multiplicative_law(F5), E(5, 7));
    EXPECT_EQ(print_series(G5.mul_int(6, E(5, 7))), "t + t^5 + t^6 + O(t^7)");
}

TEST(Fgl, FormalInverseGolden) {
    const auto F3 = FiniteField::make(3);
    const auto G3 = FormalGroupLaw::verified(multiplicative_law(F3), E(3, 5));
    EXPECT_EQ(print_series(G3.formal_inverse(E(3, 5))), "2*t + t^2 + 2*t^3 + t^4 + O(t^5)");
    const auto F2 = FiniteField::make(2);
    const auto G2 = FormalGroupLaw::verified(multiplicative_law(F2), E(2, 5));
    EXPECT_EQ(print_series(G2.formal_inverse(E(2, 5))), "t + t^2 + t^3 + t^4 + O(t^5)");
    const auto A = FormalGroupLaw::verified(additive_law(F3), E(3, 5));
    EXPECT_EQ(print_series(A.formal_inverse(E(3, 5))), "2*t + O(t^5)");
}

TEST(Fgl, IntegerMultiplicationLaws) {
    Gen g(54);
    for (std::uint32_t p : {2u, 3u}) {
        const auto F = FiniteField::make(p);
        const auto rho = E(p, 8);
        auto laws = random_conjugates(g, F, 10, rho);
        laws.push_back(FormalGroupLaw::verified(additive_law(F), rho));
        laws.push_back(FormalGroupLaw::verified(multiplicative_law(F), rho));
        for (const auto& G : laws) {
            const auto t = PSeries::variable(F);
            for (std::int64_t m1 = -6; m1 <= 6; m1 += 3)
                for (std::int64_t m2 = -6; m2 <= 6; m2 += 2) {
                    const auto a = G.mul_int(m1, rho), b = G.mul_int(m2, rho);
                    ASSERT_TRUE(equal_at_precision(G.mul_int(m1 + m2, rho), substitute<2, 1>(G.law(), {a, b}, rho)));
                    ASSERT_TRUE(equal_at_precision(G.mul_int(m1 * m2, rho), compose(a, b, rho)));
                }
            const auto mp = G.mul_int(p, rho);
            for (const auto& term : mp.terms()) {
                ASSERT_TRUE(term.degree.is_integer());
                EXPECT_EQ(term.degree.numerator() % p, 0);
            }
            const auto iota = G.formal_inverse(rho);
            EXPECT_TRUE((substitute<2, 1>(G.law(), {t, iota}, rho).empty()));
        }
    }
}

TEST(Fgl, PadicMultiplication) {
    const auto F2 = FiniteField::make(2);
    const auto rho = E(2, 16);
    const auto G = FormalGroupLaw::verified(multiplicative_law(F2), rho);
    // 1/3 mod 2^6 = 43, and 3 * (1/3) = 1.
    const auto third = G.mul_zp(BigInt(43), 6, rho);
    EXPECT_EQ(third.stabilized_at, 4u);
    EXPECT_EQ(third.representative, BigInt(11));
    EXPECT_TRUE(equal_at_precision(compose(G.mul_int(3, rho), third.series, rho), truncate(PSeries::variable(F2), rho)));
    EXPECT_EQ(is_ordinary(third.series).kind, Ordinariness<1>::Kind::yes_up_to_precision);
    // -1 mod 2^6.
    const auto minus = G.mul_zp(BigInt(63), 6, rho);
    EXPECT_EQ(minus.series, G.formal_inverse(rho));

    try {
        (void)G.mul_zp(BigInt(3), 2, rho);
        FAIL();
    } catch (const NotStabilized& e) {
        EXPECT_EQ(e.achieved(), E(2, 4));
    }
}

TEST(Fgl, UnitActionIsInvertible) {
    // a * a^-1 = 1 for a in {-1, 1/3, 1/(1-p)}, with a^-1 in {-1, 3, 1-p}.
    Gen g(55);
    for (std::uint32_t p : {2u, 5u}) {
        const auto F = FiniteField::make(p);
        const auto rho = E(p, 16);
        const unsigned K = 8;
        const BigInt mod = detail::pow_int(p, K);
        auto inverse_mod = [&](std::int64_t d) {
            return boost::multiprecision::powm(BigInt(((d % mod) + mod) % mod), mod / p * (p - 1) - 1, mod);
        };
        auto residue = [&](std::int64_t a) { return BigInt(((BigInt(a) % mod) + mod) % mod); };
        const std::vector<std::pair<BigInt, BigInt>> pairs = {
            {residue(-1), residue(-1)},
            {inverse_mod(3), residue(3)},
            {inverse_mod(1 - static_cast<std::int64_t>(p)), residue(1 - static_cast<std::int64_t>(p))},
        };
        auto laws = random_conjugates(g, F, 3, rho);
        laws.push_back(FormalGroupLaw::verified(multiplicative_law(F), rho));
        laws.push_back(FormalGroupLaw::verified(additive_law(F), rho));
        for (const auto& G : laws)
            for (const auto& [a, b] : pairs) {
                const auto sa = G.mul_zp(a, K, rho).series, sb = G.mul_zp(b, K, rho).series;
                EXPECT_TRUE(equal_at_precision(compose(sa, sb, rho), truncate(PSeries::variable(F), rho)));
                EXPECT_FALSE(is_ordinary(sa).is_no());
            }
    }
}

TEST(Fgl, ConjugationPreservesAxioms) {
    Gen g(56);
    for (int i = 0; i < 20; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto p = F->characteristic();
        const auto rho = E(p, 6);
        const auto base = FormalGroupLaw::verified(i % 4 < 2 ? multiplicative_law(F) : additive_law(F), rho);
        const auto u = frobenius(g.ordinary_unit(F, 3), g.between(-1, 1));
        const auto fu = base.conjugate(u, rho);
        const auto rep = fgl_check(fu, rho);
        EXPECT_TRUE(rep.passed()) << rep.describe();
        EXPECT_EQ(rep.checked_to, rho);
    }
    const auto F = FiniteField::make(2);
    const auto G = FormalGroupLaw::verified(multiplicative_law(F), E(2, 6));
    EXPECT_THROW(G.conjugate(parse_series<1>("t + t^(3/2)", F), E(2, 6)), Error);
}

TEST(Fgl, ConcurrentMultiplicationIsConsistent) {
    const auto F = FiniteField::make(3);
    const auto rho = E(3, 10);
    const auto G = FormalGroupLaw::verified(multiplicative_law(F), rho);
    std::vector<PSeries> results(8, PSeries::zero(F));
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < results.size(); ++i)
        threads.emplace_back([&, i] { results[i] = G.mul_int(static_cast<std::int64_t>(5 + i), rho); });
    for (auto& th : threads) th.join();
    for (std::size_t i = 0; i < results.size(); ++i)
        EXPECT_EQ(results[i], testsupport::from_coeffs(F, testsupport::binomial_series(static_cast<std::int64_t>(5 + i), 3, 10), 10));
}
