#include "support.hpp"

#include <gtest/gtest.h>

using namespace perfps;
using testsupport::Gen;

namespace {

Exponent E(std::uint32_t p, std::int64_t num, std::uint32_t den_exp = 0) { return Exponent(p, BigInt(num), den_exp); }

PSeries tp(const FieldPtr& F, std::int64_t num, std::uint32_t den_exp = 0) {
    return PSeries::monomial(F, {E(F->characteristic(), num, den_exp)}, F->one());
}

PerfAut random_aut(Gen& g, const FieldPtr& F) {
    return PerfAut::make(g.between(-2, 2), g.ordinary_unit(F, 5));
}

} // namespace

TEST(Substitution, ComposeSmallCases) {
    const auto F = FiniteField::make(2);
    const auto t = PSeries::variable(F);
    const auto y = t + t * t;
    EXPECT_EQ(compose(y, y), t + tp(F, 4));
    EXPECT_EQ(compose(tp(F, 3, 1), y), pow(y, E(2, 3, 1)));
    EXPECT_EQ(compose(y, tp(F, 1, 1)), tp(F, 1, 1) + t);
    EXPECT_EQ(compose(PSeries::one(F) + t, y), PSeries::one(F) + y);
}

TEST(Substitution, InnerConstantTermRejected) {
    const auto F = FiniteField::make(3);
    const auto t = PSeries::variable(F);
    try {
        (void)compose(t, t + PSeries::one(F));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::inner_has_constant_term);
    }
}

TEST(Substitution, TruncatedOuterLimitsPrecision) {
    const auto F = FiniteField::make(2);
    const auto t = PSeries::variable(F);
    const auto y = truncate(t + t * t, E(2, 3));
    const auto r = compose(y, pow(t, E(2, 2)));
    EXPECT_EQ(r.precision().bound(), E(2, 6));
    EXPECT_EQ(r, truncate(pow(t, E(2, 2)) + pow(t, E(2, 4)), E(2, 6)));
}

TEST(Substitution, ValuationMultiplies) {
    Gen g(31);
    for (int i = 0; i < 1000; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto y = g.series(F, 2, 0, 4, 3);
        const auto z = g.series(F, 2, 1, 3, 3);
        if (y.empty() || z.empty()) continue;
        const auto vy = *valuation(y), vz = *valuation(z);
        const auto r = compose(y, z, vy * vz + E(F->characteristic(), 1));
        ASSERT_FALSE(r.empty());
        EXPECT_EQ(*valuation(r), vy * vz);
    }
}

TEST(Substitution, CompositionIsAssociative) {
    Gen g(32);
    for (int i = 0; i < 200; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto p = F->characteristic();
        const auto x = g.series(F, 1, 0, 3, 3);
        const auto y = g.series(F, 1, 1, 3, 3);
        const auto z = g.series(F, 1, 1, 3, 3);
        const auto bound = E(p, 8);
        const auto lhs = compose(compose(x, y, bound), z, bound);
        const auto rhs = compose(x, compose(y, z, bound), bound);
        ASSERT_TRUE(equal_at_precision(lhs, rhs)) << print_series(lhs) << " vs " << print_series(rhs);
    }
}

TEST(Substitution, ReversionGoldenValues) {
    const auto F2 = FiniteField::make(2);
    const auto t2 = PSeries::variable(F2);
    const auto inv2 = comp_inverse_ordinary(t2 + t2 * t2, E(2, 33));
    EXPECT_EQ(inv2, testsupport::from_coeffs(F2, testsupport::reversion_t_plus_t2(2, 33), 33));
    EXPECT_EQ(print_series(inv2), "t + t^2 + t^4 + t^8 + t^16 + t^32 + O(t^33)");

    const auto F3 = FiniteField::make(3);
    const auto t3 = PSeries::variable(F3);
    const auto inv3 = comp_inverse_ordinary(t3 + t3 * t3, E(3, 5));
    EXPECT_EQ(inv3, testsupport::from_coeffs(F3, testsupport::reversion_t_plus_t2(3, 5), 5));
    EXPECT_EQ(print_series(inv3), "t + 2*t^2 + 2*t^3 + t^4 + O(t^5)");
}

TEST(Substitution, ReversionIsTwoSided) {
    Gen g(33);
    for (int i = 0; i < 100; ++i) {
        const auto F = FiniteField::make(i % 3 == 0 ? 5 : i % 2 ? 2 : 3);
        const auto p = F->characteristic();
        const auto w = g.ordinary_unit(F, 6);
        const auto rho = E(p, 12);
        const auto inv = comp_inverse_ordinary(w, rho);
        const auto t = truncate(PSeries::variable(F), rho);
        EXPECT_TRUE(equal_at_precision(compose(w, inv, rho), t));
        EXPECT_TRUE(equal_at_precision(compose(inv, w, rho), t));
    }
}

TEST(Substitution, ReversionPreconditions) {
    const auto F = FiniteField::make(2);
    const auto t = PSeries::variable(F);
    EXPECT_THROW(comp_inverse_ordinary(t + tp(F, 3, 1), E(2, 5)), Error);
    EXPECT_THROW(comp_inverse_ordinary(t * t, E(2, 5)), Error);
    EXPECT_THROW(comp_inverse_ordinary(t, E(2, 5, 1)), Error);
}

TEST(Substitution, LogP) {
    EXPECT_EQ(log_p(E(2, 8)), 3);
    EXPECT_EQ(log_p(E(2, 1, 2)), -2);
    EXPECT_EQ(log_p(E(3, 1)), 0);
    EXPECT_FALSE(log_p(E(2, 3, 1)).has_value());
    EXPECT_FALSE(log_p(E(3, 6)).has_value());
}

TEST(Substitution, ClassifyVerdicts) {
    const auto F = FiniteField::make(2);
    const auto t = PSeries::variable(F);

    const auto v1 = classify_invertible(t + tp(F, 3, 1));
    ASSERT_TRUE(std::holds_alternative<NotInvertibleNonOrdinary>(v1));
    EXPECT_EQ(std::get<NotInvertibleNonOrdinary>(v1).witness, E(2, 3, 1));

    const auto v2 = classify_invertible(tp(F, 3) + tp(F, 4));
    ASSERT_TRUE(std::holds_alternative<NotInvertibleValuation>(v2));
    EXPECT_EQ(std::get<NotInvertibleValuation>(v2).valuation, E(2, 3));

    const auto v3 = classify_invertible(tp(F, 1, 1) + t);
    ASSERT_TRUE(std::holds_alternative<Invertible>(v3));
    EXPECT_EQ(std::get<Invertible>(v3).aut.n, -1);
    EXPECT_EQ(std::get<Invertible>(v3).aut.w, t + t * t);

    const auto v4 = classify_invertible(truncate(t + t * t, E(2, 5)));
    ASSERT_TRUE(std::holds_alternative<InconclusiveAtPrecision>(v4));
    EXPECT_EQ(std::get<InconclusiveAtPrecision>(v4).precision, E(2, 5));

    // A fractional witness below the truncation point still decides.
    const auto v5 = classify_invertible(truncate(t + tp(F, 5, 2), E(2, 3)));
    EXPECT_TRUE(std::holds_alternative<NotInvertibleNonOrdinary>(v5));

    EXPECT_THROW(classify_invertible(PSeries::zero(F, Precision::modulo(E(2, 3)))), IndeterminateBelow);
}

TEST(Substitution, AutomorphismGroupAxioms) {
    Gen g(34);
    // Extension fields exercise the coefficient action of Frobenius.
    const FieldPtr fields[] = {FiniteField::make(2), FiniteField::make(3), FiniteField::make(2, 2, std::vector<std::uint32_t>{1, 1, 1}),
                               FiniteField::make(3, 2, std::vector<std::uint32_t>{1, 0, 1})};
    for (int i = 0; i < 200; ++i) {
        const auto& F = fields[i % 4];
        const auto p = F->characteristic();
        const auto a = random_aut(g, F), b = random_aut(g, F), c = random_aut(g, F);
        const auto h = g.series(F, 1, 0, 3, 4);
        const auto rho = E(p, 8);
        const auto big = E(p, 8 * 9 + 2);

        const auto ab_h = aut_apply(aut_compose(a, b), h, rho);
        ASSERT_TRUE(agree_below(ab_h, aut_apply(a, aut_apply(b, h, big), rho), rho));

        const auto lhs = aut_compose(aut_compose(a, b), c), rhs = aut_compose(a, aut_compose(b, c));
        ASSERT_TRUE(agree_below(aut_apply(lhs, h, rho), aut_apply(rhs, h, rho), rho));

        const auto id = PerfAut::identity(F);
        ASSERT_TRUE(agree_below(aut_apply(aut_compose(a, id), h, rho), aut_apply(a, h, rho), rho));
        ASSERT_TRUE(agree_below(aut_apply(aut_compose(id, a), h, rho), aut_apply(a, h, rho), rho));

        const auto inv = aut_invert(a, big);
        ASSERT_TRUE(agree_below(aut_apply(aut_compose(a, inv), h, rho), truncate_at_most(h, rho), rho));
        ASSERT_TRUE(agree_below(aut_apply(aut_compose(inv, a), h, rho), truncate_at_most(h, rho), rho));

        // The image of t classifies back to the same normal form.
        const auto v = classify_invertible(aut_image(a));
        ASSERT_TRUE(std::holds_alternative<Invertible>(v));
        EXPECT_EQ(std::get<Invertible>(v).aut.n, a.n);
        EXPECT_EQ(std::get<Invertible>(v).aut.w, a.w);
    }
}

TEST(Substitution, AutApplyIsSubstitutionOfTheImage) {
    Gen g(35);
    for (int i = 0; i < 100; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto a = random_aut(g, F);
        const auto h = g.series(F, 1, 0, 3, 4);
        const auto rho = E(F->characteristic(), 6);
        EXPECT_TRUE(agree_below(aut_apply(a, h, rho), compose(h, aut_image(a), rho), rho));
    }
}

TEST(Substitution, GreedyOnOrdinaryInputsIsReversion) {
    Gen g(36);
    for (int i = 0; i < 60; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto w = g.ordinary_unit(F, 5);
        const auto rho = E(F->characteristic(), 12);
        const auto r = greedy_perfect_inverse(w, rho);
        ASSERT_FALSE(r.stuck.has_value());
        EXPECT_EQ(r.z, comp_inverse_ordinary(w, rho));
    }
}

TEST(Substitution, GreedyStuckExample) {
    const auto F = FiniteField::make(2);
    const auto t = PSeries::variable(F);
    const auto r = greedy_perfect_inverse(t + tp(F, 3, 1), E(2, 16));
    ASSERT_TRUE(r.stuck.has_value());
    EXPECT_EQ(*r.stuck, E(2, 7, 2));
    EXPECT_EQ(r.z, t + tp(F, 3, 1));
}

TEST(Substitution, GreedyAgreesWithClassification) {
    Gen g(37);
    for (int i = 0; i < 100; ++i) {
        const auto F = FiniteField::make(i % 2 ? 2 : 3);
        const auto y = g.unit_series(F, 2, 4, 4);
        const bool invertible = std::holds_alternative<Invertible>(classify_invertible(y));
        const auto r = greedy_perfect_inverse(y, E(F->characteristic(), 16));
        ASSERT_EQ(invertible, !r.stuck.has_value()) << print_series(y);
    }
}

TEST(Substitution, GreedyNeedsEnoughInputPrecision) {
    const auto F = FiniteField::make(2);
    const auto t = PSeries::variable(F);
    EXPECT_THROW(greedy_perfect_inverse(truncate(t + t * t, E(2, 4)), E(2, 8)), Error);
}
