#include <gtest/gtest.h>

#include <cmath>

#include "buckdens/exact_measure.hpp"
#include "oracles.hpp"

using namespace buckdens;

namespace {

Rational frac(std::pair<oracle::u64, oracle::u64> f) {
    return Rational(static_cast<std::int64_t>(f.first), static_cast<std::int64_t>(f.second));
}

ExponentSet random_exponents(std::mt19937_64& rng, unsigned max_e) {
    if (rng() % 4 == 0) return ExponentSet::progression(static_cast<unsigned>(rng() % 3 + 1),
                                                        static_cast<unsigned>(rng() % 3 + 1), 6);
    std::vector<unsigned> es;
    for (unsigned e = 1; e <= max_e; ++e)
        if (rng() % 2) es.push_back(e);
    return ExponentSet::list(es);
}

} // namespace

TEST(MeasureValuation, Examples) {
    const MeasureResult a = measure_valuation(2, ExponentSet::list({1}));
    EXPECT_EQ(a.value, Rational(1, 4));
    EXPECT_TRUE(a.exact());
    const auto member = [](oracle::u64 n) { return oracle::valuation(n, 2) == 1; };
    EXPECT_EQ(frac(oracle::density(member, 8)), Rational(1, 4));

    EXPECT_EQ(measure_valuation(2, ExponentSet::list({})).value, Rational(0));

    const MeasureResult all = measure_valuation(2, ExponentSet::all(30));
    EXPECT_FALSE(all.exact());
    EXPECT_LE(std::fabs(all.value.to_double() - 0.5), all.tail_bound);
    EXPECT_LE(all.tail_bound, std::ldexp(1.0, -30));

    EXPECT_THROW(measure_valuation(4, ExponentSet::list({1})), DomainError);
}

TEST(MeasureMulti, Examples) {
    const MeasureResult m = measure_multi({2, 3}, {ExponentSet::list({1}), ExponentSet::list({1})});
    EXPECT_EQ(m.value, Rational(1, 18));
    const auto member = [](oracle::u64 n) { return oracle::valuation(n, 2) == 1 && oracle::valuation(n, 3) == 1; };
    EXPECT_EQ(frac(oracle::density(member, 36)), Rational(1, 18));

    EXPECT_EQ(measure_multi({2}, {ExponentSet::list({1})}).value, Rational(1, 4));
    EXPECT_EQ(measure_multi({2, 3}, {ExponentSet::list({1}), ExponentSet::list({})}).value, Rational(0));
    EXPECT_THROW(measure_multi({3, 3}, {ExponentSet::list({1}), ExponentSet::list({1})}), DomainError);
    EXPECT_THROW(measure_multi({2, 3}, {ExponentSet::list({1})}), DomainError);
}

TEST(ResiduesValuation, Examples) {
    EXPECT_EQ(residues_valuation(2, ExponentSet::list({1}), 3), 2u);
    EXPECT_EQ(residues_valuation(2, ExponentSet::list({5}), 3), 1u);
    EXPECT_EQ(residues_valuation(3, ExponentSet::list({1, 2}), 1), 1u);
}

TEST(ResiduesValuation, MatchesBruteForceWithWitnessBound) {
    std::mt19937_64 rng(oracle::kSeed);
    const Natural primes[] = {2, 3, 5, 7};
    int checked = 0;
    while (checked < 150) {
        const Natural p = primes[rng() % 4];
        const unsigned a = static_cast<unsigned>(rng() % 5 + 1);
        const ExponentSet E = random_exponents(rng, 6);
        unsigned top = a;
        for (unsigned e = a; e < 40; ++e)
            if (E.contains(e)) {
                top = e;
                break;
            }
        const Natural bound = oracle::ipow(p, top);
        if (bound > 200'000) continue;
        const auto member = [&](oracle::u64 n) { return E.contains(oracle::valuation(n, p)); };
        ASSERT_EQ(residues_valuation(p, E, a), oracle::residues_upto(member, oracle::ipow(p, a), bound))
            << p << " " << E.to_string() << " " << a;
        ++checked;
    }
}

TEST(ResiduesValuation, RatiosDecreaseTowardTheMeasure) {
    std::mt19937_64 rng(oracle::kSeed + 1);
    for (int i = 0; i < 120; ++i) {
        const Natural p = (rng() % 2) ? 2 : 3;
        const ExponentSet E = random_exponents(rng, 5);
        const MeasureResult mu = measure_valuation(p, E);
        Rational prev(1);
        for (unsigned a = 1; a <= 18; ++a) {
            const Natural q = oracle::ipow(p, a);
            if (q > (Natural{1} << 40)) break;
            const Rational r(static_cast<std::int64_t>(residues_valuation(p, E, a)), static_cast<std::int64_t>(q));
            EXPECT_LE(r, prev);
            EXPECT_GE(r.to_double() + mu.tail_bound + 1e-12, mu.value.to_double());
            prev = r;
        }
    }
}

TEST(MeasureMulti, SingleFactorEqualsValuation) {
    std::mt19937_64 rng(oracle::kSeed + 2);
    for (int i = 0; i < 120; ++i) {
        const Natural q = std::vector<Natural>{2, 3, 5, 7, 11}[rng() % 5];
        const ExponentSet E = random_exponents(rng, 6);
        MeasureResult b;
        try {
            b = measure_valuation(q, E);
        } catch (const OverflowError&) {
            // the denominator p^{e_K + 1} left the signed 64-bit range
            EXPECT_THROW(measure_multi({q}, {E}), OverflowError);
            continue;
        }
        const MeasureResult a = measure_multi({q}, {E});
        EXPECT_EQ(a.value, b.value);
        EXPECT_DOUBLE_EQ(a.tail_bound, b.tail_bound);
    }
}

TEST(MeasureBAlpha, Examples) {
    EXPECT_EQ(measure_balpha(DyadicDigits::from_bits("1", 1)).value, Rational(1, 2));
    EXPECT_EQ(measure_balpha(DyadicDigits::from_bits("101", 3)).value, Rational(5, 8));
    EXPECT_EQ(measure_balpha(DyadicDigits::from_bits("0", 1)).value, Rational(0));
}

TEST(MeasureBAlpha, DyadicRationalsAreReproduced) {
    for (std::int64_t den = 2; den <= 1024; den *= 2)
        for (std::int64_t num = 1; num < den; num += 2) {
            const unsigned K = static_cast<unsigned>(std::log2(static_cast<double>(den)));
            const MeasureResult m = measure_balpha(DyadicDigits::from_ratio(Rational(num, den), K));
            ASSERT_EQ(m.value, Rational(num, den));
            ASSERT_TRUE(m.exact());
        }
    const MeasureResult t = measure_balpha(DyadicDigits::from_ratio(Rational(3, 10), 20));
    EXPECT_LE(std::fabs(t.value.to_double() - 0.3), t.tail_bound);
}

TEST(MeasureScaledUnion, Examples) {
    ScaledUnionSpec spec;
    spec.scales = {1, 4};
    spec.parts = {SetExpr::odd(), SetExpr::odd()};
    EXPECT_EQ(measure_scaled_union(spec).value, Rational(5, 8));

    ScaledUnionSpec single;
    single.scales = {1};
    single.parts = {SetExpr::odd()};
    EXPECT_EQ(measure_scaled_union(single).value, Rational(1, 2));

    ScaledUnionSpec threes;
    threes.scales = {3, 9};
    threes.parts = {SetExpr::complement(SetExpr::ap(0, 3)), SetExpr::complement(SetExpr::ap(0, 3))};
    const MeasureResult m = measure_scaled_union(threes);
    EXPECT_EQ(m.value, Rational(8, 27));
    EXPECT_TRUE(m.caveat.empty());
    const auto member = [](oracle::u64 n) {
        return (n % 3 == 0 && (n / 3) % 3 != 0) || (n % 9 == 0 && (n / 9) % 3 != 0);
    };
    EXPECT_EQ(frac(oracle::density(member, 27)), Rational(8, 27));
}

TEST(MeasureScaledUnion, HypothesisViolations) {
    ScaledUnionSpec bad_chain;
    bad_chain.scales = {2, 3};
    bad_chain.parts = {SetExpr::odd(), SetExpr::odd()};
    EXPECT_THROW(measure_scaled_union(bad_chain), DomainError);

    ScaledUnionSpec not_coprime;
    not_coprime.scales = {2};
    not_coprime.parts = {SetExpr::ap(0, 2)};
    EXPECT_THROW(measure_scaled_union(not_coprime), DomainError);
    const CoprimalityReport r = check_coprimality(not_coprime, 1000);
    EXPECT_FALSE(r.holds);
    EXPECT_EQ(r.prime, 2u);
    EXPECT_EQ(r.counterexample % 2, 0u);
}

TEST(MeasureScaledUnion, WindowOnlyCoprimalityIsFlagged) {
    ScaledUnionSpec spec;
    spec.scales = {2};
    spec.parts = {SetExpr::intersect({SetExpr::pt_max(1), SetExpr::odd()})};
    EXPECT_FALSE(spec.parts[0].has_exact_residues());
    const CoprimalityReport r = check_coprimality(spec, 10'000);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.structural);
}

TEST(ExactMeasure, ExpressionDispatch) {
    EXPECT_EQ(exact_measure(SetExpr::odd()).value, Rational(1, 2));
    EXPECT_EQ(exact_measure(SetExpr::ap(2, 5)).value, Rational(1, 5));
    EXPECT_EQ(exact_measure(SetExpr::squares()).value, Rational(0));
    EXPECT_EQ(exact_measure(SetExpr::scale(3, SetExpr::odd())).value, Rational(1, 6));
    EXPECT_EQ(exact_measure(SetExpr::complement(SetExpr::ap(0, 3))).value, Rational(2, 3));
    EXPECT_EQ(exact_measure(SetExpr::p_slice(SetExpr::all(), 2)).value, Rational(1, 4));
    EXPECT_EQ(exact_measure(SetExpr::unite({SetExpr::ap(1, 4), SetExpr::ap(3, 4)})).value, Rational(1, 2));
    EXPECT_EQ(exact_measure(SetExpr::tau_divides()).value, Rational(0));
    EXPECT_THROW(exact_measure(SetExpr::rt_max(1, PrimeList::of({2, 3}))), UnsupportedStructure);
}
