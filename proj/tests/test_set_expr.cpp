#include <gtest/gtest.h>

#include "buckdens/periodic_set.hpp"
#include "buckdens/set_expr.hpp"
#include "oracles.hpp"

using namespace buckdens;

namespace {

const DyadicDigits kFiveEighths = DyadicDigits::from_bits("101", 3);

PrimeList primes_to_100() { return PrimeList::of(primes_up_to(100)); }

SetExpr random_expr(std::mt19937_64& rng, int depth) {
    const int leaf_kinds = 12;
    const int pick = depth <= 0 ? static_cast<int>(rng() % leaf_kinds) : static_cast<int>(rng() % (leaf_kinds + 5));
    const Natural primes[] = {2, 3, 5, 7};
    const Natural p = primes[rng() % 4];
    switch (pick) {
    case 0: return SetExpr::all();
    case 1: return SetExpr::empty();
    case 2: return SetExpr::odd();
    case 3: {
        const Natural m = rng() % 12 + 1;
        return SetExpr::ap(rng() % m, m);
    }
    case 4: return SetExpr::valuation(p, ExponentSet::list({1, 3}));
    case 5: return SetExpr::valuation(p, ExponentSet::progression(2, 2, 5));
    case 6: return SetExpr::multi_valuation({{2, ExponentSet::list({1})}, {p == 2 ? 3 : p, ExponentSet::list({2})}});
    case 7: return SetExpr::balpha(DyadicDigits::from_ratio(Rational(static_cast<std::int64_t>(rng() % 15 + 1), 16), 4));
    case 8: return SetExpr::squares();
    case 9: return SetExpr::pt_max(static_cast<unsigned>(rng() % 3));
    case 10: return SetExpr::rt_max(static_cast<unsigned>(rng() % 3), PrimeList::of({2, 3, 5}));
    case 11: return SetExpr::tau_divides();
    case 12: return SetExpr::p_slice(random_expr(rng, depth - 1), p);
    case 13: return SetExpr::scale(rng() % 6 + 1, random_expr(rng, depth - 1));
    case 14: return SetExpr::unite({random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 15: return SetExpr::intersect({random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    default: return SetExpr::complement(random_expr(rng, depth - 1));
    }
}

} // namespace

TEST(Membership, BAlpha) {
    EXPECT_TRUE(member_balpha(3, kFiveEighths));
    EXPECT_FALSE(member_balpha(2, kFiveEighths));
    EXPECT_TRUE(member_balpha(4, kFiveEighths));
    EXPECT_FALSE(member_balpha(8, kFiveEighths)); // e+1 = 4 beyond the digits
}

TEST(Membership, Valuation) {
    EXPECT_TRUE(member_valuation(6, 2, ExponentSet::list({1})));
    EXPECT_FALSE(member_valuation(4, 2, ExponentSet::list({1})));
    EXPECT_TRUE(member_multi(6, {{2, ExponentSet::list({1})}, {3, ExponentSet::list({1})}}));
    EXPECT_FALSE(member_multi(12, {{2, ExponentSet::list({1})}, {3, ExponentSet::list({1})}}));
}

TEST(Membership, PtRtTau) {
    EXPECT_TRUE(member_pt(1, 0));
    EXPECT_FALSE(member_pt(12, 1));
    EXPECT_TRUE(member_pt(8, 1));
    const PrimeList list = primes_to_100();
    EXPECT_TRUE(member_rt(12, 1, list));
    EXPECT_FALSE(member_rt(12, 0, list));
    EXPECT_TRUE(member_rt(36, 0, list));
    EXPECT_TRUE(member_taudiv(1));
    EXPECT_TRUE(member_taudiv(12));
    EXPECT_FALSE(member_taudiv(3));
}

TEST(Membership, TauDividesMatchesBruteForce) {
    for (Natural n = 1; n <= 5000; ++n) ASSERT_EQ(member_taudiv(n), n % oracle::divisor_count(n) == 0) << n;
}

TEST(PSlice, Examples) {
    const SetExpr all2 = SetExpr::p_slice(SetExpr::all(), 2);
    for (Natural n = 1; n <= 1000; ++n) ASSERT_EQ(all2.contains(n), n % 4 == 2);
    EXPECT_TRUE(all2.is_periodic());
    for (Natural p : {2, 3, 5, 7}) {
        const SetExpr e = SetExpr::p_slice(SetExpr::empty(), p);
        for (Natural n = 1; n <= 1000; ++n) ASSERT_FALSE(e.contains(n));
    }
    EXPECT_THROW(SetExpr::p_slice(SetExpr::all(), 4), DomainError);
}

TEST(SetInvariants, SquaresAreSquareFull) {
    for (Natural p : primes_up_to(100)) {
        const SetExpr slice = SetExpr::p_slice(SetExpr::squares(), p);
        for (Natural n = 1; n <= 1'000'000; ++n) ASSERT_FALSE(slice.contains(n)) << p << " " << n;
    }
}

TEST(SetInvariants, BAlphaMatchesPeriodicClasses) {
    for (const auto& digits : {DyadicDigits::from_bits("101", 3), DyadicDigits::from_ratio(Rational(13, 16), 4),
                               DyadicDigits::from_ratio(Rational(3, 10), 12)}) {
        std::vector<ResidueClass> cs;
        for (unsigned n : digits.nonzero_indices()) cs.push_back(scale_class(Natural{1} << (n - 1), {1, 2}));
        const PeriodicSet periodic = PeriodicSet::from_classes(cs);
        const SetExpr b = SetExpr::balpha(digits);
        for (Natural n = 1; n <= 1'000'000; ++n) ASSERT_EQ(b.contains(n), periodic.contains(n)) << n;
        EXPECT_EQ(periodic.density(), digits.partial_sum());
    }
}

TEST(SetInvariants, RtInductionAndEmptyR0Slices) {
    const PrimeList list = PrimeList::standard();
    for (Natural p : {2, 3, 5, 7}) {
        for (Natural n = p; n <= 1'000'000; n += p) {
            if ((n / p) % p == 0) continue;
            ASSERT_FALSE(member_rt(n, 0, list)) << n;
            for (unsigned t : {1u, 2u})
                if (member_rt(n, t, list)) ASSERT_TRUE(member_rt(n / p, t - 1, list)) << n;
        }
    }
}

TEST(SetInvariants, TauDivisorCoverLemma) {
    for (Natural n = 1; n <= 1'000'000; ++n) {
        if (!member_taudiv(n)) continue;
        const unsigned odd = odd_exponent_count(n);
        for (unsigned s = 1; s <= 3; ++s)
            if (odd > s) ASSERT_EQ(n % (Natural{1} << (s + 1)), 0u) << n;
    }
}

TEST(DyadicDigitsType, Construction) {
    const DyadicDigits d = DyadicDigits::from_ratio(Rational(5, 8), 3);
    EXPECT_EQ(d.nonzero_indices(), (std::vector<unsigned>{1, 3}));
    EXPECT_EQ(d.partial_sum(), Rational(5, 8));
    EXPECT_EQ(d.tail_bound(), 0.0);
    const DyadicDigits t = DyadicDigits::from_ratio(Rational(3, 10), 20);
    EXPECT_GT(t.tail_bound(), 0.0);
    EXPECT_LE((Rational(3, 10) - t.partial_sum()).to_double(), t.tail_bound());
    EXPECT_THROW(DyadicDigits::from_ratio(Rational(1), 4), DomainError);
    EXPECT_THROW(DyadicDigits::from_bits("102", 3), Error);
}

TEST(Grammar, ParsesEveryForm) {
    const char* texts[] = {"all", "empty", "odd", "squares", "taudiv", "ap(1,4)", "val(2,{1,3})", "val(3,ap(1,2),10)",
                           "mval((2,{1}),(3,{1}))", "balpha(101,3)", "balpha(5/8,3)", "pt(2)", "rt(1;2,3,5)",
                           "rt(2;default)", "slice(squares,3)", "scale(4,odd)", "union(odd,ap(0,4))",
                           "inter(odd,ap(1,3))", "comp(ap(0,3))", "per(4;{1,2})"};
    for (const char* t : texts) {
        const SetExpr e = SetExpr::parse(t);
        EXPECT_EQ(SetExpr::parse(e.to_string()), e) << t;
    }
}

TEST(Grammar, ErrorsCiteTokenAndPosition) {
    try {
        SetExpr::parse("union(odd,foo)");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 10u);
        EXPECT_EQ(e.token(), "foo");
    }
    EXPECT_THROW(SetExpr::parse("ap(1,"), ParseError);
    EXPECT_THROW(SetExpr::parse("val(4,{1})"), ParseError);
    EXPECT_THROW(SetExpr::parse("odd odd"), ParseError);
}

TEST(Grammar, RoundTripProperty) {
    std::mt19937_64 rng(oracle::kSeed);
    for (int i = 0; i < 300; ++i) {
        const SetExpr e = random_expr(rng, 3);
        const SetExpr back = SetExpr::parse(e.to_string());
        ASSERT_EQ(back, e) << e.to_string();
        for (Natural n = 1; n <= 200; ++n) ASSERT_EQ(back.contains(n), e.contains(n)) << e.to_string() << " " << n;
    }
}

TEST(Capabilities, FlagsAreSound) {
    std::mt19937_64 rng(oracle::kSeed + 7);
    for (int i = 0; i < 300; ++i) {
        const SetExpr e = random_expr(rng, 2);
        EXPECT_FALSE(e.contains(0));
        if (e.is_periodic()) EXPECT_TRUE(e.has_exact_residues()) << e.to_string();
        if (e.is_zero_measure()) EXPECT_TRUE(e.has_exact_measure()) << e.to_string();
    }
    EXPECT_FALSE(SetExpr::pt_max(1).has_exact_residues());
    EXPECT_FALSE(SetExpr::tau_divides().has_exact_residues());
    EXPECT_FALSE(SetExpr::complement(SetExpr::squares()).has_exact_residues());
    EXPECT_TRUE(SetExpr::squares().has_exact_residues());
}

TEST(ExponentSetType, Basics) {
    const ExponentSet e = ExponentSet::progression(1, 2, 4);
    EXPECT_TRUE(e.contains(99));
    EXPECT_FALSE(e.contains(2));
    EXPECT_EQ(e.truncated(), (std::vector<unsigned>{1, 3, 5, 7}));
    EXPECT_THROW(ExponentSet::list({2, 1}), DomainError);
    EXPECT_THROW(ExponentSet::list({0}), DomainError);
}
