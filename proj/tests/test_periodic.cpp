#include <gtest/gtest.h>

#include "buckdens/periodic_set.hpp"
#include "oracles.hpp"

using namespace buckdens;

namespace {

PeriodicSet random_periodic(std::mt19937_64& rng, Natural max_period) {
    const Natural L = rng() % max_period + 1;
    ResidueBitset bits(L);
    for (Natural r = 0; r < L; ++r)
        if (rng() % 3 == 0) bits.set(r);
    return PeriodicSet(L, std::move(bits));
}

PeriodicSet classes(std::initializer_list<ResidueClass> cs) {
    std::vector<ResidueClass> v(cs);
    return PeriodicSet::from_classes(v);
}

std::vector<Natural> members_of(const PeriodicSet& s) { return s.members().to_vector(); }

} // namespace

TEST(PeriodicSetOps, FromClassesExamples) {
    const PeriodicSet odd = classes({{1, 2}});
    EXPECT_EQ(odd.period(), 2u);
    EXPECT_EQ(members_of(odd), (std::vector<Natural>{1}));

    const PeriodicSet none = PeriodicSet::from_classes({});
    EXPECT_EQ(none.period(), 1u);
    EXPECT_TRUE(none.is_empty());

    const PeriodicSet mixed = classes({{1, 2}, {0, 4}});
    EXPECT_EQ(mixed.period(), 4u);
    EXPECT_EQ(members_of(mixed), (std::vector<Natural>{0, 1, 3}));
}

TEST(PeriodicSetOps, DensityExamples) {
    EXPECT_EQ(classes({{1, 2}}).density(), Rational(1, 2));
    EXPECT_EQ(PeriodicSet::empty().density(), Rational(0));
    const std::vector<Natural> rs{1, 3, 5, 7, 4};
    EXPECT_EQ(PeriodicSet::from_residues(8, rs).density(), Rational(5, 8));
}

TEST(PeriodicSetOps, BooleanExamples) {
    const PeriodicSet odd = classes({{1, 2}});
    const PeriodicSet even = complement(odd);
    EXPECT_EQ(even.period(), 2u);
    EXPECT_EQ(members_of(even), (std::vector<Natural>{0}));
    EXPECT_EQ(unite(classes({{0, 2}}), odd).density(), Rational(1));
    const PeriodicSet i = intersect(odd, classes({{1, 3}}));
    EXPECT_EQ(i, classes({{1, 6}}));
    EXPECT_EQ(i.density(), Rational(1, 6));
}

TEST(PeriodicSetOps, ScaleExamples) {
    const PeriodicSet odd = classes({{1, 2}});
    const PeriodicSet two = scale_set(2, odd);
    EXPECT_EQ(two.period(), 4u);
    EXPECT_EQ(members_of(two), (std::vector<Natural>{2}));
    EXPECT_EQ(scale_set(1, odd), odd);
    const PeriodicSet four = scale_set(4, odd);
    EXPECT_EQ(four.period(), 8u);
    EXPECT_EQ(members_of(four), (std::vector<Natural>{4}));
}

TEST(PeriodicSetOps, ResidueCountExamples) {
    const PeriodicSet odd = classes({{1, 2}});
    EXPECT_EQ(residue_count_periodic(odd, 6), 3u);
    for (Natural m = 1; m < 40; ++m) EXPECT_EQ(residue_count_periodic(PeriodicSet::all(), m), m);
    EXPECT_EQ(residue_count_periodic(scale_set(4, odd), 8), 1u);
}

TEST(PeriodicSetOps, CanonicalAndFirstMember) {
    const PeriodicSet odd12 = classes({{1, 2}}).expanded(12);
    EXPECT_EQ(odd12.period(), 12u);
    EXPECT_EQ(odd12.canonical().period(), 2u);
    EXPECT_EQ(classes({{0, 5}}).first_member(), 5u);
    EXPECT_EQ(PeriodicSet::empty().first_member(), 0u);
    EXPECT_EQ(classes({{3, 7}}).to_string(), "per(7;{3})");
}

TEST(PeriodicSetOps, PeriodLimit) {
    const Natural old = period_limit();
    set_period_limit(1000);
    EXPECT_THROW(PeriodicSet::from_classes(std::vector<ResidueClass>{{1, 999}, {1, 998}}), PeriodLimitError);
    set_period_limit(old);
}

TEST(PeriodicProperties, InclusionExclusion) {
    std::mt19937_64 rng(oracle::kSeed);
    for (int i = 0; i < 200; ++i) {
        const PeriodicSet a = random_periodic(rng, 48), b = random_periodic(rng, 48);
        EXPECT_EQ(unite(a, b).density() + intersect(a, b).density(), a.density() + b.density());
    }
}

TEST(PeriodicProperties, ComplementIdentity) {
    std::mt19937_64 rng(oracle::kSeed + 1);
    for (int i = 0; i < 200; ++i) {
        const PeriodicSet s = random_periodic(rng, 48);
        EXPECT_EQ(complement(s).density(), Rational(1) - s.density());
        EXPECT_EQ(complement(complement(s)), s);
    }
}

TEST(PeriodicProperties, ScaleDividesDensity) {
    std::mt19937_64 rng(oracle::kSeed + 2);
    for (int i = 0; i < 200; ++i) {
        const PeriodicSet s = random_periodic(rng, 48);
        const Natural a = rng() % 100 + 1;
        const PeriodicSet t = scale_set(a, s);
        EXPECT_EQ(t.density() * Rational(static_cast<std::int64_t>(a)), s.density());
        for (Natural n = 1; n <= 3 * t.period(); ++n)
            ASSERT_EQ(t.contains(n), n % a == 0 && s.contains(n / a));
    }
}

TEST(PeriodicProperties, RatioMonotoneUnderDivisibility) {
    std::mt19937_64 rng(oracle::kSeed + 3);
    for (int i = 0; i < 200; ++i) {
        const PeriodicSet s = random_periodic(rng, 48);
        const Natural d = rng() % 30 + 1, k = rng() % 6 + 1, m = d * k;
        const Rational rd(static_cast<std::int64_t>(residue_count_periodic(s, d)), static_cast<std::int64_t>(d));
        const Rational rm(static_cast<std::int64_t>(residue_count_periodic(s, m)), static_cast<std::int64_t>(m));
        EXPECT_LE(rm, rd);
        const Natural big = s.period() * (rng() % 4 + 1);
        EXPECT_EQ(Rational(static_cast<std::int64_t>(residue_count_periodic(s, big)), static_cast<std::int64_t>(big)),
                  s.density());
    }
}

TEST(PeriodicProperties, ResidueCountMatchesBruteForce) {
    std::mt19937_64 rng(oracle::kSeed + 4);
    for (int i = 0; i < 150; ++i) {
        const PeriodicSet s = random_periodic(rng, 36);
        const Natural m = rng() % 60 + 1;
        const auto member = [&](oracle::u64 n) { return s.contains(n); };
        EXPECT_EQ(residue_count_periodic(s, m), oracle::residues_upto(member, m, s.period() * m));
        EXPECT_EQ(attained_residues(s, m).count(), residue_count_periodic(s, m));
    }
}

TEST(PeriodicProperties, SubsetAndCanonicalEquality) {
    std::mt19937_64 rng(oracle::kSeed + 5);
    for (int i = 0; i < 120; ++i) {
        const PeriodicSet a = random_periodic(rng, 24), b = random_periodic(rng, 24);
        EXPECT_TRUE(is_subset(intersect(a, b), a));
        EXPECT_TRUE(is_subset(a, unite(a, b)));
        EXPECT_EQ(a.canonical(), a);
        EXPECT_EQ(a.canonical().density(), a.density());
        EXPECT_EQ(difference(a, b), intersect(a, complement(b)));
    }
}
