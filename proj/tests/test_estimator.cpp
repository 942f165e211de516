#include <gtest/gtest.h>

#include "buckdens/estimator.hpp"
#include "buckdens/exact_measure.hpp"
#include "buckdens/structure.hpp"
#include "oracles.hpp"

using namespace buckdens;

namespace {

SetExpr random_structural(std::mt19937_64& rng, int depth) {
    const Natural primes[] = {2, 3, 5};
    const Natural p = primes[rng() % 3];
    const int pick = static_cast<int>(depth <= 0 ? rng() % 6 : rng() % 10);
    switch (pick) {
    case 0: return SetExpr::odd();
    case 1: {
        const Natural m = rng() % 10 + 1;
        return SetExpr::ap(rng() % m, m);
    }
    case 2: return SetExpr::valuation(p, ExponentSet::list({static_cast<unsigned>(rng() % 3 + 1)}));
    case 3: return SetExpr::valuation(p, ExponentSet::progression(static_cast<unsigned>(rng() % 2 + 1), 2, 8));
    case 4: return SetExpr::squares();
    case 5: return SetExpr::balpha(DyadicDigits::from_ratio(Rational(static_cast<std::int64_t>(rng() % 7 + 1), 8), 3));
    case 6: return SetExpr::scale(rng() % 4 + 1, random_structural(rng, depth - 1));
    case 7: return SetExpr::unite({random_structural(rng, depth - 1), random_structural(rng, depth - 1)});
    case 8: return SetExpr::intersect({random_structural(rng, depth - 1), random_structural(rng, depth - 1)});
    default: return SetExpr::p_slice(random_structural(rng, depth - 1), p);
    }
}

SetExpr random_valuation_set(std::mt19937_64& rng) {
    std::vector<ValuationSpec> fs;
    for (Natural p : {2, 3, 5, 7}) {
        if (rng() % 2) continue;
        if (rng() % 2)
            fs.push_back({p, ExponentSet::list({static_cast<unsigned>(rng() % 3 + 1)})});
        else
            fs.push_back({p, ExponentSet::progression(static_cast<unsigned>(rng() % 3 + 1), static_cast<unsigned>(rng() % 2 + 1), 5)});
    }
    if (fs.empty()) fs.push_back({2, ExponentSet::list({1})});
    return SetExpr::multi_valuation(fs);
}

} // namespace

TEST(RemainderSystems, Builtins) {
    const RemainderSystem l = RemainderSystem::lcm();
    EXPECT_EQ(l.modulus(6), 60u);
    EXPECT_EQ(l.modulus(18), 12252240u);
    const RemainderSystem f = RemainderSystem::factorial();
    EXPECT_EQ(f.modulus(5), 120u);
    for (unsigned N = 1; N < l.max_n(); ++N) EXPECT_EQ(l.modulus(N + 1) % l.modulus(N), 0u);
    EXPECT_THROW(l.modulus(0), DomainError);
    EXPECT_THROW(RemainderSystem::lcm(43), DomainError);
    EXPECT_THROW(RemainderSystem::factorial(21), DomainError);
}

TEST(RemainderSystems, CustomChainValidation) {
    const RemainderSystem c = RemainderSystem::parse("custom:2,4,12");
    EXPECT_EQ(c.max_n(), 3u);
    EXPECT_EQ(c.modulus(3), 12u);
    EXPECT_EQ(c.name(), "custom:2,4,12");
    EXPECT_THROW(RemainderSystem::parse("custom:2,3"), DomainError);
    EXPECT_THROW(RemainderSystem::parse("custom:4,4"), DomainError);
    EXPECT_THROW(RemainderSystem::parse("custom:"), DomainError);
    EXPECT_THROW(RemainderSystem::parse("primorial"), DomainError);
}

TEST(ResidueCountExact, Examples) {
    EXPECT_EQ(residue_count_exact(SetExpr::odd(), 6), 3u);
    EXPECT_EQ(residue_count_exact(SetExpr::squares(), 60), 12u);
    EXPECT_EQ(residue_count_exact(SetExpr::valuation(2, ExponentSet::list({1})), 8), 2u);
    EXPECT_THROW(residue_count_exact(SetExpr::tau_divides(), 6), UnsupportedStructure);
    EXPECT_THROW(residue_count_exact(SetExpr::complement(SetExpr::squares()), 6), UnsupportedStructure);
}

TEST(ResidueCountWindow, Examples) {
    EXPECT_EQ(residue_count_window(SetExpr::odd(), 6, 100), 3u);
    EXPECT_EQ(residue_count_window(SetExpr::squares(), 7, 0), 0u);
    EXPECT_EQ(residue_count_window(SetExpr::pt_max(1), 10, 1000), 9u);
}

TEST(SieveResidues, Examples) {
    EXPECT_EQ(sieve_residues(SetExpr::odd(), 8, EstimateMode::Exact).to_vector(), (std::vector<Natural>{1, 3, 5, 7}));
    EXPECT_EQ(sieve_residues(SetExpr::scale(4, SetExpr::odd()), 8, EstimateMode::Exact).to_vector(),
              (std::vector<Natural>{4}));
    EXPECT_EQ(sieve_residues(SetExpr::odd(), 8, EstimateMode::Window, 100).to_vector(),
              (std::vector<Natural>{1, 3, 5, 7}));
}

TEST(SieveResidues, SquaresAtLcm18MatchQuadraticResidueCounts) {
    const Natural B = 12252240;
    const ResidueBitset bits = sieve_residues(SetExpr::squares(), B, EstimateMode::Exact);
    EXPECT_EQ(bits.count(), oracle::square_residues_crt(B));
    const double ratio = static_cast<double>(bits.count()) / static_cast<double>(B);
    EXPECT_NEAR(ratio, 0.0059, 0.0001);
    for (Natural k = 1; k <= 5000; ++k) ASSERT_TRUE(bits.test((k * k) % B));
}

TEST(MuEstimate, Examples) {
    const RemainderSystem sys = RemainderSystem::lcm();
    const DensityReport odd = mu_estimate(SetExpr::odd(), sys, 10, EstimateMode::Exact);
    ASSERT_EQ(odd.records.size(), 10u);
    for (const auto& r : odd.records)
        if (r.n >= 2) EXPECT_EQ(r.ratio, Rational(1, 2));
    EXPECT_EQ(odd.semantics, BoundSemantics::UpperBound);

    const DensityReport sq = mu_estimate(SetExpr::squares(), sys, 6, EstimateMode::Exact);
    EXPECT_EQ(sq.records.back().ratio, Rational(12, 60));
    EXPECT_DOUBLE_EQ(sq.final_ratio, 0.2);

    for (const auto& s : {RemainderSystem::lcm(), RemainderSystem::factorial()}) {
        const DensityReport all = mu_estimate(SetExpr::all(), s, 8, EstimateMode::Exact);
        for (const auto& r : all.records) EXPECT_EQ(r.ratio, Rational(1));
    }
}

TEST(MuEstimate, WindowModeAndErrors) {
    const RemainderSystem sys = RemainderSystem::lcm();
    const DensityReport w = mu_estimate(SetExpr::tau_divides(), sys, 6, EstimateMode::Window, {0, 100'000});
    EXPECT_EQ(w.semantics, BoundSemantics::Approximation);
    EXPECT_EQ(w.window, 100'000u);
    for (const auto& r : w.records) {
        EXPECT_FALSE(r.exact);
        const auto member = [](oracle::u64 n) { return n % oracle::divisor_count(n) == 0; };
        if (r.n <= 4) EXPECT_EQ(r.residues, oracle::residues_upto(member, r.modulus, 100'000));
    }
    EXPECT_THROW(mu_estimate(SetExpr::tau_divides(), sys, 6, EstimateMode::Exact), UnsupportedStructure);
    EXPECT_THROW(mu_estimate(SetExpr::odd(), sys, 43, EstimateMode::Exact), DomainError);
    EXPECT_THROW(mu_estimate(SetExpr::odd(), sys, 0, EstimateMode::Exact), DomainError);
}

TEST(MuEstimate, PeriodLimitIsEnforcedForBitVectors) {
    const Natural old = period_limit();
    set_period_limit(1000);
    EXPECT_THROW(sieve_residues(SetExpr::odd(), 5000, EstimateMode::Exact), PeriodLimitError);
    set_period_limit(old);
}

TEST(EstimatorProperties, ExactModeRatiosMonotoneAndAboveMeasure) {
    std::mt19937_64 rng(oracle::kSeed);
    const RemainderSystem sys = RemainderSystem::lcm();
    for (int i = 0; i < 120; ++i) {
        const SetExpr s = random_structural(rng, 2);
        const DensityReport r = mu_estimate(s, sys, 18, EstimateMode::Exact);
        for (std::size_t k = 1; k < r.records.size(); ++k)
            ASSERT_LE(r.records[k].ratio, r.records[k - 1].ratio) << s.to_string();
        if (s.has_exact_measure()) {
            const MeasureResult mu = exact_measure(s);
            for (const auto& rec : r.records)
                ASSERT_GE(rec.ratio.to_double() + mu.tail_bound + 1e-12, mu.value.to_double()) << s.to_string();
        }
    }
}

TEST(EstimatorProperties, ExactCountsMatchBruteForceOnPeriodicSets) {
    std::mt19937_64 rng(oracle::kSeed + 1);
    int checked = 0;
    while (checked < 120) {
        const SetExpr s = random_structural(rng, 2);
        if (!s.is_periodic()) continue;
        const Natural L = periodic_of(s).period();
        const Natural m = rng() % 60 + 1;
        const Natural bound = std::lcm(L, m);
        if (bound > 2'000'000) continue;
        const auto member = [&](oracle::u64 n) { return s.contains(n); };
        ASSERT_EQ(residue_count_exact(s, m), oracle::residues_upto(member, m, bound)) << s.to_string() << " " << m;
        ++checked;
    }
}

TEST(EstimatorProperties, WindowCountsNeverExceedExact) {
    std::mt19937_64 rng(oracle::kSeed + 2);
    for (int i = 0; i < 120; ++i) {
        const SetExpr s = random_structural(rng, 2);
        const Natural m = rng() % 120 + 1;
        const Natural exact = residue_count_exact(s, m);
        Natural prev = 0;
        for (Natural W : {Natural{10}, Natural{1000}, Natural{50'000}}) {
            const Natural w = residue_count_window(s, m, W, 1);
            ASSERT_LE(w, exact) << s.to_string() << " m=" << m << " W=" << W;
            ASSERT_GE(w, prev);
            prev = w;
        }
    }
}

TEST(EstimatorProperties, WindowReachesExactAt64m) {
    const std::vector<SetExpr> sets = {
        SetExpr::odd(), SetExpr::ap(3, 7), SetExpr::valuation(2, ExponentSet::list({1})),
        SetExpr::multi_valuation({{2, ExponentSet::list({1})}, {3, ExponentSet::list({1})}}),
        SetExpr::balpha(DyadicDigits::from_bits("101", 3)), SetExpr::scale(4, SetExpr::odd())};
    for (const auto& s : sets)
        for (unsigned N = 1; N <= 8; ++N) {
            const Natural m = lcm_upto(N);
            EXPECT_EQ(residue_count_window(s, m, 64 * m), residue_count_exact(s, m)) << s.to_string() << " " << m;
        }
}

TEST(EstimatorProperties, SquaresSaturateOnlyAtQuadraticWindow) {
    // k^2 mod m depends on k mod m, so the window must reach m^2
    const SetExpr sq = SetExpr::squares();
    for (unsigned N = 1; N <= 8; ++N) {
        const Natural m = lcm_upto(N);
        EXPECT_EQ(residue_count_window(sq, m, m * m), residue_count_exact(sq, m)) << m;
        EXPECT_EQ(residue_count_exact(sq, m), oracle::square_residues_crt(m)) << m;
    }
    // 64m is too short once m = 420: 210^2 > 64 * 420
    EXPECT_LT(residue_count_window(sq, 420, 64 * 420), residue_count_exact(sq, 420));
}

TEST(EstimatorProperties, CrtProductForValuationSets) {
    std::mt19937_64 rng(oracle::kSeed + 3);
    int checked = 0;
    while (checked < 150) {
        const Natural m1 = rng() % 200 + 1, m2 = rng() % 200 + 1;
        if (std::gcd(m1, m2) != 1) continue;
        const SetExpr s = random_valuation_set(rng);
        EXPECT_EQ(residue_count_exact(s, m1 * m2), residue_count_exact(s, m1) * residue_count_exact(s, m2))
            << s.to_string();
        const SetExpr g = random_structural(rng, 2);
        EXPECT_LE(residue_count_exact(g, m1 * m2), residue_count_exact(g, m1) * residue_count_exact(g, m2))
            << g.to_string();
        ++checked;
    }
}

TEST(EstimatorProperties, SquaresMatchCrtOracle) {
    std::mt19937_64 rng(oracle::kSeed + 4);
    for (int i = 0; i < 150; ++i) {
        const Natural m = rng() % 100'000 + 1;
        ASSERT_EQ(residue_count_exact(SetExpr::squares(), m), oracle::square_residues_crt(m)) << m;
    }
}

TEST(EstimatorProperties, ThreadCountDoesNotChangeResults) {
    const Natural B = lcm_upto(14);
    const ResidueBitset a = sieve_residues(SetExpr::squares(), B, EstimateMode::Exact, 0, 1);
    const ResidueBitset b = sieve_residues(SetExpr::squares(), B, EstimateMode::Exact, 0, 4);
    EXPECT_EQ(a, b);
    EXPECT_EQ(residue_count_window(SetExpr::tau_divides(), 360, 200'000, 1),
              residue_count_window(SetExpr::tau_divides(), 360, 200'000, 4));
}
