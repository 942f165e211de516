#pragma once

// Instance checks of the additivity, measurability and zero-density results.
// A check gathers hypotheses and numeric evidence; it proves nothing about
// non-structural sets, hence the three-valued verdict.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "buckdens/estimator.hpp"
#include "buckdens/exact_measure.hpp"

namespace buckdens {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct CheckReport {
    std::string check;
    Verdict verdict = Verdict::Pass;
    nlohmann::json evidence = nlohmann::json::object();
    /// Set on every fail: the violating n, (n, N) pair or inequality.
    nlohmann::json counterexample;
    Natural window = 0;
    unsigned n_from = 0;
    unsigned n_max = 0;

    bool passed() const noexcept { return verdict == Verdict::Pass; }
};

/// Slack added to every tail-bound comparison.
inline constexpr double kSlack = 1e-9;

struct SigmaOptions {
    unsigned k_max = 0;                // tails for K = 1..k_max (0: every part)
    double analytic_tail = 0.0;        // bound on the measure of parts not listed
    std::optional<Rational> target;    // expected measure of the full union, if known
    Natural window = 1'000'000;        // disjointness scan
    unsigned threads = 0;
};

/// Countable additivity on a concrete family: compares mu^(U A_k) with
/// sum mu(A_k) and reports the tail measures mu^(U_{k >= K} A_k).
CheckReport weak_sigma_check(const std::vector<SetExpr>& parts, const RemainderSystem& system, unsigned n_max,
                             const SigmaOptions& options = {});

/// H = U b_i H_i: checks the hypotheses and compares mu^(H) with sum mu(H_i)/b_i.
CheckReport scaled_union_check(const ScaledUnionSpec& spec, const RemainderSystem& system, unsigned n_max,
                               Natural window = 1'000'000, unsigned threads = 0);

struct AlexanderSpec {
    std::vector<SetExpr> parts;
    std::vector<Rational> bounds; // c_n > 0
    unsigned n_from = 0;          // first N checked (0: only N = n_max)
};

/// R(A_n:B_N)/B_N <= c_n for every n and every N in [n_from, n_max].
CheckReport alexander_check(const AlexanderSpec& spec, const RemainderSystem& system, unsigned n_max,
                            unsigned threads = 0);

struct NivenOptions {
    double tolerance = kSlack;
    Natural window = 1'000'000;
    unsigned threads = 0;
};

/// Estimates mu^(S_p) for each listed prime: pass when all are within
/// tolerance of 0, fail when some slice has positive exact measure.
CheckReport niven_check(const SetExpr& s, const std::vector<Natural>& primes, const RemainderSystem& system,
                        unsigned n_max, const NivenOptions& options = {});

/// For s = 1..s_max: every n <= W with tau(n) | n and more than s primes of odd
/// exponent is divisible by 2^{s+1}; reports the bound 2^{-(s+1)} and windowed
/// residue data for R with at most s odd-exponent primes.
CheckReport taudiv_bound_report(unsigned s_max, const RemainderSystem& system, unsigned n_max, Natural window,
                                unsigned threads = 0);

/// For each p in `slice_primes` and t in `ts`: every n <= W in the p-slice of
/// R_t (odd-exponent count over `list` at most t) has n/p in R_{t-1}; for t = 0
/// the slice must be empty.
CheckReport rt_inclusion_check(const std::vector<unsigned>& ts, const std::vector<Natural>& slice_primes,
                               const PrimeList& list, Natural window, unsigned threads = 0);

} // namespace buckdens
