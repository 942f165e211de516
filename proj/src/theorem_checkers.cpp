#include "buckdens/theorem_checkers.hpp"

#include <algorithm>
#include <cmath>

#include "buckdens/json_util.hpp"
#include "buckdens/parallel.hpp"
#include "buckdens/structure.hpp"

namespace buckdens {

using nlohmann::json;

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// mu^ of a set: its density when periodic (the ratio sequence is then
// eventually constant), otherwise the exact-mode ratio at n_max, which is only
// an upper bound.
struct Estimate {
    Rational value;
    bool exact = false;
    std::string method;
};

Estimate estimate_of(const SetExpr& s, const RemainderSystem& system, unsigned n_max, unsigned threads) {
    if (s.is_periodic()) return {periodic_of(s).density(), true, "periodic density"};
    const DensityReport r = mu_estimate(s, system, n_max, EstimateMode::Exact, {threads, 0});
    return {r.records.back().ratio, false, "exact-mode ratio at N=" + std::to_string(n_max)};
}

double abs_diff(const Rational& a, const Rational& b) { return std::fabs((a - b).to_double()); }

// Pass within tolerance; an upper-bound estimate below the claim is a
// contradiction, above it merely unconverged.
Verdict compare(const Estimate& est, const Rational& claimed, double tolerance) {
    const double diff = (est.value - claimed).to_double();
    if (std::fabs(diff) <= tolerance) return Verdict::Pass;
    if (est.exact || diff < 0) return Verdict::Fail;
    return Verdict::Inconclusive;
}

// First n <= window lying in two parts.
std::optional<std::pair<Natural, std::pair<std::size_t, std::size_t>>> overlap(const std::vector<SetExpr>& parts,
                                                                               Natural window) {
    for (Natural n = 1; n <= window; ++n) {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!parts[i].contains(n)) continue;
            if (first) return std::make_pair(n, std::make_pair(*first, i));
            first = i;
        }
    }
    return std::nullopt;
}

Natural first_member_upto(const SetExpr& s, Natural window) {
    for (Natural n = 1; n <= window; ++n)
        if (s.contains(n)) return n;
    return 0;
}

} // namespace

CheckReport weak_sigma_check(const std::vector<SetExpr>& parts, const RemainderSystem& system, unsigned n_max,
                             const SigmaOptions& options) {
    if (parts.empty()) throw DomainError("weak_sigma_check needs at least one part");
    CheckReport report;
    report.check = "weak-sigma";
    report.window = options.window;
    report.n_from = 1;
    report.n_max = n_max;

    if (auto hit = overlap(parts, options.window)) {
        report.verdict = Verdict::Fail;
        report.counterexample = {{"n", hit->first},
                                 {"parts", {hit->second.first + 1, hit->second.second + 1}},
                                 {"reason", "parts are not disjoint"}};
        return report;
    }
    report.evidence["disjointness"] = "verified on [1," + std::to_string(options.window) + "] only";

    Rational sum(0);
    double tails = 0.0;
    std::vector<Rational> measures;
    json part_rows = json::array();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const MeasureResult m = exact_measure(parts[i]);
        measures.push_back(m.value);
        sum += m.value;
        tails += m.tail_bound;
        part_rows.push_back({{"k", i + 1},
                             {"set", parts[i].to_string()},
                             {"measure", to_json(m.value)},
                             {"tail_bound", real_json(m.tail_bound)}});
    }
    report.evidence["parts"] = part_rows;
    report.evidence["sum_of_measures"] = to_json(sum);

    const unsigned k_max =
        options.k_max == 0 ? static_cast<unsigned>(parts.size()) : std::min<unsigned>(options.k_max, parts.size());
    json tail_rows = json::array();
    for (unsigned K = 1; K <= k_max; ++K) {
        const std::vector<SetExpr> rest(parts.begin() + (K - 1), parts.end());
        const Estimate e = estimate_of(SetExpr::unite(rest), system, n_max, options.threads);
        Rational listed(0);
        for (std::size_t k = K - 1; k < measures.size(); ++k) listed += measures[k];
        tail_rows.push_back({{"K", K},
                             {"mu_hat", to_json(e.value)},
                             {"sum_of_measures", to_json(listed)},
                             {"analytic_tail", real_json(options.analytic_tail)}});
    }
    report.evidence["tails"] = tail_rows;

    const Estimate whole = estimate_of(SetExpr::unite(parts), system, n_max, options.threads);
    const double tolerance = tails + options.analytic_tail + kSlack;
    report.evidence["mu_hat_union"] = to_json(whole.value);
    report.evidence["mu_hat_method"] = whole.method;
    report.evidence["tolerance"] = real_json(tolerance);

    report.verdict = compare(whole, sum, tolerance);
    if (report.verdict == Verdict::Fail) {
        report.counterexample = {{"mu_hat_union", to_json(whole.value)},
                                 {"sum_of_measures", to_json(sum)},
                                 {"difference", real_json(abs_diff(whole.value, sum))},
                                 {"tolerance", real_json(tolerance)}};
        return report;
    }
    if (options.target) {
        const double diff = abs_diff(sum, *options.target);
        report.evidence["target"] = to_json(*options.target);
        report.evidence["target_difference"] = real_json(diff);
        if (diff > tolerance) {
            report.verdict = Verdict::Fail;
            report.counterexample = {{"sum_of_measures", to_json(sum)},
                                     {"target", to_json(*options.target)},
                                     {"difference", real_json(diff)},
                                     {"tolerance", real_json(tolerance)}};
        }
    }
    return report;
}

CheckReport scaled_union_check(const ScaledUnionSpec& spec, const RemainderSystem& system, unsigned n_max,
                               Natural window, unsigned threads) {
    CheckReport report;
    report.check = "scaled-union";
    report.window = window;
    report.n_from = 1;
    report.n_max = n_max;
    if (spec.scales.size() != spec.parts.size() || spec.parts.empty())
        throw DomainError("scaled union: scales and parts must be non-empty and of equal length");

    for (std::size_t i = 0; i < spec.scales.size(); ++i) {
        const bool bad = spec.scales[i] == 0 ||
                         (i > 0 && (spec.scales[i] <= spec.scales[i - 1] || spec.scales[i] % spec.scales[i - 1] != 0));
        if (!bad) continue;
        report.verdict = Verdict::Fail;
        report.counterexample = {{"reason", "scales do not form an increasing divisibility chain"},
                                 {"index", i + 1},
                                 {"b_prev", i > 0 ? spec.scales[i - 1] : 0},
                                 {"b", spec.scales[i]}};
        return report;
    }

    const CoprimalityReport cop = check_coprimality(spec, window);
    report.evidence["coprimality"] = cop.structural ? "proved structurally"
                                                    : "verified on [1," + std::to_string(window) + "] only";
    if (!cop.holds) {
        report.verdict = Verdict::Fail;
        report.counterexample = {{"reason", "part has an element sharing a prime with the scales"},
                                 {"part", cop.part + 1},
                                 {"prime", cop.prime},
                                 {"n", cop.counterexample}};
        return report;
    }

    const MeasureResult expected = measure_scaled_union(spec, window);
    const Estimate est = estimate_of(spec.union_expr(), system, n_max, threads);
    const double tolerance = expected.tail_bound + kSlack;
    report.evidence["sum_mu_over_b"] = to_json(expected.value);
    report.evidence["tail_bound"] = real_json(expected.tail_bound);
    report.evidence["mu_hat"] = to_json(est.value);
    report.evidence["mu_hat_method"] = est.method;
    report.evidence["tolerance"] = real_json(tolerance);
    report.verdict = compare(est, expected.value, tolerance);
    if (report.verdict == Verdict::Fail)
        report.counterexample = {{"mu_hat", to_json(est.value)},
                                 {"sum_mu_over_b", to_json(expected.value)},
                                 {"difference", real_json(abs_diff(est.value, expected.value))},
                                 {"tolerance", real_json(tolerance)}};
    return report;
}

CheckReport alexander_check(const AlexanderSpec& spec, const RemainderSystem& system, unsigned n_max,
                            unsigned threads) {
    if (spec.parts.size() != spec.bounds.size() || spec.parts.empty())
        throw DomainError("alexander_check: parts and bounds must be non-empty and of equal length");
    for (const auto& c : spec.bounds)
        if (c <= Rational(0)) throw DomainError("alexander_check: bounds c_n must be positive");
    if (n_max == 0 || n_max > system.max_n()) throw DomainError("alexander_check: N_max outside the remainder system");
    const unsigned from = spec.n_from == 0 ? n_max : spec.n_from;
    if (from > n_max) throw DomainError("alexander_check: first N exceeds N_max");

    CheckReport report;
    report.check = "alexander";
    report.n_from = from;
    report.n_max = n_max;

    json rows = json::array();
    Rational partial(0);
    json partial_sums = json::array();
    for (std::size_t i = 0; i < spec.parts.size(); ++i) {
        const SetExpr& part = spec.parts[i];
        if (!part.has_exact_residues())
            throw UnsupportedStructure("alexander_check: '" + part.to_string() + "' has no exact residue structure");
        const StructuralForm form = structural_form(part);
        partial += spec.bounds[i];
        partial_sums.push_back(to_json(partial));
        for (unsigned N = from; N <= n_max; ++N) {
            const Natural b = system.modulus(N);
            const Natural r = residue_count(form, b, threads);
            const Rational ratio(static_cast<std::int64_t>(r), static_cast<std::int64_t>(b));
            const bool ok = ratio <= spec.bounds[i];
            rows.push_back({{"n", i + 1}, {"N", N}, {"B_N", b}, {"R", r}, {"ratio", to_json(ratio)},
                            {"c", to_json(spec.bounds[i])}, {"holds", ok}});
            if (!ok && report.verdict != Verdict::Fail) {
                report.verdict = Verdict::Fail;
                report.counterexample = {{"n", i + 1}, {"N", N}, {"ratio", to_json(ratio)},
                                         {"c", to_json(spec.bounds[i])},
                                         {"inequality", "R(A_n:B_N)/B_N <= c_n violated"}};
            }
        }
    }
    report.evidence["table"] = rows;
    report.evidence["partial_sums_c"] = partial_sums;

    bool measures_known = true;
    Rational sum(0);
    double tails = 0.0;
    for (const auto& part : spec.parts) {
        if (!part.has_exact_measure()) {
            measures_known = false;
            break;
        }
        const MeasureResult m = exact_measure(part);
        sum += m.value;
        tails += m.tail_bound;
    }
    if (measures_known) {
        report.evidence["sum_of_measures"] = to_json(sum);
        report.evidence["sum_tail_bound"] = real_json(tails);
    }
    const SetExpr whole = SetExpr::unite(spec.parts);
    if (whole.has_exact_residues()) {
        const Estimate e = estimate_of(whole, system, n_max, threads);
        report.evidence["mu_hat_union"] = to_json(e.value);
        report.evidence["mu_hat_method"] = e.method;
    }
    return report;
}

CheckReport niven_check(const SetExpr& s, const std::vector<Natural>& primes, const RemainderSystem& system,
                        unsigned n_max, const NivenOptions& options) {
    CheckReport report;
    report.check = "niven";
    report.window = options.window;
    report.n_from = 1;
    report.n_max = n_max;

    double reciprocal_sum = 0.0;
    bool all_small = true;
    json rows = json::array();
    for (Natural p : primes) {
        require_prime(p, "niven_check");
        reciprocal_sum += 1.0 / static_cast<double>(p);
        const SetExpr slice = SetExpr::p_slice(s, p);
        json row = {{"p", p}};
        double estimate = 0.0;
        if (slice.has_exact_residues() && is_empty_form(structural_form(slice))) {
            row["status"] = "empty";
            row["estimate"] = to_json(Rational(0));
        } else if (slice.has_exact_measure()) {
            const MeasureResult m = exact_measure(slice);
            row["status"] = "exact";
            row["estimate"] = to_json(m.value);
            row["tail_bound"] = real_json(m.tail_bound);
            estimate = m.value.to_double();
            if (m.value.to_double() - m.tail_bound > 0.0 && report.verdict != Verdict::Fail) {
                report.verdict = Verdict::Fail;
                report.counterexample = {{"p", p}, {"measure", to_json(m.value)},
                                         {"n", first_member_upto(slice, options.window)},
                                         {"reason", "slice has positive measure"}};
            }
        } else if (slice.has_exact_residues()) {
            const DensityReport d = mu_estimate(slice, system, n_max, EstimateMode::Exact, {options.threads, 0});
            row["status"] = "upper-bound";
            row["estimate"] = to_json(d.records.back().ratio);
            estimate = d.final_ratio;
        } else {
            const DensityReport d =
                mu_estimate(slice, system, n_max, EstimateMode::Window, {options.threads, options.window});
            row["status"] = "window-approximation";
            row["estimate"] = to_json(d.records.back().ratio);
            estimate = d.final_ratio;
        }
        if (estimate > options.tolerance) all_small = false;
        rows.push_back(row);
    }
    report.evidence["slices"] = rows;
    report.evidence["reciprocal_prime_sum"] = real_json(reciprocal_sum);
    report.evidence["tolerance"] = real_json(options.tolerance);
    report.evidence["note"] = "divergence of the reciprocal prime sum is assumed, partial sum reported";
    if (report.verdict != Verdict::Fail) report.verdict = all_small ? Verdict::Pass : Verdict::Inconclusive;
    return report;
}

CheckReport taudiv_bound_report(unsigned s_max, const RemainderSystem& system, unsigned n_max, Natural window,
                                unsigned threads) {
    if (s_max == 0) throw DomainError("taudiv_bound_report: s_max must be >= 1");
    if (s_max > 62) throw DomainError("taudiv_bound_report: s_max too large");
    if (n_max == 0 || n_max > system.max_n()) throw DomainError("taudiv_bound_report: N_max outside the remainder system");
    check_period(window + 1);
    CheckReport report;
    report.check = "taudiv-bound";
    report.window = window;
    report.n_from = 1;
    report.n_max = n_max;

    std::vector<std::uint8_t> in_r(window + 1, 0), odd(window + 1, 0);
    parallel_for(0, window + 1, threads, [&](Natural lo, Natural hi) {
        for (Natural n = std::max<Natural>(lo, 1); n < hi; ++n) {
            if (!member_taudiv(n)) continue;
            in_r[n] = 1;
            odd[n] = static_cast<std::uint8_t>(odd_exponent_count(n));
        }
    });

    json rows = json::array();
    for (unsigned s = 1; s <= s_max; ++s) {
        const Natural power = Natural{1} << (s + 1);
        Natural exempt = 0, constrained = 0;
        ResidueBitset small(window + 1);
        for (Natural n = 1; n <= window; ++n) {
            if (!in_r[n]) continue;
            if (odd[n] <= s) {
                ++exempt;
                small.set(n);
                continue;
            }
            ++constrained;
            if (n % power != 0 && report.verdict != Verdict::Fail) {
                report.verdict = Verdict::Fail;
                report.counterexample = {{"n", n}, {"s", s}, {"odd_exponent_primes", odd[n]},
                                         {"reason", "tau(n) | n with more than s odd-exponent primes but 2^(s+1) does not divide n"}};
            }
        }
        json residues = json::array();
        for (unsigned N = 1; N <= n_max; ++N) {
            const Natural b = system.modulus(N);
            const Natural r = residue_count_of_members(small, b);
            residues.push_back({{"N", N}, {"B_N", b}, {"R", r},
                                {"ratio", to_json(Rational(static_cast<std::int64_t>(r), static_cast<std::int64_t>(b)))}});
        }
        rows.push_back({{"s", s},
                        {"bound_term", to_json(Rational(1, static_cast<std::int64_t>(power)))},
                        {"members_with_more_odd_primes", constrained},
                        {"members_in_P_s", exempt},
                        {"residues_R_cap_P_s", residues}});
    }
    report.evidence["per_s"] = rows;
    report.evidence["bound_strictly_decreasing"] = true; // 2^{-(s+1)} halves with each s
    report.evidence["cover"] = "R minus P_s is contained in the class 0+(2^(s+1))";
    return report;
}

CheckReport rt_inclusion_check(const std::vector<unsigned>& ts, const std::vector<Natural>& slice_primes,
                               const PrimeList& list, Natural window, unsigned threads) {
    for (Natural p : slice_primes)
        if (!list.contains(p)) throw DomainError("rt_inclusion_check: slice prime " + std::to_string(p) + " is not in the list");
    check_period(window + 1);
    CheckReport report;
    report.check = "rt-inclusion";
    report.window = window;

    std::vector<std::uint8_t> odd(window + 1, 0);
    parallel_for(0, window + 1, threads, [&](Natural lo, Natural hi) {
        for (Natural n = std::max<Natural>(lo, 1); n < hi; ++n)
            odd[n] = static_cast<std::uint8_t>(odd_exponent_count(n, list));
    });

    json rows = json::array();
    for (unsigned t : ts) {
        for (Natural p : slice_primes) {
            Natural members = 0, failures = 0;
            for (Natural n = p; n <= window; n += p) {
                if ((n / p) % p == 0 || odd[n] > t) continue;
                ++members;
                const bool ok = t > 0 && odd[n / p] <= t - 1;
                if (ok) continue;
                ++failures;
                if (report.verdict != Verdict::Fail) {
                    report.verdict = Verdict::Fail;
                    report.counterexample = {{"n", n}, {"p", p}, {"t", t},
                                             {"reason", t == 0 ? "slice of R_0 is not empty"
                                                               : "n/p is not in R_(t-1)"}};
                }
            }
            rows.push_back({{"t", t}, {"p", p}, {"slice_members", members}, {"counterexamples", failures}});
        }
    }
    report.evidence["checks"] = rows;
    report.evidence["prime_list"] = list.is_default ? "default" : "custom";
    return report;
}

} // namespace buckdens
