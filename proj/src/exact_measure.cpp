#include "buckdens/exact_measure.hpp"

#include <cmath>
#include <set>

#include "buckdens/structure.hpp"

namespace buckdens {

namespace {
Rational inverse_power(Natural p, unsigned e) {
    const Natural q = checked_pow(p, e);
    if (q > static_cast<Natural>(INT64_MAX)) throw OverflowError("p^e exceeds the rational range");
    return Rational(1, static_cast<std::int64_t>(q));
}
} // namespace

MeasureResult measure_valuation(Natural p, const ExponentSet& E) {
    require_prime(p, "measure_valuation");
    Rational sum(0);
    const auto terms = E.truncated();
    for (unsigned e : terms) sum += inverse_power(p, e);
    MeasureResult out;
    out.value = Rational(static_cast<std::int64_t>(p - 1), static_cast<std::int64_t>(p)) * sum;
    if (!E.is_finite()) {
        // The omitted exponents exceed e_K, so they contribute at most
        // (1 - 1/p) * sum_{e > e_K} p^{-e} <= p^{-e_K}.
        const unsigned last = terms.empty() ? E.first() - 1 : terms.back();
        out.tail_bound = std::pow(static_cast<double>(p), -static_cast<double>(last));
    }
    return out;
}

MeasureResult measure_multi(const std::vector<Natural>& primes, const std::vector<ExponentSet>& exponents) {
    if (primes.size() != exponents.size()) throw DomainError("measure_multi: primes and exponent sets differ in length");
    if (primes.empty()) throw DomainError("measure_multi: at least one prime is required");
    for (std::size_t i = 1; i < primes.size(); ++i)
        if (primes[i] <= primes[i - 1]) throw DomainError("measure_multi: primes must be distinct and increasing");
    std::vector<MeasureResult> fs;
    Rational value(1);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        fs.push_back(measure_valuation(primes[i], exponents[i]));
        value *= fs.back().value;
    }
    // prod(v_i + t_i) - prod(v_i), telescoped so no cancellation occurs
    MeasureResult out;
    out.value = value;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].tail_bound == 0.0) continue;
        double term = fs[i].tail_bound;
        for (std::size_t j = 0; j < i; ++j) term *= fs[j].value.to_double() + fs[j].tail_bound;
        for (std::size_t j = i + 1; j < fs.size(); ++j) term *= fs[j].value.to_double();
        out.tail_bound += term;
    }
    return out;
}

MeasureResult measure_multi(const std::vector<ValuationSpec>& factors) {
    std::vector<Natural> ps;
    std::vector<ExponentSet> es;
    for (const auto& f : factors) {
        ps.push_back(f.p);
        es.push_back(f.exponents);
    }
    return measure_multi(ps, es);
}

Natural residues_valuation(Natural p, const ExponentSet& E, unsigned a) {
    require_prime(p, "residues_valuation");
    const Natural q = checked_pow(p, a);
    Natural count = 0;
    for (unsigned e = 1; e < a; ++e)
        if (E.contains(e)) count = checked_add(count, (q / checked_pow(p, e + 1)) * (p - 1));
    bool reaches = false;
    if (E.is_finite()) {
        reaches = !E.elements().empty() && E.elements().back() >= a;
    } else {
        reaches = true;
    }
    return count + (reaches ? 1 : 0);
}

MeasureResult measure_balpha(const DyadicDigits& digits) {
    MeasureResult out;
    out.value = digits.partial_sum();
    out.tail_bound = digits.tail_bound();
    return out;
}

SetExpr ScaledUnionSpec::union_expr() const {
    std::vector<SetExpr> pieces;
    for (std::size_t i = 0; i < parts.size() && i < scales.size(); ++i) pieces.push_back(SetExpr::scale(scales[i], parts[i]));
    return SetExpr::unite(std::move(pieces));
}

void check_divisibility_chain(const std::vector<Natural>& scales) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] == 0) throw DomainError("scales must be >= 1");
        if (i > 0 && (scales[i] <= scales[i - 1] || scales[i] % scales[i - 1] != 0))
            throw DomainError("scales must form an increasing divisibility chain: " + std::to_string(scales[i - 1]) +
                              " then " + std::to_string(scales[i]));
    }
}

CoprimalityReport check_coprimality(const ScaledUnionSpec& spec, Natural window) {
    CoprimalityReport report;
    report.window = window;
    std::set<Natural> primes;
    for (auto b : spec.scales)
        for (const auto& pp : factorize(b)) primes.insert(pp.p);
    Natural modulus = 1;
    for (auto p : primes) modulus = checked_mul(modulus, p);

    for (std::size_t i = 0; i < spec.parts.size(); ++i) {
        const SetExpr& part = spec.parts[i];
        if (part.has_exact_residues()) {
            for (auto p : primes) {
                const SetExpr multiples = SetExpr::intersect({part, SetExpr::ap(0, p)});
                if (is_empty_form(structural_form(multiples))) continue;
                report.holds = false;
                report.part = i;
                report.prime = p;
                for (Natural n = p; n <= std::max<Natural>(window, p); n += p)
                    if (part.contains(n)) {
                        report.counterexample = n;
                        break;
                    }
                return report;
            }
        } else {
            report.structural = false;
            for (Natural n = 1; n <= window; ++n) {
                if (std::gcd(n, modulus) == 1 || !part.contains(n)) continue;
                report.holds = false;
                report.part = i;
                report.counterexample = n;
                for (auto p : primes)
                    if (n % p == 0) {
                        report.prime = p;
                        break;
                    }
                return report;
            }
        }
    }
    return report;
}

MeasureResult measure_scaled_union(const ScaledUnionSpec& spec, Natural window) {
    if (spec.scales.size() != spec.parts.size()) throw DomainError("scaled union: scales and parts differ in length");
    check_divisibility_chain(spec.scales);
    const CoprimalityReport cop = check_coprimality(spec, window);
    if (!cop.holds)
        throw DomainError("scaled union: part " + std::to_string(cop.part + 1) + " has element " +
                          std::to_string(cop.counterexample) + " divisible by " + std::to_string(cop.prime));
    MeasureResult out;
    out.tail_bound = spec.truncated_tail;
    for (std::size_t i = 0; i < spec.parts.size(); ++i) {
        const MeasureResult m = exact_measure(spec.parts[i]);
        const std::int64_t b = static_cast<std::int64_t>(spec.scales[i]);
        out.value += m.value / Rational(b);
        out.tail_bound += m.tail_bound / static_cast<double>(b);
    }
    if (!cop.structural) out.caveat = "coprimality empirically verified on [1," + std::to_string(window) + "]";
    return out;
}

MeasureResult exact_measure(const SetExpr& s) {
    const SetNode& n = s.node();
    if (!n.exact_measure) throw UnsupportedStructure("no exact measure is available for '" + s.to_string() + "'");
    MeasureResult out;
    switch (n.kind) {
    case SetKind::All: out.value = Rational(1); return out;
    case SetKind::Empty: return out;
    case SetKind::Odd: out.value = Rational(1, 2); return out;
    case SetKind::AP: out.value = Rational(1, static_cast<std::int64_t>(n.progression.m)); return out;
    case SetKind::Periodic: out.value = n.periodic->density(); return out;
    case SetKind::Valuation: return measure_valuation(n.valuations[0].p, n.valuations[0].exponents);
    case SetKind::MultiValuation: return measure_multi(n.valuations);
    case SetKind::BAlpha: return measure_balpha(*n.digits);
    case SetKind::Squares:
    case SetKind::PtMax:
    case SetKind::TauDivides: return out; // Buck measurable with measure 0
    case SetKind::Scale: {
        out = exact_measure(n.children[0]);
        out.value /= Rational(static_cast<std::int64_t>(n.parameter));
        out.tail_bound /= static_cast<double>(n.parameter);
        return out;
    }
    case SetKind::Complement: {
        out = exact_measure(n.children[0]);
        out.value = Rational(1) - out.value;
        return out;
    }
    case SetKind::PSlice:
    case SetKind::Union:
    case SetKind::Intersect:
        if (n.periodic_form) {
            out.value = periodic_of(s).density();
            return out;
        }
        if (n.zero_measure) return out;
        break;
    case SetKind::RtMax: break;
    }
    throw UnsupportedStructure("no exact measure is available for '" + s.to_string() + "'");
}

} // namespace buckdens
