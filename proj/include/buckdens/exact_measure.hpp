#pragma once

// Exact Buck measures of the constructed families: valuation sets N(p,E),
// multi-prime valuation sets, B_alpha and scaled unions  H = U b_i H_i.
//
// A result is a rational `value` plus a real `tail_bound`: the true measure
// lies within tail_bound of value. tail_bound == 0 means value is exact.

#include <string>
#include <vector>

#include "buckdens/rational.hpp"
#include "buckdens/set_expr.hpp"

namespace buckdens {

struct MeasureResult {
    Rational value;
    double tail_bound = 0.0;
    /// Qualifications of the result, e.g. a hypothesis only checked on a window.
    std::string caveat;

    bool exact() const noexcept { return tail_bound == 0.0; }
};

/// mu(N(p,E)) = (1 - 1/p) * sum_{e in E} p^{-e}, summed over the first K terms
/// of an infinite E with tail bound p^{-e_K}.
MeasureResult measure_valuation(Natural p, const ExponentSet& E);

/// prod (1 - 1/p_i) * prod sum_{e in E_i} p_i^{-e}; per-factor tail bounds are
/// propagated multiplicatively.
MeasureResult measure_multi(const std::vector<Natural>& primes, const std::vector<ExponentSet>& exponents);
MeasureResult measure_multi(const std::vector<ValuationSpec>& factors);

/// |{ x mod p^a : some n = x (mod p^a) has v_p(n) in E }|
///   = sum_{e in E, e < a} p^{a-e-1} (p-1) + [E has an element >= a].
Natural residues_valuation(Natural p, const ExponentSet& E, unsigned a);

/// sum over nonzero digits of 2^{-n_k}; tail 0 when the digits exhaust alpha, else 2^{-K}.
MeasureResult measure_balpha(const DyadicDigits& digits);

/// H = U_i b_i H_i with b_1 | b_2 | ... and every element of every H_i coprime
/// to every b_j.
struct ScaledUnionSpec {
    std::vector<Natural> scales;
    std::vector<SetExpr> parts;
    /// Bound on sum_{i > K} mu(H_i) / b_i for parts not supplied (truncation).
    double truncated_tail = 0.0;

    /// The union itself as a set expression.
    SetExpr union_expr() const;
};

struct CoprimalityReport {
    bool holds = true;
    bool structural = true; // false: only checked on [1, window]
    Natural window = 0;
    std::size_t part = 0;   // offending part (when !holds)
    Natural prime = 0;      // prime of some b_j dividing an element
    Natural counterexample = 0; // an element of that part divisible by `prime`, 0 if none located
};

/// Throws DomainError when the scales do not form a strictly increasing divisibility chain.
void check_divisibility_chain(const std::vector<Natural>& scales);

/// Coprimality hypothesis: proved structurally for parts with residue
/// structure, otherwise scanned on [1, window].
CoprimalityReport check_coprimality(const ScaledUnionSpec& spec, Natural window);

/// sum mu(H_i) / b_i. Throws DomainError on a broken chain or a coprimality
/// counterexample; window-only verification is recorded in `caveat`.
MeasureResult measure_scaled_union(const ScaledUnionSpec& spec, Natural window = 1'000'000);

/// Measure of any expression flagged has_exact_measure(); throws
/// UnsupportedStructure otherwise.
MeasureResult exact_measure(const SetExpr& s);

} // namespace buckdens
