#pragma once

// Normal form used for exact residue counting.
//
// A structural set is a finite union of terms. Each term is
//
//     P  ∩  { n : v_p(n) allowed by E_p for every constrained prime p }
//        ∩  a·{k^2}            (optional)
//
// with P periodic. Conditions at distinct primes are independent, so the
// residues a term attains modulo a prime-power-factored modulus M are the CRT
// product of per-prime-power residue sets, intersected with P lifted to M.

#include <map>
#include <optional>
#include <vector>

#include "buckdens/periodic_set.hpp"
#include "buckdens/set_expr.hpp"

namespace buckdens {

/// A set of exponents e >= 0: arbitrary below a threshold, periodic above it.
class ExponentPredicate {
public:
    static ExponentPredicate any();
    static ExponentPredicate at_least(unsigned v);
    /// e >= v and e = v (mod 2); the valuations of a * k^2 when v_p(a) = v.
    static ExponentPredicate parity_from(unsigned v);
    static ExponentPredicate from_set(const ExponentSet& E);

    bool allows(unsigned e) const noexcept;
    bool is_empty() const noexcept;
    bool allows_some_at_least(unsigned k) const noexcept;
    /// Allowed values agree for all e >= threshold.
    bool eventually_constant() const noexcept;

    ExponentPredicate intersect(const ExponentPredicate& other) const;
    /// { e + s : e allowed }.
    ExponentPredicate shifted(unsigned s) const;

    unsigned threshold() const noexcept { return threshold_; }
    unsigned period() const noexcept { return static_cast<unsigned>(pattern_.size()); }

private:
    void normalize();

    unsigned threshold_ = 0;
    std::vector<bool> below_;           // e < threshold
    std::vector<bool> pattern_{true};   // e >= threshold, indexed by (e - threshold) % period
};

struct StructuralTerm {
    PeriodicSet periodic = PeriodicSet::all();
    std::optional<Natural> square_factor;
    std::map<Natural, ExponentPredicate> exponents;

    bool is_pure_periodic() const noexcept { return !square_factor && exponents.empty(); }
    bool is_pure_local() const noexcept { return periodic.is_all(); }
};

/// Union of terms; the empty vector is the empty set.
using StructuralForm = std::vector<StructuralTerm>;

/// Throws UnsupportedStructure for sets without residue structure.
StructuralForm structural_form(const SetExpr& s);

/// The form as a single periodic set, when every term is periodic.
std::optional<PeriodicSet> to_periodic(const StructuralForm& form);

/// Periodic representation of a set flagged is_periodic().
PeriodicSet periodic_of(const SetExpr& s);

/// Residues mod p^k attained by a single-prime condition (valuation predicate,
/// optionally with the a * k^2 constraint).
ResidueBitset local_attained(Natural p, unsigned k, const ExponentPredicate& exps,
                             std::optional<Natural> square_factor);

/// Attained residues mod m (bit i set iff some element is = i mod m).
ResidueBitset attained_residues(const StructuralForm& form, Natural m, unsigned threads = 0);

/// R(S:m) for a structural form; avoids the bit vector for single pure terms.
Natural residue_count(const StructuralForm& form, Natural m, unsigned threads = 0);

/// True when the form denotes the empty set.
bool is_empty_form(const StructuralForm& form);

} // namespace buckdens
