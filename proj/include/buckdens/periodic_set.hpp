#pragma once

// Finite unions of residue classes, stored as a membership bit vector over one
// period. These sets are Buck measurable and their measure is the plain
// density |members| / period.

#include <span>
#include <string>
#include <vector>

#include "buckdens/core.hpp"
#include "buckdens/rational.hpp"
#include "buckdens/residue_bitset.hpp"

namespace buckdens {

/// Largest period (in bits) a PeriodicSet or residue sieve may allocate.
/// Defaults to 2^32.
Natural period_limit() noexcept;
void set_period_limit(Natural limit) noexcept;

/// Throws PeriodLimitError when `period` exceeds period_limit().
void check_period(Natural period);

class PeriodicSet {
public:
    /// The empty set, period 1.
    PeriodicSet();
    PeriodicSet(Natural period, ResidueBitset members);

    static PeriodicSet all();
    static PeriodicSet empty();
    static PeriodicSet from_classes(std::span<const ResidueClass> classes);
    static PeriodicSet from_residues(Natural period, std::span<const Natural> residues);

    Natural period() const noexcept { return period_; }
    const ResidueBitset& members() const noexcept { return members_; }

    bool contains(Natural n) const noexcept { return members_.test(n % period_); }
    bool is_empty() const noexcept { return members_.none(); }
    bool is_all() const noexcept { return members_.all(); }
    Natural member_count() const noexcept { return members_.count(); }

    /// Exact density |members| / period in lowest terms.
    Rational density() const;

    /// Same set over a multiple of the current period.
    PeriodicSet expanded(Natural new_period) const;

    /// Same set over its minimal period.
    PeriodicSet canonical() const;

    /// Smallest n >= 1 belonging to the set, or 0 for the empty set.
    Natural first_member() const noexcept;

    std::string to_string() const;

    /// Set equality (compares canonical forms).
    friend bool operator==(const PeriodicSet& a, const PeriodicSet& b);

private:
    Natural period_;
    ResidueBitset members_;
};

PeriodicSet unite(const PeriodicSet& a, const PeriodicSet& b);
PeriodicSet intersect(const PeriodicSet& a, const PeriodicSet& b);
PeriodicSet complement(const PeriodicSet& s);
PeriodicSet difference(const PeriodicSet& a, const PeriodicSet& b);

/// a*S: period a*L, members { a x mod a L }. density(a S) = density(S) / a.
PeriodicSet scale_set(Natural a, const PeriodicSet& s);

/// R(S:m), the number of residues mod m attained by elements of S.
/// With g = gcd(L, m), x mod m is attained iff x mod g is the image of a member,
/// so the count is (m / g) times the number of member images mod g.
Natural residue_count_periodic(const PeriodicSet& s, Natural m);

/// Bit vector of the residues mod m attained by S.
ResidueBitset attained_residues(const PeriodicSet& s, Natural m);

bool is_subset(const PeriodicSet& a, const PeriodicSet& b);

} // namespace buckdens
