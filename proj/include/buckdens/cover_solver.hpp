#pragma once

// Covers of sets by finitely many residue classes, the objects whose weights
// sum_i 1/m_i define mu*(S) by their infimum.

#include <string>
#include <vector>

#include "buckdens/periodic_set.hpp"
#include "buckdens/set_expr.hpp"

namespace buckdens {

enum class CoverStatus { Proved, WindowChecked, Failed };
std::string to_string(CoverStatus status);

struct CoverCertificate {
    std::vector<ResidueClass> classes; // sorted by modulus, then residue
    Rational weight;                   // sum of 1/m_i
    CoverStatus status = CoverStatus::Proved;
    bool optimal = true;               // false when the node budget ran out or nodes hit the period limit
    Natural max_modulus = 0;           // 0: unrestricted
    Natural window = 0;                // for window-checked certificates
    std::string label;
};

/// Sum of 1/m over the classes (throws OverflowError if the denominator
/// leaves the 64-bit range).
Rational cover_weight(const std::vector<ResidueClass>& classes);

struct CoverSearchStats {
    std::uint64_t nodes = 0;
    bool budget_exhausted = false;
    bool period_limited = false;
};

struct InfimumCover {
    Rational value;
    CoverCertificate certificate;
    CoverSearchStats stats;
};

/// Minimum of sum 1/m_i over covers of s by classes r_i+(m_i) with m_i <= M,
/// by depth-first branch and bound. On budget exhaustion the best cover found
/// is returned with optimal = false.
InfimumCover infimum_cover(const PeriodicSet& s, Natural max_modulus, std::uint64_t node_budget = 10'000'000);

/// Greedy cover of the members n <= W by classes with moduli from the list,
/// repeatedly taking the class with most newly covered members per unit
/// weight. Status window-checked; an empty modulus list gives {0+(1)}.
CoverCertificate greedy_cover(const SetExpr& s, const std::vector<Natural>& moduli, Natural window);

struct CoverVerification {
    CoverStatus status = CoverStatus::Proved;
    Natural window = 0;
    Natural counterexample = 0; // member of s outside the cover, 0 if none found
    Natural modulus = 0;        // lcm of the cover moduli (structural check)
    Natural residue = 0;        // uncovered attained residue mod `modulus` (structural failure)
};

/// Exact check over lcm of the moduli when s has residue structure (status
/// proved), otherwise a scan of [1, W] (status window-checked).
CoverVerification verify_cover(const SetExpr& s, const std::vector<ResidueClass>& classes, Natural window = 1'000'000);

} // namespace buckdens
