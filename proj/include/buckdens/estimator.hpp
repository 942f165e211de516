#pragma once

// Numeric estimation of mu*(S) = lim R(S:B_N) / B_N along a remainder system
// {B_N} (B_N | B_{N+1}, every d eventually divides B_N).
//
// Exact mode counts attained residues from the set's structure; every ratio is
// then an upper bound for mu*(S) and the sequence is non-increasing. Window
// mode scans members n <= W and yields lower bounds on R, so ratios are only
// approximations.

#include <string>
#include <vector>

#include "buckdens/rational.hpp"
#include "buckdens/residue_bitset.hpp"
#include "buckdens/set_expr.hpp"

namespace buckdens {

class RemainderSystem {
public:
    enum class Kind { Lcm, Factorial, Custom };

    /// B_N = lcm(1..N), N <= 42.
    static RemainderSystem lcm(unsigned max_n = 42);
    /// B_N = N!, N <= 20.
    static RemainderSystem factorial(unsigned max_n = 20);
    /// B_N = chain[N-1]; the chain must be strictly increasing with B_N | B_{N+1}.
    static RemainderSystem custom(std::vector<Natural> chain);
    /// "lcm", "factorial" or "custom:b1,b2,...".
    static RemainderSystem parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    unsigned max_n() const noexcept { return max_n_; }
    /// B_N for 1 <= N <= max_n().
    Natural modulus(unsigned N) const;
    std::string name() const;

private:
    Kind kind_ = Kind::Lcm;
    unsigned max_n_ = 0;
    std::vector<Natural> moduli_;
};

enum class EstimateMode { Exact, Window };
enum class BoundSemantics { UpperBound, Approximation };

std::string to_string(EstimateMode mode);
std::string to_string(BoundSemantics semantics);

struct DensityRecord {
    unsigned n = 0;
    Natural modulus = 0;
    Natural residues = 0;
    Rational ratio;
    bool exact = false;
};

struct DensityReport {
    std::string set;
    std::string system;
    EstimateMode mode = EstimateMode::Exact;
    Natural window = 0; // 0 in exact mode
    std::vector<DensityRecord> records;
    double final_ratio = 0.0;
    BoundSemantics semantics = BoundSemantics::UpperBound;
};

struct EstimatorOptions {
    unsigned threads = 0; // 0: hardware concurrency
    Natural window = 0;   // 0: default_window(modulus)
};

/// max(10^6, 64 m).
Natural default_window(Natural m);

/// Exact R(s:m); throws UnsupportedStructure when s lacks residue structure.
Natural residue_count_exact(const SetExpr& s, Natural m, unsigned threads = 0);

/// |{ n mod m : n in s, n <= W }|, a lower bound on R(s:m), non-decreasing in W.
Natural residue_count_window(const SetExpr& s, Natural m, Natural window, unsigned threads = 0);

/// Attained-residue bit vector modulo B (exact: from structure; window: from
/// members n <= W).
ResidueBitset sieve_residues(const SetExpr& s, Natural B, EstimateMode mode, Natural window = 0,
                             unsigned threads = 0);

/// Members of s in [1, W] as a bit vector indexed by n.
ResidueBitset window_members(const SetExpr& s, Natural window, unsigned threads = 0);

/// Residues mod m of the set bits of `members`.
Natural residue_count_of_members(const ResidueBitset& members, Natural m);

/// R(s:B_N)/B_N for N = 1..n_max.
DensityReport mu_estimate(const SetExpr& s, const RemainderSystem& system, unsigned n_max, EstimateMode mode,
                          const EstimatorOptions& options = {});

} // namespace buckdens
