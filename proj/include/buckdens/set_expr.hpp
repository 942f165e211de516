#pragma once

// Expression trees denoting subsets of the naturals: builtin families (odd
// numbers, valuation sets N(p,E), B_alpha, squares, P_t, R_t, tau(n)|n, ...)
// combined by scaling and boolean operations.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "buckdens/core.hpp"
#include "buckdens/periodic_set.hpp"
#include "buckdens/rational.hpp"

namespace buckdens {

/// Strictly increasing exponents e_1 < e_2 < ..., all >= 1. Either an explicit
/// finite list or the infinite progression first + k*step (k >= 0), of which
/// the first `terms` are used wherever a series is summed.
class ExponentSet {
public:
    enum class Kind { Explicit, Progression };

    static ExponentSet list(std::vector<unsigned> elements);
    static ExponentSet progression(unsigned first, unsigned step, unsigned terms);
    /// Every exponent >= 1, summed over `terms` terms.
    static ExponentSet all(unsigned terms) { return progression(1, 1, terms); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Explicit; }
    bool is_empty() const noexcept { return kind_ == Kind::Explicit && elements_.empty(); }
    bool contains(unsigned e) const noexcept;

    /// Explicit elements, or the first `terms` progression elements.
    std::vector<unsigned> truncated() const;

    const std::vector<unsigned>& elements() const noexcept { return elements_; }
    unsigned first() const noexcept { return first_; }
    unsigned step() const noexcept { return step_; }
    unsigned terms() const noexcept { return terms_; }

    /// "{1,3}" or "ap(1,2),10".
    std::string to_string() const;

    friend bool operator==(const ExponentSet&, const ExponentSet&) = default;

private:
    Kind kind_ = Kind::Explicit;
    std::vector<unsigned> elements_;
    unsigned first_ = 0;
    unsigned step_ = 0;
    unsigned terms_ = 0;
};

/// The first K binary digits a_1 a_2 ... a_K of alpha in [0,1), taken either
/// from an explicit bit string or by expanding a rational p/q (terminating
/// expansion for dyadic rationals).
class DyadicDigits {
public:
    static DyadicDigits from_bits(const std::string& bits, unsigned K);
    static DyadicDigits from_ratio(const Rational& alpha, unsigned K);

    unsigned length() const noexcept { return static_cast<unsigned>(digits_.size()); }
    bool digit(unsigned index) const noexcept { return index >= 1 && index <= digits_.size() && digits_[index - 1]; }
    const std::vector<bool>& digits() const noexcept { return digits_; }

    /// The alpha the digits were taken from.
    const Rational& alpha() const noexcept { return alpha_; }
    /// Indices n_1 < n_2 < ... of nonzero digits among the first K.
    std::vector<unsigned> nonzero_indices() const;
    /// sum over nonzero digits of 2^{-n_k}.
    Rational partial_sum() const;
    /// 0 when the K digits reproduce alpha exactly, else 2^{-K}.
    double tail_bound() const;

    /// "101,3" or "5/8,3".
    std::string to_string() const;

    friend bool operator==(const DyadicDigits&, const DyadicDigits&) = default;

private:
    std::vector<bool> digits_;
    Rational alpha_;
    std::string bits_; // source text when built from bits
    bool from_ratio_ = false;
};

struct ValuationSpec {
    Natural p = 2;
    ExponentSet exponents;
    friend bool operator==(const ValuationSpec&, const ValuationSpec&) = default;
};

/// Finite prime list used by R_t.
struct PrimeList {
    std::vector<Natural> primes; // sorted, distinct
    bool is_default = false;      // all primes <= 10^4

    static PrimeList standard();
    static PrimeList of(std::vector<Natural> primes);
    bool contains(Natural p) const;
};

enum class SetKind {
    All,
    Empty,
    Odd,
    AP,
    Periodic,
    Valuation,
    MultiValuation,
    BAlpha,
    Squares,
    PtMax,
    RtMax,
    TauDivides,
    PSlice,
    Scale,
    Union,
    Intersect,
    Complement
};

class SetExpr;

struct SetNode {
    SetKind kind = SetKind::Empty;
    ResidueClass progression;                // AP
    std::optional<PeriodicSet> periodic;     // Periodic
    std::vector<ValuationSpec> valuations;   // Valuation (one), MultiValuation
    std::optional<DyadicDigits> digits;      // BAlpha
    Natural parameter = 0;                   // t (PtMax, RtMax), p (PSlice), a (Scale)
    std::shared_ptr<const PrimeList> primes; // RtMax
    std::vector<SetExpr> children;

    // Capabilities, fixed at construction.
    bool exact_residues = false; // structural residue counting is available
    bool periodic_form = false;  // the set is a finite union of residue classes
    bool exact_measure = false;  // a Buck measure (possibly with tail bound) is available
    bool zero_measure = false;   // the measure is known to be exactly 0
};

/// Immutable, cheaply copyable handle to a set expression.
class SetExpr {
public:
    static SetExpr all();
    static SetExpr empty();
    static SetExpr odd();
    static SetExpr ap(Natural r, Natural m);
    static SetExpr periodic(PeriodicSet s);
    static SetExpr valuation(Natural p, ExponentSet E);
    static SetExpr multi_valuation(std::vector<ValuationSpec> factors);
    static SetExpr balpha(DyadicDigits digits);
    static SetExpr squares();
    static SetExpr pt_max(unsigned t);
    static SetExpr rt_max(unsigned t, PrimeList primes);
    static SetExpr tau_divides();
    /// S_p = { s in S : p | s, p^2 does not divide s }.
    static SetExpr p_slice(SetExpr inner, Natural p);
    static SetExpr scale(Natural a, SetExpr inner);
    static SetExpr unite(std::vector<SetExpr> parts);
    static SetExpr intersect(std::vector<SetExpr> parts);
    static SetExpr complement(SetExpr inner);

    /// Parses the textual grammar; throws ParseError citing the offending token.
    static SetExpr parse(std::string_view text);

    bool contains(Natural n) const;

    SetKind kind() const noexcept { return node_->kind; }
    const SetNode& node() const noexcept { return *node_; }
    const std::vector<SetExpr>& children() const noexcept { return node_->children; }

    bool has_exact_residues() const noexcept { return node_->exact_residues; }
    bool has_exact_measure() const noexcept { return node_->exact_measure; }
    bool is_periodic() const noexcept { return node_->periodic_form; }
    bool is_zero_measure() const noexcept { return node_->zero_measure; }

    /// Canonical text in the parse grammar.
    std::string to_string() const;

    friend bool operator==(const SetExpr& a, const SetExpr& b) { return a.to_string() == b.to_string(); }

private:
    explicit SetExpr(std::shared_ptr<const SetNode> node) : node_(std::move(node)) {}
    static SetExpr make(SetNode node);

    std::shared_ptr<const SetNode> node_;
};

// Membership predicates of the builtin families.
bool member_balpha(Natural n, const DyadicDigits& digits);
bool member_valuation(Natural n, Natural p, const ExponentSet& E);
bool member_multi(Natural n, const std::vector<ValuationSpec>& factors);
bool member_square(Natural n) noexcept;
bool member_pt(Natural n, unsigned t);
/// Number of primes from `primes` with odd exponent in n.
unsigned odd_exponent_count(Natural n, const PrimeList& primes);
bool member_rt(Natural n, unsigned t, const PrimeList& primes);
/// Number of primes (all primes) with odd exponent in n.
unsigned odd_exponent_count(Natural n);
bool member_taudiv(Natural n);

/// Intersect(s, Valuation(p, {1})).
SetExpr p_slice(const SetExpr& s, Natural p);

/// Explicit union of the B_alpha components 2^{n_k - 1} * O, one per nonzero digit.
std::vector<SetExpr> balpha_parts(const DyadicDigits& digits);

} // namespace buckdens
