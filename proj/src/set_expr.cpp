#include "buckdens/set_expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace buckdens {

// ---------------------------------------------------------------- ExponentSet

ExponentSet ExponentSet::list(std::vector<unsigned> elements) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] == 0) throw DomainError("exponent sets contain naturals >= 1 only");
        if (i > 0 && elements[i] <= elements[i - 1])
            throw DomainError("exponent set must be strictly increasing");
    }
    ExponentSet s;
    s.kind_ = Kind::Explicit;
    s.elements_ = std::move(elements);
    s.terms_ = static_cast<unsigned>(s.elements_.size());
    return s;
}

ExponentSet ExponentSet::progression(unsigned first, unsigned step, unsigned terms) {
    if (first == 0) throw DomainError("exponent progression must start at >= 1");
    if (step == 0) throw DomainError("exponent progression step must be >= 1");
    ExponentSet s;
    s.kind_ = Kind::Progression;
    s.first_ = first;
    s.step_ = step;
    s.terms_ = terms;
    return s;
}

bool ExponentSet::contains(unsigned e) const noexcept {
    if (kind_ == Kind::Explicit) return std::binary_search(elements_.begin(), elements_.end(), e);
    return e >= first_ && (e - first_) % step_ == 0;
}

std::vector<unsigned> ExponentSet::truncated() const {
    if (kind_ == Kind::Explicit) return elements_;
    std::vector<unsigned> out;
    for (unsigned k = 0; k < terms_; ++k) out.push_back(first_ + k * step_);
    return out;
}

std::string ExponentSet::to_string() const {
    if (kind_ == Kind::Progression)
        return "ap(" + std::to_string(first_) + "," + std::to_string(step_) + ")," + std::to_string(terms_);
    std::string out = "{";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(elements_[i]);
    }
    return out + "}";
}

// --------------------------------------------------------------- DyadicDigits

namespace {
constexpr unsigned kMaxDigits = 62;
}

DyadicDigits DyadicDigits::from_bits(const std::string& bits, unsigned K) {
    if (bits.size() > kMaxDigits) throw DomainError("at most 62 binary digits are supported");
    if (K > kMaxDigits) throw DomainError("digit count K must be <= 62");
    DyadicDigits d;
    std::int64_t num = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw DomainError("binary digits must be 0 or 1: '" + bits + "'");
        num = num * 2 + (c - '0');
    }
    d.alpha_ = Rational(num, std::int64_t{1} << bits.size());
    d.digits_.assign(K, false);
    for (unsigned i = 0; i < K && i < bits.size(); ++i) d.digits_[i] = bits[i] == '1';
    d.bits_ = bits;
    return d;
}

DyadicDigits DyadicDigits::from_ratio(const Rational& alpha, unsigned K) {
    if (alpha < Rational(0)) throw DomainError("alpha must be >= 0");
    if (alpha >= Rational(1)) throw DomainError("alpha must be < 1 (use 'all' for the full set)");
    if (K > kMaxDigits) throw DomainError("digit count K must be <= 62");
    DyadicDigits d;
    d.alpha_ = alpha;
    d.from_ratio_ = true;
    // Doubling expansion: digit = floor(2 r), r <- frac(2 r). Terminates for dyadic alpha.
    __int128 r = alpha.num();
    const __int128 q = alpha.den();
    for (unsigned i = 0; i < K; ++i) {
        r *= 2;
        const bool bit = r >= q;
        if (bit) r -= q;
        d.digits_.push_back(bit);
    }
    return d;
}

std::vector<unsigned> DyadicDigits::nonzero_indices() const {
    std::vector<unsigned> out;
    for (unsigned i = 0; i < digits_.size(); ++i)
        if (digits_[i]) out.push_back(i + 1);
    return out;
}

Rational DyadicDigits::partial_sum() const {
    Rational sum(0);
    for (unsigned n : nonzero_indices()) sum += Rational(1, std::int64_t{1} << n);
    return sum;
}

double DyadicDigits::tail_bound() const {
    if (partial_sum() == alpha_) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(digits_.size()));
}

std::string DyadicDigits::to_string() const {
    return (from_ratio_ ? alpha_.to_string() : bits_) + "," + std::to_string(digits_.size());
}

// ------------------------------------------------------------------ PrimeList

PrimeList PrimeList::standard() {
    PrimeList l;
    l.primes = primes_up_to(10'000);
    l.is_default = true;
    return l;
}

PrimeList PrimeList::of(std::vector<Natural> primes) {
    if (primes.empty()) throw DomainError("prime list must be non-empty");
    std::sort(primes.begin(), primes.end());
    if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
        throw DomainError("prime list must be distinct");
    for (auto p : primes) require_prime(p, "prime list");
    PrimeList l;
    l.primes = std::move(primes);
    return l;
}

bool PrimeList::contains(Natural p) const { return std::binary_search(primes.begin(), primes.end(), p); }

// ---------------------------------------------------------- membership tests

bool member_balpha(Natural n, const DyadicDigits& digits) {
    if (n == 0) return false;
    const unsigned e = static_cast<unsigned>(std::countr_zero(n));
    return digits.digit(e + 1);
}

bool member_valuation(Natural n, Natural p, const ExponentSet& E) {
    if (n == 0) return false;
    return E.contains(detail::valuation_unchecked(n, p));
}

bool member_multi(Natural n, const std::vector<ValuationSpec>& factors) {
    for (const auto& f : factors)
        if (!member_valuation(n, f.p, f.exponents)) return false;
    return n != 0;
}

bool member_square(Natural n) noexcept {
    if (n == 0) return false;
    const Natural r = isqrt(n);
    return r * r == n;
}

bool member_pt(Natural n, unsigned t) {
    if (n == 0) return false;
    return omega(n) <= t;
}

unsigned odd_exponent_count(Natural n, const PrimeList& primes) {
    unsigned count = 0;
    for (const auto& [p, e] : factorize(n))
        if (e % 2 == 1 && primes.contains(p)) ++count;
    return count;
}

unsigned odd_exponent_count(Natural n) {
    unsigned count = 0;
    for (const auto& [p, e] : factorize(n))
        if (e % 2 == 1) ++count;
    return count;
}

bool member_rt(Natural n, unsigned t, const PrimeList& primes) {
    if (n == 0) return false;
    return odd_exponent_count(n, primes) <= t;
}

bool member_taudiv(Natural n) {
    if (n == 0) return false;
    return n % tau(n) == 0;
}

// -------------------------------------------------------------------- SetExpr

SetExpr SetExpr::make(SetNode node) { return SetExpr(std::make_shared<const SetNode>(std::move(node))); }

namespace {
SetNode leaf(SetKind kind, bool residues, bool periodic, bool measure, bool zero) {
    SetNode n;
    n.kind = kind;
    n.exact_residues = residues;
    n.periodic_form = periodic;
    n.exact_measure = measure;
    n.zero_measure = zero;
    return n;
}

bool periodic_exponents(const ExponentSet& E) { return E.is_finite() || E.step() == 1; }
} // namespace

SetExpr SetExpr::all() { return make(leaf(SetKind::All, true, true, true, false)); }
SetExpr SetExpr::empty() { return make(leaf(SetKind::Empty, true, true, true, true)); }
SetExpr SetExpr::odd() { return make(leaf(SetKind::Odd, true, true, true, false)); }

SetExpr SetExpr::ap(Natural r, Natural m) {
    if (m == 0) throw DomainError("ap modulus must be >= 1");
    if (r >= m) throw DomainError("ap residue must be below the modulus");
    SetNode n = leaf(SetKind::AP, true, true, true, false);
    n.progression = ResidueClass(r, m);
    return make(std::move(n));
}

SetExpr SetExpr::periodic(PeriodicSet s) {
    SetNode n = leaf(SetKind::Periodic, true, true, true, s.is_empty());
    n.periodic = std::move(s);
    return make(std::move(n));
}

SetExpr SetExpr::valuation(Natural p, ExponentSet E) {
    require_prime(p, "valuation set");
    SetNode n = leaf(SetKind::Valuation, true, periodic_exponents(E), true, E.is_empty());
    n.valuations.push_back({p, std::move(E)});
    return make(std::move(n));
}

SetExpr SetExpr::multi_valuation(std::vector<ValuationSpec> factors) {
    if (factors.empty()) throw DomainError("mval needs at least one prime");
    bool periodic = true;
    bool zero = false;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        require_prime(factors[i].p, "mval");
        if (i > 0 && factors[i].p <= factors[i - 1].p)
            throw DomainError("mval primes must be distinct and increasing");
        periodic = periodic && periodic_exponents(factors[i].exponents);
        zero = zero || factors[i].exponents.is_empty();
    }
    SetNode n = leaf(SetKind::MultiValuation, true, periodic, true, zero);
    n.valuations = std::move(factors);
    return make(std::move(n));
}

SetExpr SetExpr::balpha(DyadicDigits digits) {
    SetNode n = leaf(SetKind::BAlpha, true, true, true, digits.nonzero_indices().empty());
    n.digits = std::move(digits);
    return make(std::move(n));
}

SetExpr SetExpr::squares() { return make(leaf(SetKind::Squares, true, false, true, true)); }

SetExpr SetExpr::pt_max(unsigned t) {
    SetNode n = leaf(SetKind::PtMax, false, false, true, true);
    n.parameter = t;
    return make(std::move(n));
}

SetExpr SetExpr::rt_max(unsigned t, PrimeList primes) {
    if (primes.primes.empty()) throw DomainError("rt needs a non-empty prime list");
    SetNode n = leaf(SetKind::RtMax, false, false, false, false);
    n.parameter = t;
    n.primes = std::make_shared<const PrimeList>(std::move(primes));
    return make(std::move(n));
}

SetExpr SetExpr::tau_divides() { return make(leaf(SetKind::TauDivides, false, false, true, true)); }

SetExpr SetExpr::p_slice(SetExpr inner, Natural p) {
    require_prime(p, "slice");
    const SetNode& c = inner.node();
    SetNode n = leaf(SetKind::PSlice, c.exact_residues, c.periodic_form, c.periodic_form || c.zero_measure,
                     c.zero_measure);
    n.parameter = p;
    n.children.push_back(std::move(inner));
    return make(std::move(n));
}

SetExpr SetExpr::scale(Natural a, SetExpr inner) {
    if (a == 0) throw DomainError("scale factor must be >= 1");
    const SetNode& c = inner.node();
    SetNode n = leaf(SetKind::Scale, c.exact_residues, c.periodic_form, c.exact_measure, c.zero_measure);
    n.parameter = a;
    n.children.push_back(std::move(inner));
    return make(std::move(n));
}

SetExpr SetExpr::unite(std::vector<SetExpr> parts) {
    bool residues = true, periodic = true, zero = true;
    for (const auto& c : parts) {
        residues = residues && c.has_exact_residues();
        periodic = periodic && c.is_periodic();
        zero = zero && c.is_zero_measure();
    }
    SetNode n = leaf(SetKind::Union, residues, periodic, periodic || zero, zero);
    n.children = std::move(parts);
    return make(std::move(n));
}

SetExpr SetExpr::intersect(std::vector<SetExpr> parts) {
    bool residues = true, periodic = true, zero = false;
    for (const auto& c : parts) {
        residues = residues && c.has_exact_residues();
        periodic = periodic && c.is_periodic();
        zero = zero || c.is_zero_measure();
    }
    SetNode n = leaf(SetKind::Intersect, residues, periodic, periodic || zero, zero);
    n.children = std::move(parts);
    return make(std::move(n));
}

SetExpr SetExpr::complement(SetExpr inner) {
    const SetNode& c = inner.node();
    SetNode n = leaf(SetKind::Complement, c.periodic_form, c.periodic_form, c.exact_measure, false);
    n.children.push_back(std::move(inner));
    return make(std::move(n));
}

bool SetExpr::contains(Natural n) const {
    if (n == 0) return false;
    const SetNode& s = *node_;
    switch (s.kind) {
    case SetKind::All: return true;
    case SetKind::Empty: return false;
    case SetKind::Odd: return n % 2 == 1;
    case SetKind::AP: return s.progression.contains(n);
    case SetKind::Periodic: return s.periodic->contains(n);
    case SetKind::Valuation: return member_valuation(n, s.valuations[0].p, s.valuations[0].exponents);
    case SetKind::MultiValuation: return member_multi(n, s.valuations);
    case SetKind::BAlpha: return member_balpha(n, *s.digits);
    case SetKind::Squares: return member_square(n);
    case SetKind::PtMax: return member_pt(n, static_cast<unsigned>(s.parameter));
    case SetKind::RtMax: return member_rt(n, static_cast<unsigned>(s.parameter), *s.primes);
    case SetKind::TauDivides: return member_taudiv(n);
    case SetKind::PSlice:
        return n % s.parameter == 0 && (n / s.parameter) % s.parameter != 0 && s.children[0].contains(n);
    case SetKind::Scale: return n % s.parameter == 0 && s.children[0].contains(n / s.parameter);
    case SetKind::Union:
        return std::any_of(s.children.begin(), s.children.end(), [n](const SetExpr& c) { return c.contains(n); });
    case SetKind::Intersect:
        return std::all_of(s.children.begin(), s.children.end(), [n](const SetExpr& c) { return c.contains(n); });
    case SetKind::Complement: return !s.children[0].contains(n);
    }
    return false;
}

std::string SetExpr::to_string() const {
    const SetNode& s = *node_;
    auto list = [](const std::vector<SetExpr>& xs) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ',';
            out += xs[i].to_string();
        }
        return out;
    };
    switch (s.kind) {
    case SetKind::All: return "all";
    case SetKind::Empty: return "empty";
    case SetKind::Odd: return "odd";
    case SetKind::AP: return "ap(" + std::to_string(s.progression.r) + "," + std::to_string(s.progression.m) + ")";
    case SetKind::Periodic: return s.periodic->to_string();
    case SetKind::Valuation:
        return "val(" + std::to_string(s.valuations[0].p) + "," + s.valuations[0].exponents.to_string() + ")";
    case SetKind::MultiValuation: {
        std::string out = "mval(";
        for (std::size_t i = 0; i < s.valuations.size(); ++i) {
            if (i) out += ',';
            out += "(" + std::to_string(s.valuations[i].p) + "," + s.valuations[i].exponents.to_string() + ")";
        }
        return out + ")";
    }
    case SetKind::BAlpha: return "balpha(" + s.digits->to_string() + ")";
    case SetKind::Squares: return "squares";
    case SetKind::PtMax: return "pt(" + std::to_string(s.parameter) + ")";
    case SetKind::RtMax: {
        std::string out = "rt(" + std::to_string(s.parameter) + ";";
        if (s.primes->is_default) return out + "default)";
        for (std::size_t i = 0; i < s.primes->primes.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(s.primes->primes[i]);
        }
        return out + ")";
    }
    case SetKind::TauDivides: return "taudiv";
    case SetKind::PSlice: return "slice(" + s.children[0].to_string() + "," + std::to_string(s.parameter) + ")";
    case SetKind::Scale: return "scale(" + std::to_string(s.parameter) + "," + s.children[0].to_string() + ")";
    case SetKind::Union: return "union(" + list(s.children) + ")";
    case SetKind::Intersect: return "inter(" + list(s.children) + ")";
    case SetKind::Complement: return "comp(" + s.children[0].to_string() + ")";
    }
    return "?";
}

SetExpr p_slice(const SetExpr& s, Natural p) { return SetExpr::p_slice(s, p); }

std::vector<SetExpr> balpha_parts(const DyadicDigits& digits) {
    std::vector<SetExpr> parts;
    for (unsigned n : digits.nonzero_indices()) parts.push_back(SetExpr::scale(Natural{1} << (n - 1), SetExpr::odd()));
    return parts;
}

} // namespace buckdens
