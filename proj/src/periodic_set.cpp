#include "buckdens/periodic_set.hpp"

#include <atomic>
#include <numeric>

namespace buckdens {

namespace {
std::atomic<Natural> g_period_limit{Natural{1} << 32};

// Reduce a membership vector of period `from` to `to` (to | from) by folding.
ResidueBitset fold(const ResidueBitset& bits, Natural to) {
    ResidueBitset out(to);
    bits.for_each_set([&](Natural i) { out.set(i % to); });
    return out;
}
} // namespace

Natural period_limit() noexcept { return g_period_limit.load(std::memory_order_relaxed); }
void set_period_limit(Natural limit) noexcept { g_period_limit.store(limit, std::memory_order_relaxed); }

void check_period(Natural period) {
    if (period > period_limit())
        throw PeriodLimitError("period " + std::to_string(period) + " exceeds limit " +
                               std::to_string(period_limit()));
}

PeriodicSet::PeriodicSet() : period_(1), members_(1) {}

PeriodicSet::PeriodicSet(Natural period, ResidueBitset members) : period_(period), members_(std::move(members)) {
    if (period == 0) throw DomainError("period must be >= 1");
    if (members_.size() != period) throw DomainError("membership vector length must equal the period");
}

PeriodicSet PeriodicSet::all() { return PeriodicSet(1, ResidueBitset(1, true)); }
PeriodicSet PeriodicSet::empty() { return PeriodicSet(); }

PeriodicSet PeriodicSet::from_classes(std::span<const ResidueClass> classes) {
    Natural period = 1;
    for (const auto& c : classes) period = checked_lcm(period, c.m);
    check_period(period);
    ResidueBitset bits(period);
    for (const auto& c : classes)
        for (Natural x = c.r; x < period; x += c.m) bits.set(x);
    return PeriodicSet(period, std::move(bits));
}

PeriodicSet PeriodicSet::from_residues(Natural period, std::span<const Natural> residues) {
    check_period(period);
    ResidueBitset bits(period);
    for (auto r : residues) bits.set(r % period);
    return PeriodicSet(period, std::move(bits));
}

Rational PeriodicSet::density() const {
    return Rational(static_cast<std::int64_t>(members_.count()), static_cast<std::int64_t>(period_));
}

PeriodicSet PeriodicSet::expanded(Natural new_period) const {
    if (new_period == 0 || new_period % period_ != 0)
        throw DomainError("expanded period must be a multiple of the current period");
    if (new_period == period_) return *this;
    check_period(new_period);
    ResidueBitset bits(new_period);
    members_.for_each_set([&](Natural r) {
        for (Natural x = r; x < new_period; x += period_) bits.set(x);
    });
    return PeriodicSet(new_period, std::move(bits));
}

PeriodicSet PeriodicSet::canonical() const {
    // Candidate periods are divisors of L; test them in increasing order.
    for (Natural d = 1; d < period_; ++d) {
        if (period_ % d != 0) continue;
        bool ok = true;
        for (Natural i = d; i < period_ && ok; ++i) ok = members_.test(i) == members_.test(i % d);
        if (ok) return PeriodicSet(d, fold(members_, d));
    }
    return *this;
}

Natural PeriodicSet::first_member() const noexcept {
    if (members_.none()) return 0;
    const Natural r = members_.find_next(1);
    return r < period_ ? r : period_; // residue 0 is first reached at n = L
}

std::string PeriodicSet::to_string() const {
    std::string out = "per(" + std::to_string(period_) + ";{";
    bool first = true;
    members_.for_each_set([&](Natural r) {
        if (!first) out += ',';
        out += std::to_string(r);
        first = false;
    });
    return out + "})";
}

bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
    if (a.period_ == b.period_) return a.members_ == b.members_;
    const PeriodicSet ca = a.canonical();
    const PeriodicSet cb = b.canonical();
    return ca.period_ == cb.period_ && ca.members_ == cb.members_;
}

namespace {
template <class Op>
PeriodicSet combine(const PeriodicSet& a, const PeriodicSet& b, Op op) {
    const Natural period = checked_lcm(a.period(), b.period());
    check_period(period);
    ResidueBitset bits(period);
    for (Natural x = 0; x < period; ++x)
        if (op(a.members().test(x % a.period()), b.members().test(x % b.period()))) bits.set(x);
    return PeriodicSet(period, std::move(bits));
}
} // namespace

PeriodicSet unite(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

PeriodicSet intersect(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

PeriodicSet difference(const PeriodicSet& a, const PeriodicSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
}

PeriodicSet complement(const PeriodicSet& s) {
    ResidueBitset bits = s.members();
    bits.flip();
    return PeriodicSet(s.period(), std::move(bits));
}

PeriodicSet scale_set(Natural a, const PeriodicSet& s) {
    if (a == 0) throw DomainError("scale factor must be >= 1");
    if (a == 1) return s;
    const Natural period = checked_mul(a, s.period());
    check_period(period);
    ResidueBitset bits(period);
    s.members().for_each_set([&](Natural x) { bits.set(a * x); });
    return PeriodicSet(period, std::move(bits));
}

Natural residue_count_periodic(const PeriodicSet& s, Natural m) {
    if (m == 0) throw DomainError("modulus must be >= 1");
    const Natural g = std::gcd(s.period(), m);
    const Natural images = fold(s.members(), g).count();
    return checked_mul(images, m / g);
}

ResidueBitset attained_residues(const PeriodicSet& s, Natural m) {
    if (m == 0) throw DomainError("modulus must be >= 1");
    check_period(m);
    const Natural g = std::gcd(s.period(), m);
    const ResidueBitset images = fold(s.members(), g);
    ResidueBitset out(m);
    images.for_each_set([&](Natural y) {
        for (Natural x = y; x < m; x += g) out.set(x);
    });
    return out;
}

bool is_subset(const PeriodicSet& a, const PeriodicSet& b) { return difference(a, b).is_empty(); }

} // namespace buckdens
