#include "buckdens/structure.hpp"

#include <algorithm>
#include <numeric>

#include "buckdens/parallel.hpp"

namespace buckdens {

// -------------------------------------------------------- ExponentPredicate

ExponentPredicate ExponentPredicate::any() { return ExponentPredicate{}; }

ExponentPredicate ExponentPredicate::at_least(unsigned v) {
    ExponentPredicate e;
    e.threshold_ = v;
    e.below_.assign(v, false);
    e.pattern_ = {true};
    return e;
}

ExponentPredicate ExponentPredicate::parity_from(unsigned v) {
    ExponentPredicate e;
    e.threshold_ = v;
    e.below_.assign(v, false);
    e.pattern_ = {true, false};
    return e;
}

ExponentPredicate ExponentPredicate::from_set(const ExponentSet& E) {
    ExponentPredicate e;
    if (E.is_finite()) {
        const auto& xs = E.elements();
        e.threshold_ = xs.empty() ? 0 : xs.back() + 1;
        e.below_.assign(e.threshold_, false);
        for (unsigned x : xs) e.below_[x] = true;
        e.pattern_ = {false};
    } else {
        e.threshold_ = E.first();
        e.below_.assign(e.threshold_, false);
        e.pattern_.assign(E.step(), false);
        e.pattern_[0] = true;
    }
    e.normalize();
    return e;
}

bool ExponentPredicate::allows(unsigned e) const noexcept {
    if (e < threshold_) return below_[e];
    return pattern_[(e - threshold_) % pattern_.size()];
}

bool ExponentPredicate::is_empty() const noexcept {
    return std::none_of(below_.begin(), below_.end(), [](bool b) { return b; }) &&
           std::none_of(pattern_.begin(), pattern_.end(), [](bool b) { return b; });
}

bool ExponentPredicate::allows_some_at_least(unsigned k) const noexcept {
    const unsigned stop = std::max(k, threshold_) + period();
    for (unsigned e = k; e < stop; ++e)
        if (allows(e)) return true;
    return false;
}

bool ExponentPredicate::eventually_constant() const noexcept {
    return std::all_of(pattern_.begin(), pattern_.end(), [&](bool b) { return b == pattern_[0]; });
}

void ExponentPredicate::normalize() {
    if (eventually_constant()) pattern_.resize(1);
    if (pattern_.size() == 1)
        while (threshold_ > 0 && below_[threshold_ - 1] == pattern_[0]) {
            below_.pop_back();
            --threshold_;
        }
}

ExponentPredicate ExponentPredicate::intersect(const ExponentPredicate& other) const {
    ExponentPredicate out;
    out.threshold_ = std::max(threshold_, other.threshold_);
    out.below_.resize(out.threshold_);
    for (unsigned e = 0; e < out.threshold_; ++e) out.below_[e] = allows(e) && other.allows(e);
    const std::size_t period = std::lcm(pattern_.size(), other.pattern_.size());
    out.pattern_.resize(period);
    for (std::size_t i = 0; i < period; ++i) {
        const unsigned e = out.threshold_ + static_cast<unsigned>(i);
        out.pattern_[i] = allows(e) && other.allows(e);
    }
    out.normalize();
    return out;
}

ExponentPredicate ExponentPredicate::shifted(unsigned s) const {
    if (s == 0) return *this;
    ExponentPredicate out;
    out.threshold_ = threshold_ + s;
    out.below_.assign(out.threshold_, false);
    for (unsigned e = s; e < out.threshold_; ++e) out.below_[e] = allows(e - s);
    out.pattern_ = pattern_;
    out.normalize();
    return out;
}

// ------------------------------------------------------------ form building

namespace {

StructuralTerm periodic_term(PeriodicSet p) {
    StructuralTerm t;
    t.periodic = std::move(p);
    return t;
}

// a = s f^2 with s squarefree.
std::pair<Natural, Natural> squarefree_split(Natural a) {
    Natural s = 1, f = 1;
    for (const auto& [p, e] : factorize(a)) {
        if (e % 2) s *= p;
        f *= checked_pow(p, e / 2);
    }
    return {s, f};
}

ExponentPredicate effective(const StructuralTerm& t, Natural p, const ExponentPredicate* base) {
    ExponentPredicate e = base ? *base : ExponentPredicate::any();
    if (t.square_factor) e = e.intersect(ExponentPredicate::parity_from(detail::valuation_unchecked(*t.square_factor, p)));
    return e;
}

bool trivially_empty(const StructuralTerm& t) {
    if (t.periodic.is_empty()) return true;
    for (const auto& [p, pred] : t.exponents)
        if (effective(t, p, &pred).is_empty()) return true;
    return false;
}

std::optional<StructuralTerm> intersect_terms(const StructuralTerm& a, const StructuralTerm& b) {
    StructuralTerm out;
    out.periodic = intersect(a.periodic, b.periodic);
    if (a.square_factor && b.square_factor) {
        // a s f^2 {k^2} and s' g^2 {k^2} meet only when s = s', in s lcm(f,g)^2 {k^2}.
        const auto [s1, f1] = squarefree_split(*a.square_factor);
        const auto [s2, f2] = squarefree_split(*b.square_factor);
        if (s1 != s2) return std::nullopt;
        const Natural f = checked_lcm(f1, f2);
        out.square_factor = checked_mul(s1, checked_mul(f, f));
    } else {
        out.square_factor = a.square_factor ? a.square_factor : b.square_factor;
    }
    out.exponents = a.exponents;
    for (const auto& [p, pred] : b.exponents) {
        auto it = out.exponents.find(p);
        if (it == out.exponents.end())
            out.exponents.emplace(p, pred);
        else
            it->second = it->second.intersect(pred);
    }
    if (trivially_empty(out)) return std::nullopt;
    return out;
}

StructuralForm intersect_forms(const StructuralForm& a, const StructuralForm& b) {
    StructuralForm out;
    for (const auto& x : a)
        for (const auto& y : b)
            if (auto t = intersect_terms(x, y)) out.push_back(std::move(*t));
    return out;
}

StructuralTerm scale_term(Natural a, const StructuralTerm& t) {
    StructuralTerm out;
    const auto factors = factorize(a);
    if (t.periodic.is_all()) {
        // Keep the term local: divisibility by a becomes v_p >= v_p(a).
        out.periodic = t.periodic;
        out.exponents = t.exponents;
        for (const auto& [p, e] : factors) {
            auto it = out.exponents.find(p);
            if (it == out.exponents.end())
                out.exponents.emplace(p, ExponentPredicate::at_least(e));
            else
                it->second = it->second.shifted(e);
        }
    } else {
        out.periodic = scale_set(a, t.periodic);
        out.exponents = t.exponents;
        for (const auto& [p, e] : factors) {
            auto it = out.exponents.find(p);
            if (it != out.exponents.end()) it->second = it->second.shifted(e);
        }
    }
    if (t.square_factor) out.square_factor = checked_mul(*t.square_factor, a);
    return out;
}

// Merge pure periodic terms into one and drop empty terms.
StructuralForm tidy(StructuralForm form) {
    StructuralForm out;
    std::optional<PeriodicSet> merged;
    for (auto& t : form) {
        if (trivially_empty(t)) continue;
        if (t.is_pure_periodic()) {
            merged = merged ? unite(*merged, t.periodic) : t.periodic;
        } else {
            out.push_back(std::move(t));
        }
    }
    if (merged && !merged->is_empty()) out.insert(out.begin(), periodic_term(std::move(*merged)));
    return out;
}

StructuralTerm valuation_term(const std::vector<ValuationSpec>& factors) {
    StructuralTerm t;
    for (const auto& f : factors) t.exponents.emplace(f.p, ExponentPredicate::from_set(f.exponents));
    return t;
}

StructuralForm form_of(const SetExpr& s) {
    const SetNode& n = s.node();
    switch (n.kind) {
    case SetKind::All: return {StructuralTerm{}};
    case SetKind::Empty: return {};
    case SetKind::Odd: {
        const ResidueClass c(1, 2);
        return tidy({periodic_term(PeriodicSet::from_classes({&c, 1}))});
    }
    case SetKind::AP: return tidy({periodic_term(PeriodicSet::from_classes({&n.progression, 1}))});
    case SetKind::Periodic: return tidy({periodic_term(*n.periodic)});
    case SetKind::Valuation:
    case SetKind::MultiValuation: return tidy({valuation_term(n.valuations)});
    case SetKind::BAlpha: {
        std::vector<ResidueClass> classes;
        for (unsigned k : n.digits->nonzero_indices())
            classes.emplace_back(Natural{1} << (k - 1), Natural{1} << k);
        return tidy({periodic_term(PeriodicSet::from_classes(classes))});
    }
    case SetKind::Squares: {
        StructuralTerm t;
        t.square_factor = 1;
        return {t};
    }
    case SetKind::PtMax:
    case SetKind::RtMax:
    case SetKind::TauDivides:
        throw UnsupportedStructure("'" + s.to_string() + "' has no exact residue structure; use windowed counting");
    case SetKind::PSlice:
        return tidy(intersect_forms(form_of(n.children[0]),
                                    {valuation_term({{n.parameter, ExponentSet::list({1})}})}));
    case SetKind::Scale: {
        StructuralForm out;
        for (const auto& t : form_of(n.children[0])) out.push_back(scale_term(n.parameter, t));
        return tidy(std::move(out));
    }
    case SetKind::Union: {
        StructuralForm out;
        for (const auto& c : n.children) {
            auto f = form_of(c);
            out.insert(out.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
        }
        return tidy(std::move(out));
    }
    case SetKind::Intersect: {
        StructuralForm acc{StructuralTerm{}};
        for (const auto& c : n.children) acc = tidy(intersect_forms(acc, form_of(c)));
        return acc;
    }
    case SetKind::Complement: {
        auto p = to_periodic(form_of(n.children[0]));
        if (!p)
            throw UnsupportedStructure("complement of non-periodic '" + n.children[0].to_string() +
                                       "' has no exact residue structure");
        return tidy({periodic_term(complement(*p))});
    }
    }
    throw UnsupportedStructure("unknown set kind");
}

std::optional<PeriodicSet> term_to_periodic(const StructuralTerm& t) {
    if (t.square_factor) return std::nullopt;
    PeriodicSet out = t.periodic;
    for (const auto& [p, pred] : t.exponents) {
        if (!pred.eventually_constant()) return std::nullopt;
        const unsigned T = pred.threshold();
        const Natural q = checked_pow(p, T);
        check_period(q);
        ResidueBitset bits(q);
        if (pred.allows(T)) bits.set(0); // v_p(n) >= T  <=>  n = 0 mod p^T
        for (Natural z = 1; z < q; ++z)
            if (pred.allows(detail::valuation_unchecked(z, p))) bits.set(z);
        out = intersect(out, PeriodicSet(q, std::move(bits)));
    }
    return out;
}

// Units mod p^c of the form u * w^2, c = 3 for p = 2 and 1 otherwise,
// folded to each precision p^j, j = 1..c (index j - 1).
std::vector<ResidueBitset> square_units(Natural p, Natural unit) {
    const unsigned c = p == 2 ? 3 : 1;
    const Natural pc = checked_pow(p, c);
    ResidueBitset top(pc);
    for (Natural w = 1; w < pc; ++w)
        if (w % p != 0) top.set(static_cast<Natural>((static_cast<unsigned __int128>(unit % pc) * w % pc) * w % pc));
    std::vector<ResidueBitset> out;
    for (unsigned j = 1; j <= c; ++j) {
        const Natural pj = checked_pow(p, j);
        ResidueBitset b(pj);
        top.for_each_set([&](Natural x) { b.set(x % pj); });
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace

StructuralForm structural_form(const SetExpr& s) { return form_of(s); }

std::optional<PeriodicSet> to_periodic(const StructuralForm& form) {
    PeriodicSet out = PeriodicSet::empty();
    for (const auto& t : form) {
        auto p = term_to_periodic(t);
        if (!p) return std::nullopt;
        out = unite(out, *p);
    }
    return out;
}

PeriodicSet periodic_of(const SetExpr& s) {
    auto p = to_periodic(structural_form(s));
    if (!p) throw UnsupportedStructure("'" + s.to_string() + "' is not a finite union of residue classes");
    return *p;
}

ResidueBitset local_attained(Natural p, unsigned k, const ExponentPredicate& exps,
                             std::optional<Natural> square_factor) {
    const Natural q = checked_pow(p, k);
    check_period(q);
    ExponentPredicate E = exps;
    std::vector<ResidueBitset> units;
    if (square_factor) {
        Natural a = *square_factor;
        const unsigned v = detail::valuation_unchecked(a, p);
        for (unsigned i = 0; i < v; ++i) a /= p;
        E = E.intersect(ExponentPredicate::parity_from(v));
        units = square_units(p, a);
    }
    ResidueBitset out(q);
    if (E.allows_some_at_least(k)) out.set(0);
    for (Natural z = 1; z < q; ++z) {
        unsigned e = 0;
        Natural w = z;
        while (w % p == 0) {
            w /= p;
            ++e;
        }
        if (!E.allows(e)) continue;
        if (!units.empty()) {
            const unsigned j = std::min<unsigned>(static_cast<unsigned>(units.size()), k - e);
            if (!units[j - 1].test(w % units[j - 1].size())) continue;
        }
        out.set(z);
    }
    return out;
}

namespace {

struct Coordinate {
    Natural modulus;
    ResidueBitset allowed;
};

// Per-prime-power coordinates of a term modulo M, or nullopt when a constraint
// at a prime not dividing M is unsatisfiable (the term is empty).
std::optional<std::vector<Coordinate>> coordinates(const StructuralTerm& t, Natural M, bool keep_trivial) {
    for (const auto& [p, pred] : t.exponents)
        if (M % p != 0 && effective(t, p, &pred).is_empty()) return std::nullopt;
    std::vector<Coordinate> out;
    for (const auto& [p, k] : factorize(M)) {
        auto it = t.exponents.find(p);
        const ExponentPredicate base = it == t.exponents.end() ? ExponentPredicate::any() : it->second;
        ResidueBitset bits = local_attained(p, k, base, t.square_factor);
        if (keep_trivial || !bits.all()) out.push_back({bits.size(), std::move(bits)});
    }
    return out;
}

void mark_term(const StructuralTerm& t, Natural m, ResidueBitset& out, unsigned threads) {
    const Natural M = checked_lcm(m, t.periodic.period());
    check_period(M);
    const auto coords = coordinates(t, M, false);
    if (!coords) return;
    const bool check_periodic = !t.periodic.is_all();
    const bool project = M != m;
    parallel_for(0, M, threads, [&](Natural lo, Natural hi) {
        for (Natural x = lo; x < hi; ++x) {
            if (check_periodic && !t.periodic.contains(x)) continue;
            bool ok = true;
            for (const auto& c : *coords)
                if (!c.allowed.test(x % c.modulus)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            if (project)
                out.set_atomic(x % m);
            else
                out.set(x);
        }
    });
}

} // namespace

ResidueBitset attained_residues(const StructuralForm& form, Natural m, unsigned threads) {
    if (m == 0) throw DomainError("modulus must be >= 1");
    check_period(m);
    ResidueBitset out(m);
    for (const auto& t : form) {
        if (t.is_pure_periodic()) {
            out |= attained_residues(t.periodic, m);
        } else {
            mark_term(t, m, out, threads);
        }
    }
    return out;
}

Natural residue_count(const StructuralForm& form, Natural m, unsigned threads) {
    if (m == 0) throw DomainError("modulus must be >= 1");
    if (form.empty()) return 0;
    if (form.size() == 1) {
        const StructuralTerm& t = form[0];
        if (t.is_pure_periodic()) return residue_count_periodic(t.periodic, m);
        if (t.is_pure_local()) {
            const auto coords = coordinates(t, m, true);
            if (!coords) return 0;
            Natural count = 1;
            for (const auto& c : *coords) count = checked_mul(count, c.allowed.count());
            return count;
        }
    }
    return attained_residues(form, m, threads).count();
}

bool is_empty_form(const StructuralForm& form) { return residue_count(form, 1) == 0; }

} // namespace buckdens
