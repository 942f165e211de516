#include "buckdens/cover_solver.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "buckdens/structure.hpp"

namespace buckdens {

std::string to_string(CoverStatus status) {
    switch (status) {
    case CoverStatus::Proved: return "proved";
    case CoverStatus::WindowChecked: return "window-checked";
    case CoverStatus::Failed: return "fail";
    }
    return "?";
}

Rational cover_weight(const std::vector<ResidueClass>& classes) {
    Rational w(0);
    for (const auto& c : classes) w += Rational(1, static_cast<std::int64_t>(c.m));
    return w;
}

namespace {

PeriodicSet single_class(Natural r, Natural m) {
    const ResidueClass c{r % m, m};
    return PeriodicSet::from_classes(std::span<const ResidueClass>(&c, 1));
}

// Number of members z of u with z = x (mod g), for g | period.
Natural count_congruent(const PeriodicSet& u, Natural x, Natural g) {
    Natural cnt = 0;
    for (Natural z = x % g; z < u.period(); z += g)
        if (u.members().test(z)) ++cnt;
    return cnt;
}

struct Candidate {
    ResidueClass cls;
    Natural covered = 0;  // members of u in the class, per period of u
    Natural g = 1;        // gcd(period, m)
};

// Classes of modulus <= M through x, most useful fraction first.
std::vector<Candidate> candidates_through(const PeriodicSet& u, Natural x, Natural max_modulus) {
    const Natural P = u.period();
    std::vector<Candidate> out;
    std::map<Natural, Natural> by_g;
    for (Natural m = 1; m <= max_modulus; ++m) {
        const Natural g = std::gcd(P, m);
        auto it = by_g.find(g);
        if (it == by_g.end()) it = by_g.emplace(g, count_congruent(u, x, g)).first;
        out.push_back({ResidueClass{x % m, m}, it->second, g});
    }
    // useful fraction of the class is covered * g / P
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        const unsigned __int128 fa = static_cast<unsigned __int128>(a.covered) * a.g;
        const unsigned __int128 fb = static_cast<unsigned __int128>(b.covered) * b.g;
        if (fa != fb) return fa > fb;
        if (a.cls.m != b.cls.m) return a.cls.m < b.cls.m;
        return a.cls.r < b.cls.r;
    });
    return out;
}

// Each member y pays at least min over usable classes through y of
// (class weight) / (members of u it covers); summed, this bounds any cover.
double element_bound(const PeriodicSet& u, Natural max_modulus) {
    const Natural P = u.period();
    std::vector<Natural> gs;
    for (Natural m = 1; m <= max_modulus; ++m) gs.push_back(std::gcd(P, m));
    std::sort(gs.begin(), gs.end());
    gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
    std::vector<std::vector<Natural>> counts;
    for (Natural g : gs) {
        std::vector<Natural> c(g, 0);
        u.members().for_each_set([&](Natural z) { ++c[z % g]; });
        counts.push_back(std::move(c));
    }
    double total = 0.0;
    u.members().for_each_set([&](Natural z) {
        double best = 1e300;
        for (std::size_t i = 0; i < gs.size(); ++i)
            best = std::min(best, 1.0 / (static_cast<double>(gs[i]) * static_cast<double>(counts[i][z % gs[i]])));
        total += best;
    });
    return total;
}

class Search {
public:
    Search(Natural max_modulus, std::uint64_t budget) : max_modulus_(max_modulus), budget_(budget) {}

    void seed(std::vector<ResidueClass> classes) {
        best_classes_ = std::move(classes);
        best_ = cover_weight(best_classes_);
    }

    void run(const PeriodicSet& u, const Rational& weight) {
        if (stats.nodes >= budget_) {
            stats.budget_exhausted = true;
            return;
        }
        ++stats.nodes;
        if (u.is_empty()) {
            if (weight < best_) {
                best_ = weight;
                best_classes_ = chosen_;
            }
            return;
        }
        if (weight + u.density() >= best_) return;
        constexpr Natural kElementBoundPeriod = Natural{1} << 16;
        if (u.period() <= kElementBoundPeriod &&
            weight.to_double() + element_bound(u, max_modulus_) - 1e-11 >= best_.to_double())
            return;

        const Natural x = u.first_member();
        for (const Candidate& c : candidates_through(u, x, max_modulus_)) {
            const Rational w = weight + Rational(1, static_cast<std::int64_t>(c.cls.m));
            if (w >= best_) continue;
            const Natural period = checked_lcm(u.period(), c.cls.m);
            if (period > period_limit()) {
                stats.period_limited = true;
                continue;
            }
            chosen_.push_back(c.cls);
            run(difference(u, single_class(c.cls.r, c.cls.m)).canonical(), w);
            chosen_.pop_back();
            if (stats.budget_exhausted) return;
        }
    }

    const Rational& best() const noexcept { return best_; }
    const std::vector<ResidueClass>& best_classes() const noexcept { return best_classes_; }

    CoverSearchStats stats;

private:
    Natural max_modulus_;
    std::uint64_t budget_;
    Rational best_;
    std::vector<ResidueClass> best_classes_;
    std::vector<ResidueClass> chosen_;
};

// Repeatedly covers the smallest uncovered member, preferring a class of
// modulus dividing the current period that lies inside the uncovered set.
std::vector<ResidueClass> greedy_incumbent(PeriodicSet u, Natural max_modulus) {
    std::vector<ResidueClass> out;
    while (!u.is_empty()) {
        const Natural x = u.first_member();
        std::optional<ResidueClass> pick;
        for (Natural m = 1; m <= max_modulus && !pick; ++m) {
            if (u.period() % m != 0) continue;
            if (count_congruent(u, x, m) == u.period() / m) pick = ResidueClass{x % m, m};
        }
        if (!pick) {
            for (const Candidate& c : candidates_through(u, x, max_modulus)) {
                if (checked_lcm(u.period(), c.cls.m) <= period_limit()) {
                    pick = c.cls;
                    break;
                }
            }
        }
        if (!pick) pick = ResidueClass{0, 1};
        out.push_back(*pick);
        u = difference(u, single_class(pick->r, pick->m)).canonical();
    }
    return out;
}

} // namespace

InfimumCover infimum_cover(const PeriodicSet& s, Natural max_modulus, std::uint64_t node_budget) {
    if (max_modulus == 0) throw DomainError("maximum modulus must be >= 1");
    const PeriodicSet target = s.canonical();
    Search search(max_modulus, node_budget);
    search.seed(greedy_incumbent(target, max_modulus));
    search.run(target, Rational(0));

    InfimumCover out;
    out.stats = search.stats;
    out.value = search.best();
    CoverCertificate& cert = out.certificate;
    cert.classes = search.best_classes();
    std::sort(cert.classes.begin(), cert.classes.end());
    cert.weight = cover_weight(cert.classes);
    cert.optimal = !out.stats.budget_exhausted && !out.stats.period_limited;
    cert.max_modulus = max_modulus;
    cert.label = "infimum restricted to moduli <= " + std::to_string(max_modulus);
    const CoverVerification v = verify_cover(SetExpr::periodic(target), cert.classes);
    cert.status = v.status;
    return out;
}

CoverCertificate greedy_cover(const SetExpr& s, const std::vector<Natural>& moduli, Natural window) {
    CoverCertificate cert;
    cert.status = CoverStatus::WindowChecked;
    cert.window = window;
    cert.label = "greedy cover of members <= " + std::to_string(window);
    cert.optimal = false;
    if (!moduli.empty()) cert.max_modulus = *std::max_element(moduli.begin(), moduli.end());
    std::vector<Natural> mods;
    for (Natural m : moduli) {
        if (m == 0) throw DomainError("cover moduli must be >= 1");
        check_period(m);
        mods.push_back(m);
    }
    std::sort(mods.begin(), mods.end());
    mods.erase(std::unique(mods.begin(), mods.end()), mods.end());

    std::vector<Natural> members;
    for (Natural n = 1; n <= window; ++n)
        if (s.contains(n)) members.push_back(n);
    if (members.empty()) return cert;
    if (mods.empty()) {
        cert.classes = {ResidueClass{0, 1}};
        cert.weight = Rational(1);
        return cert;
    }

    // counts[i][r]: uncovered members = r (mod mods[i])
    std::vector<std::vector<Natural>> counts;
    for (Natural m : mods) {
        std::vector<Natural> c(m, 0);
        for (Natural n : members) ++c[n % m];
        counts.push_back(std::move(c));
    }
    std::vector<bool> covered(members.size(), false);
    std::size_t remaining = members.size();
    while (remaining > 0) {
        std::size_t bi = 0;
        Natural br = 0;
        unsigned __int128 score = 0;
        for (std::size_t i = 0; i < mods.size(); ++i)
            for (Natural r = 0; r < mods[i]; ++r) {
                const unsigned __int128 sc = static_cast<unsigned __int128>(counts[i][r]) * mods[i];
                if (sc > score) {
                    score = sc;
                    bi = i;
                    br = r;
                }
            }
        const ResidueClass cls{br, mods[bi]};
        cert.classes.push_back(cls);
        for (std::size_t k = 0; k < members.size(); ++k) {
            if (covered[k] || !cls.contains(members[k])) continue;
            covered[k] = true;
            --remaining;
            for (std::size_t i = 0; i < mods.size(); ++i) --counts[i][members[k] % mods[i]];
        }
    }
    std::sort(cert.classes.begin(), cert.classes.end());
    cert.weight = cover_weight(cert.classes);
    return cert;
}

CoverVerification verify_cover(const SetExpr& s, const std::vector<ResidueClass>& classes, Natural window) {
    CoverVerification out;
    auto covered = [&](Natural n) {
        return std::any_of(classes.begin(), classes.end(), [n](const ResidueClass& c) { return c.contains(n); });
    };

    if (s.has_exact_residues()) {
        std::optional<Natural> modulus = Natural{1};
        try {
            for (const auto& c : classes) *modulus = checked_lcm(*modulus, c.m);
            if (*modulus > period_limit()) modulus.reset();
        } catch (const OverflowError&) {
            modulus.reset();
        }
        if (modulus) {
            const Natural Q = *modulus;
            out.modulus = Q;
            ResidueBitset cover_bits(Q);
            for (const auto& c : classes)
                for (Natural r = c.r % c.m; r < Q; r += c.m) cover_bits.set(r);
            ResidueBitset attained = attained_residues(structural_form(s), Q);
            cover_bits.flip();
            attained &= cover_bits;
            if (attained.none()) {
                out.status = CoverStatus::Proved;
                return out;
            }
            out.status = CoverStatus::Failed;
            out.residue = attained.find_next(0);
            // some member is congruent to the residue; look for the smallest reachable one
            const Natural limit = std::max<Natural>(window, 64 * Q);
            for (Natural n = out.residue == 0 ? Q : out.residue; n <= limit; n += Q)
                if (s.contains(n)) {
                    out.counterexample = n;
                    break;
                }
            out.window = limit;
            return out;
        }
    }

    out.window = window;
    for (Natural n = 1; n <= window; ++n) {
        if (s.contains(n) && !covered(n)) {
            out.status = CoverStatus::Failed;
            out.counterexample = n;
            return out;
        }
    }
    out.status = CoverStatus::WindowChecked;
    return out;
}

} // namespace buckdens
