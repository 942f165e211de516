#include "buckdens/estimator.hpp"

#include <algorithm>
#include <sstream>

#include "buckdens/parallel.hpp"
#include "buckdens/structure.hpp"

namespace buckdens {

RemainderSystem RemainderSystem::lcm(unsigned max_n) {
    if (max_n == 0 || max_n > 42) throw DomainError("lcm system supports 1 <= N <= 42");
    RemainderSystem s;
    s.kind_ = Kind::Lcm;
    s.max_n_ = max_n;
    Natural b = 1;
    for (unsigned n = 1; n <= max_n; ++n) {
        b = checked_lcm(b, n);
        s.moduli_.push_back(b);
    }
    return s;
}

RemainderSystem RemainderSystem::factorial(unsigned max_n) {
    if (max_n == 0 || max_n > 20) throw DomainError("factorial system supports 1 <= N <= 20");
    RemainderSystem s;
    s.kind_ = Kind::Factorial;
    s.max_n_ = max_n;
    Natural b = 1;
    for (unsigned n = 1; n <= max_n; ++n) {
        b = checked_mul(b, n);
        s.moduli_.push_back(b);
    }
    return s;
}

RemainderSystem RemainderSystem::custom(std::vector<Natural> chain) {
    if (chain.empty()) throw DomainError("custom remainder system needs at least one modulus");
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain[i] == 0) throw DomainError("remainder system moduli must be >= 1");
        if (chain[i] > static_cast<Natural>(INT64_MAX)) throw OverflowError("remainder system modulus too large");
        if (i > 0 && (chain[i] <= chain[i - 1] || chain[i] % chain[i - 1] != 0))
            throw DomainError("custom remainder system must satisfy B_N | B_{N+1} with B_N < B_{N+1}");
    }
    RemainderSystem s;
    s.kind_ = Kind::Custom;
    s.max_n_ = static_cast<unsigned>(chain.size());
    s.moduli_ = std::move(chain);
    return s;
}

RemainderSystem RemainderSystem::parse(const std::string& text) {
    if (text == "lcm") return lcm();
    if (text == "factorial") return factorial();
    if (text.rfind("custom:", 0) == 0) {
        std::vector<Natural> chain;
        std::stringstream ss(text.substr(7));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                chain.push_back(std::stoull(item, &used));
                if (used != item.size()) throw DomainError("bad modulus '" + item + "'");
            } catch (const std::logic_error&) {
                throw DomainError("bad modulus '" + item + "' in custom remainder system");
            }
        }
        return custom(std::move(chain));
    }
    throw DomainError("unknown remainder system '" + text + "' (expected lcm, factorial or custom:b1,b2,...)");
}

Natural RemainderSystem::modulus(unsigned N) const {
    if (N == 0 || N > max_n_) throw DomainError("N=" + std::to_string(N) + " outside the remainder system range");
    return moduli_[N - 1];
}

std::string RemainderSystem::name() const {
    switch (kind_) {
    case Kind::Lcm: return "lcm";
    case Kind::Factorial: return "factorial";
    case Kind::Custom: {
        std::string out = "custom:";
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(moduli_[i]);
        }
        return out;
    }
    }
    return "?";
}

std::string to_string(EstimateMode mode) { return mode == EstimateMode::Exact ? "exact" : "window"; }
std::string to_string(BoundSemantics s) { return s == BoundSemantics::UpperBound ? "upper-bound" : "approximation"; }

Natural default_window(Natural m) {
    constexpr Natural kFloor = 1'000'000;
    if (m > (~Natural{0}) / 64) return ~Natural{0};
    return std::max(kFloor, 64 * m);
}

Natural residue_count_exact(const SetExpr& s, Natural m, unsigned threads) {
    if (!s.has_exact_residues())
        throw UnsupportedStructure("'" + s.to_string() + "' has no exact residue structure; use windowed counting");
    return residue_count(structural_form(s), m, threads);
}

ResidueBitset window_members(const SetExpr& s, Natural window, unsigned threads) {
    check_period(window + 1);
    ResidueBitset members(window + 1);
    parallel_for(0, window + 1, threads, [&](Natural lo, Natural hi) {
        for (Natural n = std::max<Natural>(lo, 1); n < hi; ++n)
            if (s.contains(n)) members.set(n);
    });
    return members;
}

Natural residue_count_of_members(const ResidueBitset& members, Natural m) {
    if (m == 0) throw DomainError("modulus must be >= 1");
    check_period(m);
    ResidueBitset seen(m);
    Natural count = 0;
    members.for_each_set([&](Natural n) {
        const Natural r = n % m;
        if (!seen.test(r)) {
            seen.set(r);
            ++count;
        }
    });
    return count;
}

namespace {
ResidueBitset window_sieve(const SetExpr& s, Natural m, Natural window, unsigned threads) {
    check_period(m);
    ResidueBitset seen(m);
    parallel_for(0, window + 1, threads, [&](Natural lo, Natural hi) {
        for (Natural n = std::max<Natural>(lo, 1); n < hi; ++n)
            if (s.contains(n)) seen.set_atomic(n % m);
    });
    return seen;
}
} // namespace

Natural residue_count_window(const SetExpr& s, Natural m, Natural window, unsigned threads) {
    if (m == 0) throw DomainError("modulus must be >= 1");
    if (window == 0) return 0;
    return window_sieve(s, m, window, threads).count();
}

ResidueBitset sieve_residues(const SetExpr& s, Natural B, EstimateMode mode, Natural window, unsigned threads) {
    if (B == 0) throw DomainError("modulus must be >= 1");
    check_period(B);
    if (mode == EstimateMode::Exact) {
        if (!s.has_exact_residues())
            throw UnsupportedStructure("'" + s.to_string() + "' has no exact residue structure; use window mode");
        return attained_residues(structural_form(s), B, threads);
    }
    return window_sieve(s, B, window == 0 ? default_window(B) : window, threads);
}

DensityReport mu_estimate(const SetExpr& s, const RemainderSystem& system, unsigned n_max, EstimateMode mode,
                          const EstimatorOptions& options) {
    if (n_max == 0 || n_max > system.max_n())
        throw DomainError("N_max=" + std::to_string(n_max) + " outside the remainder system range 1.." +
                          std::to_string(system.max_n()));
    DensityReport report;
    report.set = s.to_string();
    report.system = system.name();
    report.mode = mode;
    auto ratio_of = [](Natural r, Natural b) {
        return Rational(static_cast<std::int64_t>(r), static_cast<std::int64_t>(b));
    };

    if (mode == EstimateMode::Exact) {
        if (!s.has_exact_residues())
            throw UnsupportedStructure("'" + s.to_string() + "' has no exact residue structure; use window mode");
        report.semantics = BoundSemantics::UpperBound;
        const StructuralForm form = structural_form(s);
        for (unsigned n = 1; n <= n_max; ++n) {
            const Natural b = system.modulus(n);
            const Natural r = residue_count(form, b, options.threads);
            report.records.push_back({n, b, r, ratio_of(r, b), true});
        }
    } else {
        report.semantics = BoundSemantics::Approximation;
        report.window = options.window == 0 ? default_window(system.modulus(n_max)) : options.window;
        const ResidueBitset members = window_members(s, report.window, options.threads);
        for (unsigned n = 1; n <= n_max; ++n) {
            const Natural b = system.modulus(n);
            const Natural r = residue_count_of_members(members, b);
            report.records.push_back({n, b, r, ratio_of(r, b), false});
        }
    }
    report.final_ratio = report.records.back().ratio.to_double();
    return report;
}

} // namespace buckdens
