#include "buckdens/cli.hpp"

#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "buckdens/cover_solver.hpp"
#include "buckdens/estimator.hpp"
#include "buckdens/exact_measure.hpp"
#include "buckdens/json_util.hpp"
#include "buckdens/structure.hpp"
#include "buckdens/theorem_checkers.hpp"

namespace buckdens::cli {

using nlohmann::json;

namespace {

constexpr Natural kCheckWindow = 1'000'000;

struct Config {
    std::string expr;
    std::vector<std::string> exprs;
    std::string system = "lcm";
    unsigned max_n = 12;
    std::string mode = "exact";
    Natural window = 0;
    Natural max_modulus = 0;
    Natural period = 0;
    std::string primes;
    std::string format = "json";
    unsigned threads = 0;
    std::uint64_t node_budget = 10'000'000;
    std::string classes;
    std::vector<Natural> moduli;
    std::string balpha;
    std::vector<Natural> scales;
    std::vector<std::string> bounds;
    unsigned n_from = 0;
    unsigned k_max = 0;
    double analytic_tail = 0.0;
    std::string target;
    std::vector<unsigned> ts{0, 1, 2};
    std::vector<Natural> slice_primes{2, 3, 5, 7};
    unsigned s_max = 3;
    double tolerance = kSlack;
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<Natural> parse_naturals(const std::string& text, const char* what) {
    std::vector<Natural> out;
    for (const auto& item : split(text, ',')) {
        std::size_t used = 0;
        try {
            out.push_back(std::stoull(item, &used));
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used != item.size() || item.empty() || item[0] == '-')
            throw UsageError(std::string("bad ") + what + " '" + item + "'");
    }
    return out;
}

// Splits "1+(2),4+(8)" at the commas between classes.
std::vector<ResidueClass> parse_classes(const std::string& text) {
    std::vector<ResidueClass> out;
    std::string current;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(ResidueClass::parse(current));
            current.clear();
        } else if (c != ' ') {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(ResidueClass::parse(current));
    return out;
}

EstimateMode parse_mode(const std::string& mode) {
    if (mode == "exact") return EstimateMode::Exact;
    if (mode == "window") return EstimateMode::Window;
    throw UsageError("unknown mode '" + mode + "' (expected exact or window)");
}

PrimeList prime_list(const std::string& text) {
    if (text.empty() || text == "default") return PrimeList::standard();
    return PrimeList::of(parse_naturals(text, "prime"));
}

DyadicDigits parse_digits(const std::string& text) {
    const SetExpr e = SetExpr::parse("balpha(" + text + ")");
    return *e.node().digits;
}

json certificate_json(const CoverCertificate& c) {
    json classes = json::array();
    for (const auto& cls : c.classes) classes.push_back(cls.to_string());
    return {{"classes", classes},  {"weight", to_json(c.weight)}, {"status", to_string(c.status)},
            {"optimal", c.optimal}, {"label", c.label},             {"max_modulus", c.max_modulus},
            {"window", c.window}};
}

json density_json(const DensityReport& r) {
    json records = json::array();
    for (const auto& rec : r.records)
        records.push_back({{"N", rec.n}, {"B_N", rec.modulus}, {"R", rec.residues}, {"ratio", to_json(rec.ratio)},
                           {"exact", rec.exact}});
    return {{"set", r.set},
            {"system", r.system},
            {"mode", to_string(r.mode)},
            {"window", r.window},
            {"records", records},
            {"final", real_json(r.final_ratio)},
            {"bound_semantics", to_string(r.semantics)}};
}

json check_json(const CheckReport& r) {
    return {{"check", r.check},       {"verdict", to_string(r.verdict)}, {"evidence", r.evidence},
            {"counterexample", r.counterexample}, {"window", r.window}, {"n_from", r.n_from},
            {"n_max", r.n_max}};
}

class Runner {
public:
    Runner(const Config& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    int measure() {
        const SetExpr s = SetExpr::parse(cfg_.expr);
        const MeasureResult m = exact_measure(s);
        json j = {{"set", s.to_string()}, {"value", to_json(m.value)}, {"tail_bound", real_json(m.tail_bound)},
                  {"exact", m.exact()}};
        if (!m.caveat.empty()) j["caveat"] = m.caveat;
        if (text()) {
            out_ << s.to_string() << ": " << m.value.to_string();
            if (!m.exact()) out_ << " (tail bound " << real12(m.tail_bound) << ")";
            out_ << '\n';
        } else {
            require_json();
            emit(j);
        }
        return 0;
    }

    int estimate(bool tabulate) {
        const SetExpr s = SetExpr::parse(cfg_.expr);
        const RemainderSystem sys = RemainderSystem::parse(cfg_.system);
        const DensityReport r = mu_estimate(s, sys, cfg_.max_n, parse_mode(cfg_.mode), {cfg_.threads, cfg_.window});
        if (tabulate || cfg_.format == "csv") {
            out_ << "N,B_N,R,ratio\n";
            for (const auto& rec : r.records)
                out_ << rec.n << ',' << rec.modulus << ',' << rec.residues << ','
                     << json(real12(rec.ratio.to_double())).dump() << '\n';
        } else if (text()) {
            for (const auto& rec : r.records)
                out_ << "N=" << rec.n << " B_N=" << rec.modulus << " R=" << rec.residues << " ratio="
                     << rec.ratio.to_string() << '\n';
            out_ << "final " << real12(r.final_ratio) << " (" << to_string(r.semantics) << ")\n";
        } else {
            emit(density_json(r));
        }
        return 0;
    }

    int cover() {
        if (cfg_.max_modulus == 0) throw UsageError("cover requires --max-modulus");
        const SetExpr s = SetExpr::parse(cfg_.expr);
        const PeriodicSet target = periodic_target(s);
        const InfimumCover c = infimum_cover(target, cfg_.max_modulus, cfg_.node_budget);
        json j = {{"set", s.to_string()},
                  {"period", target.period()},
                  {"value", to_json(c.value)},
                  {"certificate", certificate_json(c.certificate)},
                  {"nodes", c.stats.nodes},
                  {"budget_exhausted", c.stats.budget_exhausted},
                  {"period_limited", c.stats.period_limited}};
        if (text()) {
            out_ << c.value.to_string() << ' ' << certificate_json(c.certificate)["classes"].dump() << " ("
                 << c.certificate.label << (c.certificate.optimal ? "" : ", not proved optimal") << ")\n";
        } else {
            require_json();
            emit(j);
        }
        return 0;
    }

    int verify() {
        const SetExpr s = SetExpr::parse(cfg_.expr);
        const std::vector<ResidueClass> classes = parse_classes(cfg_.classes);
        const Natural window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        const CoverVerification v = verify_cover(s, classes, window);
        json cls = json::array();
        for (const auto& c : classes) cls.push_back(c.to_string());
        json j = {{"set", s.to_string()},
                  {"classes", cls},
                  {"weight", to_json(cover_weight(classes))},
                  {"status", to_string(v.status)},
                  {"window", v.window},
                  {"counterexample", v.counterexample == 0 ? json(nullptr) : json(v.counterexample)}};
        if (v.modulus != 0) j["modulus"] = v.modulus;
        if (v.status == CoverStatus::Failed && v.modulus != 0) j["uncovered_residue"] = v.residue;
        if (text()) {
            out_ << to_string(v.status);
            if (v.counterexample) out_ << " counterexample " << v.counterexample;
            out_ << '\n';
        } else {
            require_json();
            emit(j);
        }
        return v.status == CoverStatus::Failed ? 1 : 0;
    }

    int greedy() {
        const SetExpr s = SetExpr::parse(cfg_.expr);
        const Natural window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        const CoverCertificate c = greedy_cover(s, cfg_.moduli, window);
        require_json_or_text();
        if (text())
            out_ << c.weight.to_string() << ' ' << certificate_json(c)["classes"].dump() << '\n';
        else
            emit({{"set", s.to_string()}, {"certificate", certificate_json(c)}});
        return 0;
    }

    int niven() {
        const SetExpr s = SetExpr::parse(cfg_.expr);
        const std::vector<Natural> primes = cfg_.primes.empty() ? primes_up_to(100) : prime_list(cfg_.primes).primes;
        NivenOptions opt;
        opt.tolerance = cfg_.tolerance;
        opt.window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        opt.threads = cfg_.threads;
        return report(niven_check(s, primes, RemainderSystem::parse(cfg_.system), cfg_.max_n, opt));
    }

    int sigma() {
        const RemainderSystem sys = RemainderSystem::parse(cfg_.system);
        const Natural window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        std::vector<SetExpr> parts;
        for (const auto& e : cfg_.exprs) parts.push_back(SetExpr::parse(e));

        if (!cfg_.balpha.empty()) {
            if (!parts.empty() || !cfg_.scales.empty())
                throw UsageError("--balpha builds its own parts; do not combine it with part expressions or --scales");
            const DyadicDigits digits = parse_digits(cfg_.balpha);
            SigmaOptions opt;
            opt.k_max = cfg_.k_max;
            opt.analytic_tail = digits.tail_bound();
            opt.target = digits.alpha();
            opt.window = window;
            opt.threads = cfg_.threads;
            const std::vector<SetExpr> pieces = balpha_parts(digits);
            if (pieces.empty()) throw UsageError("alpha has no nonzero digit among the first K");
            const CheckReport weak = weak_sigma_check(pieces, sys, cfg_.max_n, opt);
            ScaledUnionSpec spec;
            for (unsigned n : digits.nonzero_indices()) {
                spec.scales.push_back(Natural{1} << (n - 1));
                spec.parts.push_back(SetExpr::odd());
            }
            spec.truncated_tail = digits.tail_bound();
            const CheckReport scaled = scaled_union_check(spec, sys, cfg_.max_n, window, cfg_.threads);
            const Verdict v = worst(weak.verdict, scaled.verdict);
            json j = {{"check", "balpha-decomposition"},
                      {"alpha", to_json(digits.alpha())},
                      {"digits", digits.to_string()},
                      {"verdict", to_string(v)},
                      {"weak_sigma", check_json(weak)},
                      {"scaled_union", check_json(scaled)}};
            if (text())
                out_ << "weak-sigma: " << to_string(weak.verdict) << "\nscaled-union: " << to_string(scaled.verdict)
                     << '\n';
            else {
                require_json();
                emit(j);
            }
            return exit_code(v);
        }

        if (parts.empty()) throw UsageError("check-sigma needs part expressions or --balpha");
        if (!cfg_.scales.empty()) {
            ScaledUnionSpec spec;
            spec.scales = cfg_.scales;
            spec.parts = parts;
            spec.truncated_tail = cfg_.analytic_tail;
            return report(scaled_union_check(spec, sys, cfg_.max_n, window, cfg_.threads));
        }
        SigmaOptions opt;
        opt.k_max = cfg_.k_max;
        opt.analytic_tail = cfg_.analytic_tail;
        if (!cfg_.target.empty()) opt.target = Rational::parse(cfg_.target);
        opt.window = window;
        opt.threads = cfg_.threads;
        return report(weak_sigma_check(parts, sys, cfg_.max_n, opt));
    }

    int alexander() {
        AlexanderSpec spec;
        for (const auto& e : cfg_.exprs) spec.parts.push_back(SetExpr::parse(e));
        if (!cfg_.balpha.empty()) {
            if (!spec.parts.empty()) throw UsageError("--balpha builds its own parts");
            const DyadicDigits digits = parse_digits(cfg_.balpha);
            spec.parts = balpha_parts(digits);
            for (unsigned n : digits.nonzero_indices())
                spec.bounds.push_back(Rational(1, static_cast<std::int64_t>(Natural{1} << n)));
        }
        if (!cfg_.bounds.empty()) {
            spec.bounds.clear();
            for (const auto& b : cfg_.bounds) spec.bounds.push_back(Rational::parse(b));
        }
        if (spec.parts.empty()) throw UsageError("check-alexander needs part expressions or --balpha");
        if (spec.bounds.size() != spec.parts.size())
            throw UsageError("check-alexander needs one bound per part (--bounds c1,c2,...)");
        spec.n_from = cfg_.n_from;
        return report(alexander_check(spec, RemainderSystem::parse(cfg_.system), cfg_.max_n, cfg_.threads));
    }

    int rt() {
        const Natural window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        return report(rt_inclusion_check(cfg_.ts, cfg_.slice_primes, prime_list(cfg_.primes), window, cfg_.threads));
    }

    int taudiv() {
        const Natural window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        return report(
            taudiv_bound_report(cfg_.s_max, RemainderSystem::parse(cfg_.system), cfg_.max_n, window, cfg_.threads));
    }

private:
    bool text() const { return cfg_.format == "text"; }

    void require_json() const {
        if (cfg_.format == "csv") throw UsageError("csv output is available for estimate and tabulate only");
    }
    void require_json_or_text() const { require_json(); }

    void emit(const json& j) { out_ << j.dump(2) << '\n'; }

    static Verdict worst(Verdict a, Verdict b) {
        if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
        if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
        return Verdict::Pass;
    }

    static int exit_code(Verdict v) { return v == Verdict::Fail ? 1 : 0; }

    int report(const CheckReport& r) {
        if (text()) {
            out_ << r.check << ": " << to_string(r.verdict) << '\n';
            if (!r.counterexample.is_null()) out_ << "counterexample: " << r.counterexample.dump() << '\n';
        } else {
            require_json();
            emit(check_json(r));
        }
        return exit_code(r.verdict);
    }

    // The set as one period. A declared --period must be a multiple of the
    // structural period; sets without periodic structure are read off
    // membership and the declared period is checked on the window.
    PeriodicSet periodic_target(const SetExpr& s) const {
        if (s.is_periodic()) {
            const PeriodicSet p = periodic_of(s).canonical();
            if (cfg_.period == 0) return p;
            if (cfg_.period % p.period() != 0)
                throw UsageError("--period " + std::to_string(cfg_.period) + " is not a multiple of the set's period " +
                                 std::to_string(p.period()));
            return p.expanded(cfg_.period);
        }
        if (cfg_.period == 0) throw UsageError("'" + s.to_string() + "' is not periodic; declare --period");
        check_period(cfg_.period);
        ResidueBitset bits(cfg_.period);
        for (Natural r = 0; r < cfg_.period; ++r)
            if (s.contains(r == 0 ? cfg_.period : r)) bits.set(r);
        const PeriodicSet p(cfg_.period, std::move(bits));
        const Natural window = cfg_.window == 0 ? kCheckWindow : cfg_.window;
        for (Natural n = 1; n <= window; ++n)
            if (s.contains(n) != p.contains(n))
                throw UsageError("'" + s.to_string() + "' is not periodic with period " + std::to_string(cfg_.period) +
                                 " (n = " + std::to_string(n) + ")");
        return p;
    }

    const Config& cfg_;
    std::ostream& out_;
};

void add_format(CLI::App* sub, Config& cfg) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->envname("BUCKDENS_FORMAT")
        ->capture_default_str();
}

void add_threads(CLI::App* sub, Config& cfg) {
    sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->envname("BUCKDENS_THREADS");
}

void add_system(CLI::App* sub, Config& cfg) {
    sub->add_option("--system", cfg.system, "Remainder system: lcm, factorial or custom:b1,b2,...")
        ->envname("BUCKDENS_SYSTEM")
        ->capture_default_str();
    sub->add_option("--max-n", cfg.max_n, "Largest N of the remainder system")
        ->envname("BUCKDENS_MAX_N")
        ->capture_default_str();
}

void add_window(CLI::App* sub, Config& cfg) {
    sub->add_option("--window", cfg.window, "Scan window W (0: command default)")->envname("BUCKDENS_WINDOW");
}

void add_primes(CLI::App* sub, Config& cfg) {
    sub->add_option("--primes", cfg.primes, "Prime list p1,p2,... or 'default' (primes <= 10^4)")
        ->envname("BUCKDENS_PRIMES");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Buck measure density toolkit", "buckdens"};
    app.require_subcommand(1);

    auto* measure = app.add_subcommand("measure", "Exact measure of a constructed set");
    measure->add_option("expr", cfg.expr, "Set expression")->required();
    add_format(measure, cfg);

    auto* estimate = app.add_subcommand("estimate", "R(S:B_N)/B_N along a remainder system");
    auto* tabulate = app.add_subcommand("tabulate", "CSV of N, B_N, R, ratio");
    for (auto* sub : {estimate, tabulate}) {
        sub->add_option("expr", cfg.expr, "Set expression")->required();
        add_system(sub, cfg);
        sub->add_option("--mode", cfg.mode, "exact or window")
            ->check(CLI::IsMember({"exact", "window"}))
            ->envname("BUCKDENS_MODE")
            ->capture_default_str();
        add_window(sub, cfg);
        add_threads(sub, cfg);
        add_format(sub, cfg);
    }

    auto* cover = app.add_subcommand("cover", "Minimum-weight residue-class cover of a periodic set");
    cover->add_option("expr", cfg.expr, "Set expression")->required();
    cover->add_option("--max-modulus", cfg.max_modulus, "Largest modulus allowed in the cover")
        ->envname("BUCKDENS_MAX_MODULUS");
    cover->add_option("--period", cfg.period, "Declared period of the set");
    cover->add_option("--node-budget", cfg.node_budget, "Search-node budget")
        ->envname("BUCKDENS_NODE_BUDGET")
        ->capture_default_str();
    add_window(cover, cfg);
    add_format(cover, cfg);

    auto* greedy = app.add_subcommand("greedy-cover", "Greedy cover of window members by given moduli");
    greedy->add_option("expr", cfg.expr, "Set expression")->required();
    greedy->add_option("--moduli", cfg.moduli, "Candidate moduli")->delimiter(',')->required();
    add_window(greedy, cfg);
    add_format(greedy, cfg);

    auto* verify = app.add_subcommand("verify-cover", "Check that residue classes cover a set");
    verify->add_option("expr", cfg.expr, "Set expression")->required();
    verify->add_option("--classes", cfg.classes, "Classes r+(m), comma separated")->required();
    add_window(verify, cfg);
    add_format(verify, cfg);

    auto* niven = app.add_subcommand("niven", "Estimate the p-slices of a set");
    niven->add_option("expr", cfg.expr, "Set expression")->required();
    add_primes(niven, cfg);
    add_system(niven, cfg);
    add_window(niven, cfg);
    add_threads(niven, cfg);
    niven->add_option("--tolerance", cfg.tolerance, "Largest slice estimate counted as zero");
    add_format(niven, cfg);

    auto* sigma = app.add_subcommand("check-sigma", "Countable additivity / scaled-union check");
    sigma->add_option("parts", cfg.exprs, "Part expressions");
    sigma->add_option("--balpha", cfg.balpha, "Use the parts of B_alpha, e.g. 5/8,3 or 101,3");
    sigma->add_option("--scales", cfg.scales, "Scales b1,b2,... (scaled-union check)")->delimiter(',');
    sigma->add_option("--k-max", cfg.k_max, "Tail unions reported for K = 1..k-max");
    sigma->add_option("--analytic-tail", cfg.analytic_tail, "Bound on the measure of omitted parts");
    sigma->add_option("--target", cfg.target, "Expected measure p/q of the union");
    add_system(sigma, cfg);
    add_window(sigma, cfg);
    add_threads(sigma, cfg);
    add_format(sigma, cfg);

    auto* alex = app.add_subcommand("check-alexander", "R(A_n:B_N)/B_N <= c_n");
    alex->add_option("parts", cfg.exprs, "Part expressions");
    alex->add_option("--balpha", cfg.balpha, "Use the parts of B_alpha with c_k = 2^-n_k");
    alex->add_option("--bounds", cfg.bounds, "Bounds c1,c2,... as p/q")->delimiter(',');
    alex->add_option("--n-from", cfg.n_from, "First N checked (default: only N = max-n)");
    add_system(alex, cfg);
    add_threads(alex, cfg);
    add_format(alex, cfg);

    auto* rt = app.add_subcommand("check-rt", "Slice inclusions (R_t)_p in p R_(t-1)");
    rt->add_option("--t", cfg.ts, "Values of t")->delimiter(',')->capture_default_str();
    rt->add_option("--slice-primes", cfg.slice_primes, "Slice primes")->delimiter(',')->capture_default_str();
    add_primes(rt, cfg);
    add_window(rt, cfg);
    add_threads(rt, cfg);
    add_format(rt, cfg);

    auto* taudiv = app.add_subcommand("check-taudiv", "tau(n)|n cover bound 2^-(s+1)");
    taudiv->add_option("--s-max", cfg.s_max, "Largest s")->capture_default_str();
    add_system(taudiv, cfg);
    add_window(taudiv, cfg);
    add_threads(taudiv, cfg);
    add_format(taudiv, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Runner runner(cfg, out);
    try {
        if (*measure) return runner.measure();
        if (*estimate) return runner.estimate(false);
        if (*tabulate) return runner.estimate(true);
        if (*cover) return runner.cover();
        if (*greedy) return runner.greedy();
        if (*verify) return runner.verify();
        if (*niven) return runner.niven();
        if (*sigma) return runner.sigma();
        if (*alex) return runner.alexander();
        if (*rt) return runner.rt();
        if (*taudiv) return runner.taudiv();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace buckdens::cli
