#include "chaoslab/cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <type_traits>

#include "CLI11.hpp"

#include "chaoslab/errors.hpp"
#include "chaoslab/io.hpp"

namespace chaoslab::cli {

namespace {

using io::json;

struct Globals {
    std::string system_path;
    std::string law_path;
    std::string out_path;
    std::string csv_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::uint64_t> budget;
    bool json_stdout = false;
};

/// Partial results were produced but a budget stopped the computation.
struct BudgetHit {
    bool hit = false;
    void mark(bool b) { hit = hit || b; }
};

class Stopwatch {
public:
    explicit Stopwatch(json& timings) : timings_(timings) {}
    template <typename Fn>
    auto time(const std::string& name, Fn&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(name, t0);
        } else {
            auto result = fn();
            record(name, t0);
            return result;
        }
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point t0) {
        timings_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    json& timings_;
};

Vector parse_vector(const std::string& text, std::size_t dim) {
    Vector v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput("--x0: '" + item + "' is not a number");
        }
    }
    if (v.size() != dim)
        throw InvalidInput("--x0 needs " + std::to_string(dim) + " comma-separated values, got " +
                           std::to_string(v.size()));
    return v;
}

MatrixSystem need_system(const Globals& g) {
    if (g.system_path.empty()) throw InvalidInput("--system PATH is required for this command");
    return io::load_system(g.system_path);
}

SwitchingLaw need_law(const Globals& g) {
    if (g.law_path.empty()) throw InvalidInput("--law PATH is required for this command");
    return io::load_law(g.law_path);
}

json certificate_section(const MatrixSystem& sys, const Construction& c, std::size_t k_max, Stopwatch& sw) {
    json section;
    section["certificate"] = io::to_json(c.certificate);
    section["verification"] = sw.time("verifyCertificate", [&] { return io::to_json(verify_certificate(sys, c.certificate)); });
    section["law"] = io::law_to_json(c.law);
    if (k_max > 0 && !c.certificate.crossings.empty()) {
        const std::uint64_t horizon = c.certificate.crossings.back().time_above;
        section["crossingTable"] = sw.time("chaosScan", [&] { return io::to_json(chaos_scan(sys, c.law, k_max, horizon)); });
    }
    return section;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"chaoslab: chaos and stability analysis of switched linear systems"};
    app.name("chaoslab");
    app.require_subcommand(1);
    Globals g;
    app.add_option("--system", g.system_path, "System description (JSON file)");
    app.add_option("--law", g.law_path, "Switching law description (JSON file)");
    app.add_option("--out", g.out_path, "Write the JSON report to this path");
    app.add_option("--csv", g.csv_path, "Write the command's data series as CSV to this path");
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--tol", g.tol, "Tolerance for strict inequalities");
    app.add_option("--budget", g.budget, "Node / horizon budget for the command");
    app.add_flag("--json", g.json_stdout, "Also print the report to stdout when --out is given");

    std::string command;
    json params = json::object();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Witness search, certificate, stability, JSR and irreducibility");
    std::size_t a_max_len = 12, a_stab_len = 10, a_kmax = 2;
    double a_gap = 1e-3;
    analyze->add_option("--max-len", a_max_len, "Word search length")->capture_default_str();
    analyze->add_option("--stability-len", a_stab_len, "Periodic stability length")->capture_default_str();
    analyze->add_option("--kmax", a_kmax, "Certificate length")->capture_default_str();
    analyze->add_option("--gap", a_gap, "JSR target gap")->capture_default_str();

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory under a law");
    std::string s_x0;
    std::uint64_t s_n = 10'000;
    std::size_t s_kmax = 4;
    simulate_cmd->add_option("--x0", s_x0, "Initial state, comma separated (default e1)");
    simulate_cmd->add_option("--n", s_n, "Horizon")->capture_default_str();
    simulate_cmd->add_option("--kmax", s_kmax, "Thresholds for the orbit crossing table")->capture_default_str();

    // construct
    auto* construct = app.add_subcommand("construct", "Greedy chaotic law with certificate");
    std::optional<std::string> c_i, c_j;
    std::string c_prefix;
    std::size_t c_kmax = 5, c_max_len = 12;
    std::string c_law_out;
    construct->add_option("--i", c_i, "Contracting word, e.g. 1 or 1,2");
    construct->add_option("--j", c_j, "Expanding word");
    construct->add_option("--prefix", c_prefix, "Prefix word (may be empty)");
    construct->add_option("--kmax", c_kmax, "Number of block pairs")->capture_default_str();
    construct->add_option("--max-len", c_max_len, "Word search length when --i/--j are omitted")->capture_default_str();
    construct->add_option("--law-out", c_law_out, "Write the constructed law description here");

    // jsr
    auto* jsr = app.add_subcommand("jsr", "Joint spectral radius bracket");
    double j_gap = 1e-3;
    jsr->add_option("--gap", j_gap, "Target gap")->capture_default_str();

    // stability
    auto* stability = app.add_subcommand("stability", "Periodic stability up to a length");
    std::size_t st_len = 10;
    stability->add_option("--max-len", st_len, "Maximal word length")->capture_default_str();

    // growth
    auto* growth = app.add_subcommand("growth", "Maximal product norm curve");
    std::size_t gr_n = 14, gr_extremal = 0;
    bool gr_even = false, gr_probe = false;
    growth->add_option("--n-max", gr_n, "Largest length")->capture_default_str();
    growth->add_flag("--even", gr_even, "Fit even lengths only");
    growth->add_flag("--probe", gr_probe, "Also probe invariant subspaces");
    growth->add_option("--extremal", gr_extremal, "Extremal norm horizon on the JSR-normalized system (0 = off)");

    // bj
    auto* bj = app.add_subcommand("bj", "Long-run evidence and decay check");
    std::uint64_t bj_horizon = 2000, bj_max_run = 32;
    bool bj_series = false;
    bj->add_option("--horizon", bj_horizon, "Horizon")->capture_default_str();
    bj->add_option("--max-run", bj_max_run, "Longest run length sought")->capture_default_str();
    bj->add_flag("--series", bj_series, "Include the full log-norm series");

    // lyapunov
    auto* lyap = app.add_subcommand("lyapunov", "Monte-Carlo top Lyapunov exponent");
    std::size_t ly_samples = 100;
    std::uint64_t ly_horizon = 1000;
    lyap->add_option("--samples", ly_samples, "Samples")->capture_default_str();
    lyap->add_option("--horizon", ly_horizon, "Horizon per sample")->capture_default_str();

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "chaoslab: " << e.what() << '\n';
        return kExitInvalid;
    }

    json results = json::object();
    json timings = json::object();
    Stopwatch sw(timings);
    BudgetHit budget_hit;
    std::optional<MatrixSystem> sys;
    std::optional<SwitchingLaw> law;
    json report;

    try {
        auto load_sys = [&] {
            sys = sw.time("loadSystem", [&] { return need_system(g); });
        };
        auto load_law = [&] {
            law = sw.time("loadLaw", [&] { return need_law(g); });
            if (sys && law->alphabet() != sys->size())
                throw InvalidInput("law alphabet " + std::to_string(law->alphabet()) + " does not match the " +
                                   std::to_string(sys->size()) + " system matrices");
        };
        const double tol = g.tol.value_or(kDefaultStabilityTol);

        if (analyze->parsed()) {
            command = "analyze";
            load_sys();
            const std::uint64_t nodes = g.budget.value_or(kDefaultJsrBudget);
            params = {{"maxLen", a_max_len}, {"stabilityLen", a_stab_len}, {"kmax", a_kmax},
                      {"gap", a_gap},        {"budget", nodes},          {"tol", tol}};
            WordSearchOptions opts;
            opts.max_length = a_max_len;
            const auto search = sw.time("findWords", [&] { return find_words(*sys, opts); });
            results["hypothesis"] = io::to_json(search);
            if (search.witness) {
                try {
                    const auto c = sw.time("construct", [&] {
                        return construct_chaotic_law(*sys, *search.witness, Word::empty(sys->size()), a_kmax);
                    });
                    results["chaos"] = certificate_section(*sys, c, a_kmax, sw);
                } catch (const ResourceError& e) {
                    results["chaos"] = {{"error", e.what()}};
                    budget_hit.mark(true);
                }
            }
            const auto st = sw.time("periodicStability", [&] { return periodic_stability(*sys, a_stab_len, tol); });
            budget_hit.mark(st.budget_exhausted);
            results["periodicStability"] = io::to_json(st);
            const auto br = sw.time("jsr", [&] { return jsr_bracket(*sys, nodes, a_gap); });
            budget_hit.mark(br.budget_exhausted && !br.converged);
            results["jsr"] = io::to_json(br);
            results["irreducibility"] = sw.time("irreducibility", [&] { return io::to_json(irreducibility(*sys)); });
        } else if (simulate_cmd->parsed()) {
            command = "simulate";
            load_sys();
            load_law();
            const Vector x0 = s_x0.empty() ? [&] {
                Vector e(sys->dim(), 0.0);
                e[0] = 1.0;
                return e;
            }()
                                           : parse_vector(s_x0, sys->dim());
            const std::uint64_t cap = g.budget.value_or(kDefaultHorizonBudget);
            params = {{"x0", x0}, {"n", s_n}, {"kmax", s_kmax}, {"budget", cap}};
            const auto tr = sw.time("simulate", [&] { return simulate(*sys, *law, x0, s_n, cap); });
            const double last = tr.states.empty() ? std::log(norm2(x0)) : tr.states.back().log_magnitude;
            results["finalLog2Magnitude"] = std::isfinite(last) ? json(last / std::log(2.0)) : json(nullptr);
            results["finalLog10Magnitude"] = std::isfinite(last) ? json(last / std::log(10.0)) : json(nullptr);
            results["zeroInitial"] = tr.zero_initial;
            if (s_kmax > 0 && s_n > 0) results["orbitCrossings"] = io::to_json(orbit_scan(tr, s_kmax));
            if (law->kind() == SwitchingLaw::Kind::Periodic)
                results["periodicClass"] = io::to_json(classify_periodic(*sys, law->word()));
            if (!g.csv_path.empty()) io::write_atomic(g.csv_path, io::trajectory_csv(tr));
        } else if (construct->parsed()) {
            command = "construct";
            load_sys();
            const int k = sys->size();
            const Word prefix = Word::parse(c_prefix, k);
            params = {{"prefix", io::to_json(prefix)}, {"kmax", c_kmax}};
            HypothesisWitness witness;
            if (c_i || c_j) {
                if (!c_i || !c_j) throw InvalidInput("--i and --j must be given together");
                const auto check = verify_hypothesis(*sys, Word::parse(*c_i, k), Word::parse(*c_j, k));
                results["hypothesis"] = io::to_json(check);
                if (!check.witness) throw InvalidInput("hypothesis fails: " + check.refusal);
                witness = *check.witness;
            } else {
                WordSearchOptions opts;
                opts.max_length = c_max_len;
                params["maxLen"] = c_max_len;
                const auto search = sw.time("findWords", [&] { return find_words(*sys, opts); });
                results["hypothesis"] = io::to_json(search);
                if (!search.witness)
                    throw InvalidInput("no contracting/expanding word pair up to length " + std::to_string(c_max_len));
                witness = *search.witness;
            }
            params["i"] = io::to_json(witness.contracting);
            params["j"] = io::to_json(witness.expanding);
            try {
                const auto c = sw.time("construct", [&] { return construct_chaotic_law(*sys, witness, prefix, c_kmax); });
                results["chaos"] = certificate_section(*sys, c, c_kmax, sw);
                if (!c_law_out.empty()) io::write_atomic(c_law_out, io::law_to_json(c.law).dump(2) + "\n");
            } catch (const ResourceError& e) {
                results["chaos"] = {{"error", e.what()}};
                budget_hit.mark(true);
            }
        } else if (jsr->parsed()) {
            command = "jsr";
            load_sys();
            const std::uint64_t nodes = g.budget.value_or(kDefaultJsrBudget);
            params = {{"budget", nodes}, {"gap", j_gap}};
            const auto br = sw.time("jsr", [&] { return jsr_bracket(*sys, nodes, j_gap); });
            budget_hit.mark(br.budget_exhausted && !br.converged);
            results["jsr"] = io::to_json(br);
        } else if (stability->parsed()) {
            command = "stability";
            load_sys();
            const std::uint64_t cap = g.budget.value_or(kDefaultEnumerationBudget);
            params = {{"maxLen", st_len}, {"tol", tol}, {"budget", cap}};
            const auto st = sw.time("periodicStability", [&] { return periodic_stability(*sys, st_len, tol, cap); });
            budget_hit.mark(st.budget_exhausted);
            results["periodicStability"] = io::to_json(st);
        } else if (growth->parsed()) {
            command = "growth";
            load_sys();
            const std::uint64_t cap = g.budget.value_or(kDefaultEnumerationBudget);
            params = {{"nMax", gr_n}, {"even", gr_even}, {"budget", cap}, {"probe", gr_probe}, {"extremal", gr_extremal}};
            GrowthOptions opts;
            opts.even_only = gr_even;
            opts.budget = cap;
            const auto curve = sw.time("growth", [&] { return growth_curve(*sys, gr_n, opts); });
            budget_hit.mark(curve.truncated);
            results["growth"] = io::to_json(curve);
            results["floorExponent"] = floor_exponent(static_cast<int>(sys->dim()));
            if (gr_probe)
                results["unboundedProbe"] = sw.time("probe", [&] { return io::to_json(product_unbounded_probe(*sys, gr_n)); });
            if (gr_extremal > 0) {
                const auto br = sw.time("jsr", [&] { return jsr_bracket(*sys, kDefaultJsrBudget, 1e-3); });
                std::vector<Vector> probes;
                for (std::size_t i = 0; i < sys->dim(); ++i) {
                    Vector e(sys->dim(), 0.0);
                    e[i] = 1.0;
                    probes.push_back(e);
                }
                const auto table = sw.time("extremal", [&] {
                    return extremal_norm_estimate(sys->scaled(1.0 / br.upper), gr_extremal, probes, cap);
                });
                budget_hit.mark(table.truncated);
                results["extremalNorm"] = io::to_json(table);
                results["extremalNorm"]["normalizedBy"] = br.upper;
            }
            if (!g.csv_path.empty()) io::write_atomic(g.csv_path, io::growth_csv(curve));
        } else if (bj->parsed()) {
            command = "bj";
            if (!g.system_path.empty()) load_sys();
            load_law();
            params = {{"horizon", bj_horizon}, {"maxRun", bj_max_run}};
            results["evidence"] = sw.time("bjEvidence", [&] { return io::to_json(bj_evidence(*law, bj_horizon, bj_max_run)); });
            if (sys)
                results["decay"] = sw.time("decay", [&] { return io::to_json(bj_decay_check(*sys, *law, bj_horizon), bj_series); });
        } else if (lyap->parsed()) {
            command = "lyapunov";
            load_sys();
            const std::uint64_t seed = g.seed.value_or(0);
            params = {{"samples", ly_samples}, {"horizon", ly_horizon}, {"seed", seed}};
            results["lyapunov"] = sw.time("lyapunov", [&] { return io::to_json(lyapunov_mc(*sys, ly_samples, ly_horizon, seed)); });
        }
    } catch (const ResourceError& e) {
        results["error"] = e.what();
        budget_hit.mark(true);
        err << "chaoslab: budget exhausted: " << e.what() << '\n';
    } catch (const InvalidInput& e) {
        err << "chaoslab: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ConvergenceError& e) {
        err << "chaoslab: numerical failure: " << e.what() << '\n';
        return kExitInvalid;
    }

    report["toolVersion"] = io::kToolVersion;
    report["command"] = command;
    if (sys) report["systemDigest"] = io::system_digest(*sys);
    if (law) report["lawDigest"] = io::fnv1a_hex(io::law_to_json(*law).dump());
    report["parameters"] = params;
    report["results"] = results;
    report["timings"] = timings;
    const std::string text = report.dump(2) + "\n";
    try {
        if (!g.out_path.empty()) io::write_atomic(g.out_path, text);
    } catch (const InvalidInput& e) {
        err << "chaoslab: " << e.what() << '\n';
        return kExitInvalid;
    }
    if (g.out_path.empty() || g.json_stdout) out << text;
    return budget_hit.hit ? kExitBudget : kExitOk;
}

}  // namespace chaoslab::cli
