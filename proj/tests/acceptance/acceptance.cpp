// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chaoslab/bj.hpp"
#include "chaoslab/chaos.hpp"
#include "chaoslab/linalg.hpp"
#include "chaoslab/stability.hpp"
#include "oracles/oracles.hpp"

using namespace chaoslab;

namespace {

/// Collects failed checks with a short description of each.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    bool ok() const { return failures_.empty(); }
    std::string summary() const {
        std::ostringstream s;
        for (std::size_t i = 0; i < failures_.size() && i < 3; ++i) s << (i ? "; " : "") << failures_[i];
        if (failures_.size() > 3) s << "; +" << failures_.size() - 3 << " more";
        return s.str();
    }

private:
    std::vector<std::string> failures_;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(10);
    s << x;
    return s.str();
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Word power_word(const Word& w, std::uint64_t e) { return w.power(static_cast<std::size_t>(e)); }

// ---------------------------------------------------------------------------

void criterion_1(Checker& c) {
    const auto sys = halving_doubling_pair();
    WordSearchOptions opts;
    const auto search = find_words(sys, opts);
    c.expect(search.witness.has_value(), "no witness found");
    if (!search.witness) return;
    const auto& w = *search.witness;
    c.expect(w.contracting == Word({1}, 2) && w.expanding == Word({2}, 2), "witness words are not ((1),(2))");
    c.expect(std::abs(w.contracting_norm - 0.5) <= 1e-12, "contracting norm " + fmt(w.contracting_norm));
    c.expect(std::abs(w.expanding_co_norm - 2.0) <= 1e-12, "expanding co-norm " + fmt(w.expanding_co_norm));

    const std::size_t k_max = 5;
    const auto built = construct_chaotic_law(sys, w, Word::empty(2), k_max);
    const auto& cert = built.certificate;
    c.expect(cert.schedule.size() == k_max, "schedule has the wrong length");
    const auto check = verify_certificate(sys, cert);
    c.expect(check.sound, "certificate re-verification failed");
    for (std::size_t k = 0; k < check.contract_slack.size(); ++k) {
        c.expect(check.contract_slack[k] >= 1e-9, "contract slack k=" + std::to_string(k + 1));
        c.expect(check.expand_slack[k] >= 1e-9, "expand slack k=" + std::to_string(k + 1));
    }

    // Greedy minimality: one fewer factor at the end of any block breaks its inequality.
    Word base = cert.prefix;
    for (std::size_t k = 0; k < cert.schedule.size(); ++k) {
        const double t = std::log(static_cast<double>(k + 1));
        const auto& p = cert.schedule[k];
        const Word short_i = base.concat(power_word(cert.contracting, p.contract - 1));
        c.expect(!(tracked_product(sys, short_i).log_op_norm() < -t - cert.margin),
                 "contracting exponent not minimal at k=" + std::to_string(k + 1));
        const Word full_i = base.concat(power_word(cert.contracting, p.contract));
        const Word short_j = full_i.concat(power_word(cert.expanding, p.expand - 1));
        c.expect(!(tracked_product(sys, short_j).log_co_norm() > t + cert.margin),
                 "expanding exponent not minimal at k=" + std::to_string(k + 1));
        base = full_i.concat(power_word(cert.expanding, p.expand));
    }
}

void criterion_2(Checker& c) {
    const auto sys = halving_doubling_pair();
    const auto witness = *verify_hypothesis(sys, Word({1}, 2), Word({2}, 2)).witness;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> sym(1, 2);
    std::uniform_int_distribution<int> kind(0, 2);
    int failures = 0;
    for (int t = 0; t < 100; ++t) {
        // Random target laws of three kinds.
        std::vector<Symbol> w(static_cast<std::size_t>(t % 9 + 1));
        for (auto& s : w) s = sym(rng);
        SwitchingLaw target = SwitchingLaw::periodic(Word(w, 2));
        switch (kind(rng)) {
            case 1: {
                std::vector<SymbolBlock> blocks;
                for (int b = 0; b < 6; ++b) blocks.push_back({sym(rng), static_cast<std::uint64_t>(sym(rng) * 3)});
                target = SwitchingLaw::blocks(blocks, 2);
                break;
            }
            case 2:
                target = doubling_law().shift(static_cast<std::uint64_t>(t));
                break;
            default:
                break;
        }
        for (std::size_t n : {4u, 8u, 16u}) {
            const Word prefix = target.take(n);
            const auto built = construct_chaotic_law(sys, witness, prefix, 3);
            const bool match = built.law.take(n) == prefix;
            const double d = law_metric(target, built.law, 64);
            if (!match || !(d < std::ldexp(1.0, -static_cast<int>(n)))) ++failures;
        }
    }
    c.expect(failures == 0, std::to_string(failures) + " targets not matched");
}

void criterion_3(Checker& c) {
    const auto sys = halving_doubling_pair();
    const auto law = doubling_law();
    const auto tr = simulate(sys, law, {0.6, 0.8}, 126);
    const std::uint64_t ends[] = {2, 6, 14, 30, 62, 126};
    const double expected[] = {-2, 2, -6, 10, -22, 42};
    for (int b = 0; b < 6; ++b) {
        const double got = tr.states[ends[b] - 1].log_magnitude / std::log(2.0);
        c.expect(std::abs(got - expected[b]) <= 1e-6, "log2 at n=" + std::to_string(ends[b]) + " is " + fmt(got));
    }
    const auto scan = chaos_scan(sys, law, 4, 126);
    c.expect(scan.complete(), "chaos_scan misses a crossing for k <= 4 by 126");
    const auto ev = bj_evidence(law, 2046, 32);
    c.expect(std::string(to_string(ev.verdict)) == "consistent-with-BJ-nonchaotic", "bj verdict");
}

void criterion_4(Checker& c) {
    const auto sys = halving_doubling_pair();
    const auto c1 = classify_periodic(sys, Word({1}, 2));
    const auto c2 = classify_periodic(sys, Word({2}, 2));
    c.expect(std::string(to_string(c1.cls)) == "contracting", "word (1) class");
    c.expect(std::string(to_string(c2.cls)) == "nonchaotic-expanding-or-neutral", "word (2) class");

    const std::uint64_t horizon = 1000;
    const Vector x0{0.6, 0.8};
    for (const auto& [word, cls] : {std::pair{Word({1}, 2), c1}, std::pair{Word({2}, 2), c2}}) {
        const auto tr = simulate(sys, SwitchingLaw::periodic(word), x0, horizon);
        std::vector<double> n, y;
        double min_log = 0.0;
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            n.push_back(static_cast<double>(i + 1));
            y.push_back(tr.states[i].log_magnitude);
            min_log = std::min(min_log, tr.states[i].log_magnitude);
        }
        const double slope = least_squares_slope(n, y);
        const double rate = std::log(cls.radius) / static_cast<double>(word.size());
        c.expect((slope < 0) == (rate < 0) && std::abs(slope - rate) <= 0.1 * std::abs(rate),
                 "slope " + fmt(slope) + " vs ln rho " + fmt(rate));
        if (cls.cls == PeriodicClass::Contracting)
            c.expect(y.back() < std::log(1e-100), "contracting orbit does not tend to zero");
        else
            c.expect(std::isfinite(min_log) && min_log >= -1e-12, "expanding orbit dips below its start");
    }
}

void criterion_5(Checker& c) {
    const auto sys = shear_pair(0.6, 0.6);
    const auto v = periodic_stability(sys, 10);
    c.expect(v.stable && v.stable_up_to == 10, "not periodically stable to length 10");
    c.expect(std::abs(v.worst_radius - 0.970820) <= 1e-5, "worst radius " + fmt(v.worst_radius));
    c.expect(v.worst_word == Word({1, 2}, 2), "worst word " + v.worst_word.to_string());
    const auto b = jsr_bracket(sys, 1'000'000, 1e-3);
    c.expect(std::abs(b.lower - 0.970820) <= 1e-6, "jsr lower " + fmt(b.lower));
    c.expect(b.upper <= 0.98, "jsr upper " + fmt(b.upper));
    c.expect(b.budget_spent <= 1'000'000, "jsr budget");

    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> sym(1, 2);
    std::uniform_int_distribution<int> len(1, 40);
    int distal = 0;
    for (int t = 0; t < 50; ++t) {
        SwitchingLaw law = SwitchingLaw::constant(1, 2);
        if (t % 3 == 0) {
            std::vector<Symbol> w(static_cast<std::size_t>(len(rng) % 12 + 1));
            for (auto& s : w) s = sym(rng);
            law = SwitchingLaw::periodic(Word(w, 2));
        } else if (t % 3 == 1) {
            std::vector<SymbolBlock> blocks;
            for (int i = 0; i < 10; ++i) blocks.push_back({sym(rng), static_cast<std::uint64_t>(len(rng))});
            law = SwitchingLaw::blocks(blocks, 2);
        } else {
            std::vector<Symbol> w(1000);
            for (auto& s : w) s = sym(rng);
            law = SwitchingLaw::explicit_prefix(Word(w, 2));
        }
        const auto scan = chaos_scan(sys, law, 1, 1000);
        if (scan.rows[0].first_above) ++distal;
    }
    c.expect(distal == 0, std::to_string(distal) + " laws crossed the co-norm threshold");
}

void criterion_6(Checker& c) {
    const auto g = growth_curve(shear_pair(0.6, 0.6), 14);
    c.expect(std::abs(g.fitted_exponent) <= 0.15, "shear fitted exponent " + fmt(g.fitted_exponent));
    const auto block_sys = build_block_shear_system(0.6, 0.6, block_shear_normalization(0.6, 0.6));
    GrowthOptions o;
    o.even_only = true;
    const auto r = growth_curve(block_sys, 14, o);
    c.expect(std::abs(r.fitted_exponent - 1.0) <= 0.2, "block system fitted exponent " + fmt(r.fitted_exponent));
    c.expect(floor_exponent(4) == 1, "floor exponent for d = 4");
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> sym(1, 2);
    std::uniform_int_distribution<int> len(1, 60);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        std::vector<Symbol> w(static_cast<std::size_t>(len(rng)));
        for (auto& s : w) s = sym(rng);
        worst = std::max(worst, block_identity_error(block_sys, Word(w, 2)));
    }
    c.expect(worst <= 1e-8, "block identity error " + fmt(worst));
}

void criterion_7(Checker& c) {
    const auto sys = shear_pair(0.6, 0.6);
    std::mt19937_64 rng(707);
    std::uniform_int_distribution<int> sym(1, 2);
    std::uniform_int_distribution<int> len(1, 200);
    std::uniform_int_distribution<int> small(1, 6);
    int not_decaying = 0;
    for (int t = 0; t < 20; ++t) {
        std::vector<Symbol> w(static_cast<std::size_t>(len(rng)));
        for (auto& s : w) s = sym(rng);
        const auto law = SwitchingLaw::explicit_prefix(Word(w, 2), sym(rng));
        if (!bj_decay_check(sys, law, 2000).decaying) ++not_decaying;
    }
    for (int t = 0; t < 20; ++t) {
        std::vector<SymbolBlock> head;
        for (int b = 0; b < small(rng); ++b) head.push_back({sym(rng), static_cast<std::uint64_t>(small(rng))});
        const std::vector<Symbol> order = sym(rng) == 1 ? std::vector<Symbol>{1, 2} : std::vector<Symbol>{2, 1};
        const BlockRule rule{order, static_cast<std::uint64_t>(small(rng)), t % 2 == 0 ? 1.0 : 1.5,
                             static_cast<std::uint64_t>(t % 2 == 0 ? small(rng) : 0)};
        const auto law = SwitchingLaw::blocks(head, 2, rule);
        if (!bj_decay_check(sys, law, 2000).decaying) ++not_decaying;
    }
    c.expect(not_decaying == 0, std::to_string(not_decaying) + " laws not decaying");
}

void criterion_8(Checker& c) {
    const auto hd = irreducibility(halving_doubling_pair());
    c.expect(!hd.irreducible && hd.dimension == 1, "halving/doubling dimension " + std::to_string(hd.dimension));
    const auto sh = irreducibility(shear_pair(0.6, 0.6));
    c.expect(sh.irreducible && sh.dimension == 4, "shear dimension " + std::to_string(sh.dimension));
    const auto rm = irreducibility(build_block_shear_system(0.6, 0.6, block_shear_normalization(0.6, 0.6)));
    c.expect(!rm.irreducible, "block system reported irreducible");

    const auto probe = product_unbounded_probe(MatrixSystem({Matrix{{1, 1}, {0, 1}}}), 16);
    c.expect(!probe.subspaces.empty() && probe.subspaces[0].full_space && probe.subspaces[0].growing,
             "single shear not growing on the full space");
    bool axis = false;
    for (std::size_t i = 1; i < probe.subspaces.size(); ++i) {
        const auto& s = probe.subspaces[i];
        if (s.basis.size() == 1 && std::abs(std::abs(s.basis[0][0]) - 1.0) < 1e-12) {
            axis = true;
            c.expect(!s.growing, "single shear growing on the invariant axis");
        }
    }
    c.expect(axis, "invariant axis not probed");
}

void criterion_9(Checker& c) {
    std::mt19937_64 rng(909);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> dim(1, 5);
    auto random_matrix = [&](std::size_t d) {
        Matrix m(d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t k = 0; k < d; ++k) m(r, k) = g(rng);
        return m;
    };
    int sub = 0, super = 0, dual = 0, rho = 0;
    for (int t = 0; t < 10000; ++t) {
        const auto d = static_cast<std::size_t>(dim(rng));
        const Matrix a = random_matrix(d), b = random_matrix(d);
        const double na = op_norm(a), nb = op_norm(b), nab = op_norm(a * b);
        if (nab > na * nb * (1 + 1e-12)) ++sub;
        if (co_norm(a * b) < co_norm(a) * co_norm(b) * (1 - 1e-9)) ++super;
        const double duality = co_norm(a) * op_norm(inverse(a));
        if (std::abs(duality - 1.0) > 1e-8) ++dual;
        if (spectral_radius(a).radius > na * (1 + 1e-9)) ++rho;
    }
    c.expect(sub == 0, std::to_string(sub) + " submultiplicativity failures");
    c.expect(super == 0, std::to_string(super) + " supermultiplicativity failures");
    c.expect(dual == 0, std::to_string(dual) + " duality failures");
    c.expect(rho == 0, std::to_string(rho) + " rho <= norm failures");

    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const double x = g(rng), y = g(rng), z = g(rng);
        const auto expected = oracle::sym_eigs_2x2(x, y, z);
        const auto got = sym_eigs(Matrix{{x, y}, {y, z}});
        const double scale = std::max({std::abs(x), std::abs(y), std::abs(z), 1.0});
        for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::abs(got[i] - expected[i]) / scale);
    }
    c.expect(worst <= 1e-10, "sym_eigs error " + fmt(worst));

    const auto ly = lyapunov_mc(halving_doubling_pair(), 200, 1000, 12345);
    c.expect(std::abs(ly.mean) <= 3.0 * ly.stderr_mean,
             "lyapunov " + fmt(ly.mean) + " +- " + fmt(ly.stderr_mean));
}

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds; 0 = none
    std::function<void(Checker&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "constructive pipeline on the halving/doubling pair", 1.0, criterion_1},
        {2, "density of constructed laws", 10.0, criterion_2},
        {3, "doubling law reproduction and BJ separation", 1.0, criterion_3},
        {4, "periodic laws are never chaotic", 0.0, criterion_4},
        {5, "periodic stability, JSR bracket and no distal behaviour", 60.0, criterion_5},
        {6, "polynomial growth bounds", 120.0, criterion_6},
        {7, "BJ-nonchaotic laws decay on a stable pair", 0.0, criterion_7},
        {8, "irreducibility and invariant-subspace growth", 0.0, criterion_8},
        {9, "numerical kernel properties", 0.0, criterion_9},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.time_limit > 0.0)
            checker.expect(secs < cr.time_limit, "runtime " + fmt(secs) + " s over " + fmt(cr.time_limit) + " s");
        std::printf("criterion %d: %s  %s  (%.3f s)%s%s\n", cr.id, checker.ok() ? "PASS" : "FAIL", cr.title, secs,
                    checker.ok() ? "" : "  ", checker.summary().c_str());
        if (!checker.ok()) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
