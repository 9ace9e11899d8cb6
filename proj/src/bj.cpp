#include "chaoslab/bj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaoslab/errors.hpp"
#include "chaoslab/stability.hpp"

namespace chaoslab {

const char* to_string(BJVerdict v) {
    return v == BJVerdict::Consistent ? "consistent-with-BJ-nonchaotic" : "inconsistent-up-to-horizon";
}

BJEvidence bj_evidence(const SwitchingLaw& law, std::uint64_t horizon, std::uint64_t max_run) {
    if (max_run < 1 || horizon < max_run) throw InvalidInput("bj_evidence needs horizon >= max_run >= 1");
    const int k = law.alphabet();
    const Word w = law.take(horizon);
    const std::uint64_t tail_start = horizon / 2;

    // latest[s-1][l-1]: latest start n with law(n+1..n+l) = s and n >= tail_start.
    std::vector<std::vector<std::optional<std::uint64_t>>> latest(
        static_cast<std::size_t>(k), std::vector<std::optional<std::uint64_t>>(max_run));
    std::uint64_t run_begin = 1;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        const bool run_ends = n == horizon || w.at(n + 1) != w.at(n);
        if (!run_ends) continue;
        const Symbol s = w.at(n);
        const std::uint64_t length = n - run_begin + 1;
        for (std::uint64_t l = 1; l <= std::min(length, max_run); ++l) {
            const std::uint64_t start = n - l;
            if (start >= tail_start) latest[static_cast<std::size_t>(s - 1)][l - 1] = start;
        }
        run_begin = n + 1;
    }

    BJEvidence ev;
    ev.horizon = horizon;
    ev.max_run = max_run;
    for (Symbol s = 1; s <= k; ++s) {
        SymbolRuns runs;
        runs.symbol = s;
        bool all = true;
        for (std::uint64_t l = 1; l <= max_run; ++l) {
            const auto& slot = latest[static_cast<std::size_t>(s - 1)][l - 1];
            if (slot) runs.thresholds.push_back({l, *slot});
            else all = false;
        }
        if (all && !ev.symbol) {
            ev.symbol = s;
            ev.run_thresholds = runs.thresholds;
            ev.verdict = BJVerdict::Consistent;
        }
        ev.per_symbol.push_back(std::move(runs));
    }
    return ev;
}

DecayReport bj_decay_check(const MatrixSystem& sys, const SwitchingLaw& law, std::uint64_t horizon,
                           std::size_t stability_length) {
    if (horizon < 4) throw InvalidInput("bj_decay_check needs horizon >= 4");
    if (law.alphabet() != sys.size()) throw InvalidInput("law alphabet does not match the system");

    DecayReport report;
    report.stability_length = stability_length;
    if (stability_length > 0) {
        const auto verdict = periodic_stability(sys, stability_length);
        report.periodically_stable = verdict.stable && !verdict.budget_exhausted;
        if (!report.periodically_stable) {
            report.warnings.push_back("system is not periodically stable up to length " +
                                      std::to_string(stability_length) + " (worst word " +
                                      verdict.worst_word.to_string() + ", normalized radius " +
                                      std::to_string(verdict.worst_radius) + "); decay is not expected");
        }
    }

    report.log_norms.reserve(static_cast<std::size_t>(horizon));
    LogScaledMatrix p = LogScaledMatrix::identity(sys.dim());
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        p = p.left_multiplied(sys[law.eval(n)]);
        report.log_norms.push_back(p.log_op_norm());
    }

    const std::size_t quarter = static_cast<std::size_t>(horizon / 4);
    const auto& v = report.log_norms;
    report.head_min = *std::min_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(quarter));
    report.tail_max = *std::max_element(v.end() - static_cast<std::ptrdiff_t>(quarter), v.end());
    report.decaying = report.tail_max < report.head_min - std::log(2.0);

    const std::size_t half = v.size() / 2;
    double mx = 0.0, my = 0.0;
    const auto count = static_cast<double>(v.size() - half);
    for (std::size_t i = half; i < v.size(); ++i) {
        mx += static_cast<double>(i + 1);
        my += v[i];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = half; i < v.size(); ++i) {
        const double dx = static_cast<double>(i + 1) - mx;
        sxy += dx * (v[i] - my);
        sxx += dx * dx;
    }
    report.tail_rate = sxx > 0.0 ? sxy / sxx : 0.0;
    return report;
}

}  // namespace chaoslab
