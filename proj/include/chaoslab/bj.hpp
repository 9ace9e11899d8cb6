#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/switching.hpp"
#include "chaoslab/system.hpp"

namespace chaoslab {

enum class BJVerdict { Consistent, Inconsistent };

const char* to_string(BJVerdict v);

/// A constant run law(start+1 .. start+length) = symbol.
struct RunThreshold {
    std::uint64_t run_length = 0;
    std::uint64_t latest_start = 0;
};

struct SymbolRuns {
    Symbol symbol = 1;
    /// One entry per run length l <= max_run that occurs in the tail.
    std::vector<RunThreshold> thresholds;
};

/**
 * Finite-horizon evidence for arbitrarily late, arbitrarily long constant
 * runs. "Late" means the run starts in the second half of the horizon, i.e.
 * latest_start >= horizon / 2, and ends by the horizon.
 */
struct BJEvidence {
    /// First symbol with tail runs of every length up to max_run.
    std::optional<Symbol> symbol;
    /// Thresholds of that symbol (empty when there is none).
    std::vector<RunThreshold> run_thresholds;
    BJVerdict verdict = BJVerdict::Inconsistent;
    std::uint64_t horizon = 0;
    std::uint64_t max_run = 0;
    std::vector<SymbolRuns> per_symbol;
};

BJEvidence bj_evidence(const SwitchingLaw& law, std::uint64_t horizon, std::uint64_t max_run);

struct DecayReport {
    /// log ||S_{sigma(n)} ... S_{sigma(1)}|| for n = 1..horizon.
    std::vector<double> log_norms;
    bool decaying = false;
    /// Smallest log-norm in the first quarter and largest in the last quarter.
    double head_min = 0.0;
    double tail_max = 0.0;
    /// Least-squares slope of log-norm against n over the second half.
    double tail_rate = 0.0;
    bool periodically_stable = false;
    std::size_t stability_length = 0;
    std::vector<std::string> warnings;
};

/// Decaying iff tail_max < head_min - ln 2. Systems that fail periodic
/// stability up to `stability_length` get a warning, not an error.
DecayReport bj_decay_check(const MatrixSystem& sys, const SwitchingLaw& law, std::uint64_t horizon,
                           std::size_t stability_length = 8);

}  // namespace chaoslab
