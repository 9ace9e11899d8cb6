#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chaoslab/linalg.hpp"
#include "chaoslab/switching.hpp"
#include "chaoslab/system.hpp"
#include "chaoslab/word.hpp"

namespace chaoslab {

inline constexpr double kDefaultStabilityTol = 1e-9;

struct StabilityVerdict {
    /// Largest L such that every word of length <= L has rho^(1/len) < 1 - tol.
    std::size_t stable_up_to = 0;
    /// Longest length whose necklaces were all examined.
    std::size_t checked_length = 0;
    /// No examined word violated the bound.
    bool stable = true;
    /// The budget stopped the scan before max_len.
    bool budget_exhausted = false;
    /// Word maximizing rho(product)^(1/len); the first one found wins ties.
    Word worst_word;
    double worst_radius = 0.0;
    double tol = kDefaultStabilityTol;
    std::uint64_t words_checked = 0;
};

/// Spectral radii over one representative per necklace, lengths 1..max_len.
StabilityVerdict periodic_stability(const MatrixSystem& sys, std::size_t max_len, double tol = kDefaultStabilityTol,
                                    std::uint64_t budget = kDefaultEnumerationBudget);

struct JsrBracket {
    double lower = 0.0;
    double upper = 0.0;
    /// lower = rho(product(lower_witness))^(1/|lower_witness|).
    Word lower_witness;
    std::size_t depth_reached = 0;
    std::uint64_t budget_spent = 0;
    bool converged = false;
    bool budget_exhausted = false;
};

inline constexpr std::uint64_t kDefaultJsrBudget = 1'000'000;

/**
 * Branch-and-bound bracket of the joint spectral radius by iterative
 * deepening. Each node carries the smallest ||prefix||^(1/len) along its
 * path; the upper bound is the maximum of that value over the leaves of a
 * complete search tree. Nodes whose value is at most lower + target_gap are
 * not expanded. A pass cut short by the budget contributes only to the lower
 * bound.
 */
JsrBracket jsr_bracket(const MatrixSystem& sys, std::uint64_t budget = kDefaultJsrBudget, double target_gap = 1e-3);

enum class GrowthShape { Bounded, Polynomial, GeometricDecay, GeometricGrowth };

const char* to_string(GrowthShape s);

struct GrowthOptions {
    /// Fit only even n (useful when the extremal words have even period).
    bool even_only = false;
    std::uint64_t budget = kDefaultEnumerationBudget;
};

struct GrowthCurve {
    /// log max_{|w| = n} ||product(w)|| for n = 1..size().
    std::vector<double> log_max_norms;
    /// Lexicographically first maximizer for each n.
    std::vector<Word> argmax;
    /// Log-log slope of the running supremum over the fit range.
    double fitted_exponent = 0.0;
    /// Log-log slope of the values themselves.
    double raw_exponent = 0.0;
    /// Slope of log max-norm against n over the fit range.
    double log_rate = 0.0;
    GrowthShape shape = GrowthShape::Bounded;
    std::size_t fit_from = 0;
    std::size_t fit_to = 0;
    bool even_only = false;
    /// Budget ran out; the curve stops at the last complete n.
    bool truncated = false;
    std::uint64_t nodes = 0;
};

/// Exact maximal product norms by branch and bound over all words, with the
/// exponent fitted over n in [n_max/2, n_max].
GrowthCurve growth_curve(const MatrixSystem& sys, std::size_t n_max, const GrowthOptions& options = {});

/// Four-by-four system S_k = [[F_k, F_k], [0, F_k]] with
/// F_1 = scale*alpha*[[1,1],[0,1]] and F_2 = scale*beta*[[1,0],[1,1]].
MatrixSystem build_block_shear_system(double alpha, double beta, double scale);

/// 1 / sqrt(rho(F_2 F_1)) for the unscaled pair, which puts the joint
/// spectral radius of the block system at 1 for alpha = beta = 0.6.
double block_shear_normalization(double alpha, double beta);

/// max |offdiag - n*P| / max|n*P| for the product along `w`, where P is the
/// diagonal block. Expects a block system built by build_block_shear_system.
double block_identity_error(const MatrixSystem& block_sys, const Word& w);

/// floor(d/2 - 1): the polynomial growth degree bound for d-dimensional
/// periodically stable systems.
int floor_exponent(int d);

struct ExtremalNormTable {
    std::vector<Vector> probes;
    /// max over |w| <= horizon of ||product(w) x|| per probe.
    std::vector<double> values;
    /// Same with |w| <= horizon - 1.
    std::vector<double> previous;
    /// max over probes of (values - previous) / values.
    double stabilization = 0.0;
    std::size_t horizon = 0;
    bool truncated = false;
};

/// Finite-horizon approximation of an extremal norm. Normalize the system
/// by its joint spectral radius first.
ExtremalNormTable extremal_norm_estimate(const MatrixSystem& sys, std::size_t horizon,
                                         const std::vector<Vector>& probes,
                                         std::uint64_t budget = kDefaultEnumerationBudget);

struct AlgebraReport {
    bool irreducible = false;
    std::size_t dimension = 0;
    /// Orthonormal basis (Frobenius inner product) of the generated algebra.
    std::vector<Matrix> basis;
};

/// Dimension of the unital algebra generated by the system; irreducible iff
/// it equals d^2.
AlgebraReport irreducibility(const MatrixSystem& sys);

struct SubspaceGrowth {
    /// Orthonormal columns spanning the subspace (empty for the full space).
    std::vector<Vector> basis;
    bool full_space = false;
    bool growing = false;
    double head_max_log = 0.0;
    double tail_max_log = 0.0;
    GrowthCurve curve;
};

struct UnboundedProbe {
    std::vector<SubspaceGrowth> subspaces;  // full space first
};

/**
 * Growth evidence on the full space and on each distinct proper invariant
 * subspace A e_i (A = generated algebra). A curve is growing when the max
 * over its second half is at least 1.25 times the max over its first half.
 */
UnboundedProbe product_unbounded_probe(const MatrixSystem& sys, std::size_t n_max);

struct LyapunovEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t samples = 0;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
};

/// Top Lyapunov exponent under i.i.d. uniform symbols: mean of
/// log||product|| / horizon over independent samples.
LyapunovEstimate lyapunov_mc(const MatrixSystem& sys, std::size_t samples, std::uint64_t horizon,
                             std::uint64_t seed);

}  // namespace chaoslab
