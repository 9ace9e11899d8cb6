#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/linalg.hpp"
#include "chaoslab/switching.hpp"
#include "chaoslab/system.hpp"
#include "chaoslab/word.hpp"

namespace chaoslab {

/// A contracting word (product op-norm < 1) and an expanding word (product
/// co-norm > 1). Their existence makes chaotic switching laws generic.
struct HypothesisWitness {
    Word contracting;
    Word expanding;
    double contracting_norm = 0.0;
    double expanding_co_norm = 0.0;
};

struct HypothesisCheck {
    std::optional<HypothesisWitness> witness;
    double contracting_norm = 0.0;
    double expanding_co_norm = 0.0;
    /// Empty when a witness was produced.
    std::string refusal;
};

/// Witness iff op_norm(prod i) < 1 - tol and co_norm(prod j) > 1 + tol.
HypothesisCheck verify_hypothesis(const MatrixSystem& sys, const Word& contracting, const Word& expanding,
                                  double tol = 1e-12);

struct WordSearchOptions {
    std::size_t max_length = 12;
    /// Node budget for the exhaustive depth-first scan. Lengths beyond the
    /// exhaustive depth are searched among powers u^r of short base words.
    std::uint64_t budget = 1ULL << 22;
    std::size_t max_power_base = 8;
    double tol = 1e-12;
};

struct WordSearchResult {
    std::optional<HypothesisWitness> witness;
    /// Shortest (then lexicographically first) words found on each side.
    std::optional<Word> contracting;
    double contracting_norm = 0.0;
    std::optional<Word> expanding;
    double expanding_co_norm = 0.0;
    /// Every word of length <= this was examined.
    std::size_t exhaustive_length = 0;
};

/**
 * Look for the two words by increasing length. All words are scanned up to
 * the largest length the node budget allows; past that only powers of short
 * words are tried. A miss is not a proof that no witness exists.
 */
WordSearchResult find_words(const MatrixSystem& sys, const WordSearchOptions& options = {});

struct Crossing {
    std::size_t k = 0;
    std::uint64_t time_below = 0;   // end of the k-th contracting block
    double log_op_norm = 0.0;       // log ||product|| there, < -ln k
    std::uint64_t time_above = 0;   // end of the k-th expanding block
    double log_co_norm = 0.0;       // log ||product||_co there, > ln k
};

/**
 * Output of the greedy construction: the law is
 * prefix, i^l1, j^L1, i^l2, j^L2, ..., and after the k-th pair the running
 * product satisfies ||.|| < 1/k then ||.||_co > k.
 */
struct ChaosCertificate {
    Word prefix;
    Word contracting;
    Word expanding;
    std::vector<ExponentPair> schedule;
    std::vector<Crossing> crossings;
    /// k for which l_k < L_k does not hold (recorded, not enforced).
    std::vector<std::size_t> order_exceptions;
    double margin = 1e-9;
};

struct ConstructionOptions {
    /// Log-space margin applied to every strict inequality.
    double margin = 1e-9;
    /// Cap on any single exponent.
    std::uint64_t max_exponent = 10'000'000;
};

struct Construction {
    ChaosCertificate certificate;
    SwitchingLaw law;
};

/**
 * Greedy construction: minimal l_k >= 1, then minimal L_k >= 1, for
 * k = 1..k_max. With k_max = 0 the law is Explicit(prefix). Throws
 * InvalidInput for a stale witness and ResourceError if an exponent would
 * exceed the cap.
 */
Construction construct_chaotic_law(const MatrixSystem& sys, const HypothesisWitness& witness, const Word& prefix,
                                   std::size_t k_max, const ConstructionOptions& options = {});

struct CertificateCheck {
    bool sound = false;
    /// Per k: -ln k - log||P|| and log||P||_co - ln k at the block ends
    /// (positive = inequality holds with that much room).
    std::vector<double> contract_slack;
    std::vector<double> expand_slack;
};

/// Rebuild every block-end product from scratch and re-check each inequality.
CertificateCheck verify_certificate(const MatrixSystem& sys, const ChaosCertificate& cert);

struct ScaledVector {
    Vector unit;
    double log_magnitude = 0.0;  // -inf for the zero vector
};

struct Trajectory {
    Vector initial;
    Word symbols;                      // sigma(1..n)
    std::vector<ScaledVector> states;  // x_1..x_n
    /// x0 = 0: the trajectory is identically zero and excluded from chaos notions.
    bool zero_initial = false;
};

inline constexpr std::uint64_t kDefaultHorizonBudget = 100'000'000;

Trajectory simulate(const MatrixSystem& sys, const SwitchingLaw& law, const Vector& x0, std::uint64_t horizon,
                    std::uint64_t budget = kDefaultHorizonBudget);

struct CrossingRow {
    std::size_t k = 0;
    std::optional<std::uint64_t> first_below;  // earliest n with ||.|| < 1/k
    std::optional<std::uint64_t> first_above;  // earliest n with ||.||_co > k
};

struct CrossingTable {
    std::vector<CrossingRow> rows;
    std::uint64_t horizon = 0;
    double min_log_op = 0.0;
    double max_log_co = 0.0;

    /// Every threshold crossed on both sides within the horizon.
    bool complete() const;
};

/// Matrix-level scan of the cocycle S(n, sigma) for n = 1..horizon.
CrossingTable chaos_scan(const MatrixSystem& sys, const SwitchingLaw& law, std::size_t k_max, std::uint64_t horizon);

/// Vector-level view of the same question: ||x_n|| / ||x_0|| against 1/k and k.
CrossingTable orbit_scan(const Trajectory& trajectory, std::size_t k_max);

enum class PeriodicClass { Contracting, NonchaoticExpandingOrNeutral };

struct PeriodicClassification {
    PeriodicClass cls = PeriodicClass::Contracting;
    double radius = 0.0;             // rho(S_{w_p} ... S_{w_1})
    double normalized_radius = 0.0;  // radius^(1/p)
};

/// Periodic laws are never chaotic; this reports which of the two reasons applies.
PeriodicClassification classify_periodic(const MatrixSystem& sys, const Word& word);

const char* to_string(PeriodicClass c);

}  // namespace chaoslab
