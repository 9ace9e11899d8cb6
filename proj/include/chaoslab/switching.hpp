#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "chaoslab/word.hpp"

namespace chaoslab {

/// Generator for an unbounded block schedule. Block m (m = 1, 2, ...) has
/// symbol symbols[(m-1) % symbols.size()] and length
/// floor(first * ratio^(m-1)) + increment * (m-1), saturating at 2^62.
struct BlockRule {
    std::vector<Symbol> symbols;
    std::uint64_t first = 1;
    double ratio = 1.0;
    std::uint64_t increment = 0;

    std::uint64_t length(std::uint64_t m) const;
    Symbol symbol(std::uint64_t m) const { return symbols[(m - 1) % symbols.size()]; }

    friend bool operator==(const BlockRule&, const BlockRule&) = default;
};

struct SymbolBlock {
    Symbol symbol;
    std::uint64_t length;

    friend bool operator==(const SymbolBlock&, const SymbolBlock&) = default;
};

/// Exponents (l_k, L_k) of the k-th contracting / expanding block pair.
struct ExponentPair {
    std::uint64_t contract;
    std::uint64_t expand;

    friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

/**
 * A switching law n -> symbol for n = 1, 2, ... (always total).
 *
 *  - Periodic(word): word repeated forever.
 *  - Blocks(schedule, rule): explicit (symbol, length) blocks; afterwards the
 *    rule's blocks if a rule is given, otherwise the schedule repeats.
 *  - Constructed(prefix, i, j, schedule): prefix, i^l1, j^L1, i^l2, j^L2, ...;
 *    after the last pair the final (i^lK, j^LK) pair repeats.
 *  - Explicit(prefix, fallback): prefix then the fallback symbol forever.
 *
 * Blocks and Constructed laws are shifted by keeping an offset; Periodic and
 * Explicit laws shift structurally. Copies share an internal block-boundary
 * cache; eval is safe to call concurrently.
 */
class SwitchingLaw {
public:
    enum class Kind { Periodic, Blocks, Constructed, Explicit };

    static SwitchingLaw periodic(Word word);
    static SwitchingLaw constant(Symbol symbol, int alphabet);
    static SwitchingLaw blocks(std::vector<SymbolBlock> schedule, int alphabet, std::optional<BlockRule> rule = {});
    static SwitchingLaw constructed(Word prefix, Word contracting, Word expanding, std::vector<ExponentPair> schedule);
    /// fallback defaults to the last prefix symbol; an empty prefix needs one.
    static SwitchingLaw explicit_prefix(Word prefix, std::optional<Symbol> fallback = {});

    Kind kind() const noexcept { return kind_; }
    int alphabet() const noexcept { return alphabet_; }
    /// Number of leading symbols dropped by shift() (Blocks/Constructed only).
    std::uint64_t offset() const noexcept { return offset_; }

    /// sigma(n), n >= 1. Throws InvalidInput for n = 0.
    Symbol eval(std::uint64_t n) const;

    /// sigma(1..count) as a word.
    Word take(std::uint64_t count) const;

    /// theta^k(sigma): n -> sigma(n + k).
    SwitchingLaw shift(std::uint64_t k = 1) const;

    // Variant parameters (for serialization).
    const Word& word() const noexcept { return word_; }                   // Periodic
    const Word& prefix() const noexcept { return word_; }                 // Explicit / Constructed
    Symbol fallback() const noexcept { return fallback_; }                // Explicit
    const std::vector<SymbolBlock>& block_schedule() const noexcept { return blocks_; }  // Blocks
    const std::optional<BlockRule>& rule() const noexcept { return rule_; }              // Blocks
    const Word& contracting_word() const noexcept { return i_word_; }     // Constructed
    const Word& expanding_word() const noexcept { return j_word_; }       // Constructed
    const std::vector<ExponentPair>& exponents() const noexcept { return exponents_; }   // Constructed

private:
    struct Segment {
        Word pattern;
        std::uint64_t repeats;
    };
    struct Engine;

    SwitchingLaw() = default;
    void build_engine();

    Kind kind_ = Kind::Periodic;
    int alphabet_ = 0;
    std::uint64_t offset_ = 0;
    Word word_;
    Symbol fallback_ = 1;
    std::vector<SymbolBlock> blocks_;
    std::optional<BlockRule> rule_;
    Word i_word_;
    Word j_word_;
    std::vector<ExponentPair> exponents_;
    std::shared_ptr<Engine> engine_;
};

/// The law (11, 2222, 1^8, 2^16, ...): block m has symbol 1 for odd m,
/// 2 for even m, and length 2^m.
SwitchingLaw doubling_law();

/// Truncated sequence metric sum_{n<=N} min(1, |a(n) - b(n)|) / 2^n.
/// Underestimates the full metric by at most 2^-N.
double law_metric(const SwitchingLaw& a, const SwitchingLaw& b, int precision = 53);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1ULL << 27;

/// All K^n words of length n in lexicographic order.
class WordEnumerator {
public:
    WordEnumerator(int alphabet, std::size_t length, std::uint64_t budget = kDefaultEnumerationBudget);
    std::optional<Word> next();
    std::uint64_t total() const noexcept { return total_; }

private:
    int alphabet_;
    std::vector<Symbol> current_;
    bool done_ = false;
    std::uint64_t total_;
};

/// One lexicographically minimal representative per cyclic class of words
/// of length n, in lexicographic order (Fredricksen-Kessler-Maiorana).
class NecklaceEnumerator {
public:
    NecklaceEnumerator(int alphabet, std::size_t length, std::uint64_t budget = kDefaultEnumerationBudget);
    std::optional<Word> next();

private:
    bool advance();

    int alphabet_;
    std::size_t length_;
    std::vector<Symbol> a_;  // 1-indexed, symbols 0..K-1
    bool started_ = false;
    bool done_ = false;
};

std::vector<Word> enumerate_words(int alphabet, std::size_t length,
                                  std::uint64_t budget = kDefaultEnumerationBudget);
std::vector<Word> enumerate_necklaces(int alphabet, std::size_t length,
                                      std::uint64_t budget = kDefaultEnumerationBudget);

/// Longest constant run per symbol inside consecutive windows.
struct RunProfile {
    struct Window {
        std::uint64_t start;                  // first index of the window (1-based)
        std::uint64_t width;                  // may be short for the final window
        std::vector<std::uint64_t> max_run;   // index symbol - 1; 0 if absent
    };
    std::vector<Window> windows;
    std::uint64_t horizon = 0;
    std::uint64_t window_width = 0;
};

/// Windows [t, t + width) with stride `width` covering 1..horizon; the last
/// window is truncated at the horizon.
RunProfile run_profile(const SwitchingLaw& law, std::uint64_t horizon, std::uint64_t window_width);

}  // namespace chaoslab
