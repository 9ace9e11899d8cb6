#include "chaoslab/switching.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

constexpr std::uint64_t kSaturated = 1ULL << 62;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return (a >= kSaturated - b) ? kSaturated : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return (a > kSaturated / b) ? kSaturated : a * b;
}

}  // namespace

std::uint64_t BlockRule::length(std::uint64_t m) const {
    const long double geometric = static_cast<long double>(first) *
                                  std::pow(static_cast<long double>(ratio), static_cast<long double>(m - 1));
    std::uint64_t len = geometric >= static_cast<long double>(kSaturated)
                            ? kSaturated
                            : static_cast<std::uint64_t>(std::floor(geometric));
    len = sat_add(len, sat_mul(increment, m - 1));
    return std::max<std::uint64_t>(len, 1);
}

struct SwitchingLaw::Engine {
    std::vector<Segment> head;
    std::vector<std::uint64_t> head_ends;
    std::vector<Segment> cycle;
    std::vector<std::uint64_t> cycle_ends;
    std::optional<BlockRule> rule;

    mutable std::mutex mu;
    mutable std::vector<std::uint64_t> rule_ends;

    static std::vector<std::uint64_t> cumulative(const std::vector<Segment>& segs) {
        std::vector<std::uint64_t> ends;
        std::uint64_t acc = 0;
        for (const auto& s : segs) {
            acc = sat_add(acc, sat_mul(s.pattern.size(), s.repeats));
            ends.push_back(acc);
        }
        return ends;
    }

    static Symbol lookup(const std::vector<Segment>& segs, const std::vector<std::uint64_t>& ends, std::uint64_t pos) {
        const auto it = std::upper_bound(ends.begin(), ends.end(), pos);
        const std::size_t idx = static_cast<std::size_t>(it - ends.begin());
        const std::uint64_t start = idx == 0 ? 0 : ends[idx - 1];
        const Word& p = segs[idx].pattern;
        return p[static_cast<std::size_t>((pos - start) % p.size())];
    }

    // pos is 0-based.
    Symbol at(std::uint64_t pos) const {
        const std::uint64_t head_len = head_ends.empty() ? 0 : head_ends.back();
        if (pos < head_len) return lookup(head, head_ends, pos);
        pos -= head_len;
        if (!rule) return lookup(cycle, cycle_ends, pos % cycle_ends.back());

        std::lock_guard lock(mu);
        while (rule_ends.empty() || rule_ends.back() <= pos) {
            const std::uint64_t m = rule_ends.size() + 1;
            const std::uint64_t prev = rule_ends.empty() ? 0 : rule_ends.back();
            rule_ends.push_back(sat_add(prev, rule->length(m)));
        }
        const auto it = std::upper_bound(rule_ends.begin(), rule_ends.end(), pos);
        return rule->symbol(static_cast<std::uint64_t>(it - rule_ends.begin()) + 1);
    }
};

void SwitchingLaw::build_engine() {
    auto e = std::make_shared<Engine>();
    switch (kind_) {
        case Kind::Periodic:
            e->cycle.push_back({word_, 1});
            break;
        case Kind::Explicit:
            if (!word_.empty()) e->head.push_back({word_, 1});
            e->cycle.push_back({Word({fallback_}, alphabet_), 1});
            break;
        case Kind::Blocks: {
            auto& target = rule_ ? e->head : e->cycle;
            for (const auto& b : blocks_) target.push_back({Word({b.symbol}, alphabet_), b.length});
            e->rule = rule_;
            break;
        }
        case Kind::Constructed: {
            if (!word_.empty()) e->head.push_back({word_, 1});
            for (std::size_t k = 0; k + 1 < exponents_.size(); ++k) {
                e->head.push_back({i_word_, exponents_[k].contract});
                e->head.push_back({j_word_, exponents_[k].expand});
            }
            e->cycle.push_back({i_word_, exponents_.back().contract});
            e->cycle.push_back({j_word_, exponents_.back().expand});
            break;
        }
    }
    e->head_ends = Engine::cumulative(e->head);
    e->cycle_ends = Engine::cumulative(e->cycle);
    engine_ = std::move(e);
}

SwitchingLaw SwitchingLaw::periodic(Word word) {
    if (word.empty()) throw InvalidInput("periodic law needs a nonempty word");
    SwitchingLaw law;
    law.kind_ = Kind::Periodic;
    law.alphabet_ = word.alphabet();
    law.word_ = std::move(word);
    law.build_engine();
    return law;
}

SwitchingLaw SwitchingLaw::constant(Symbol symbol, int alphabet) { return periodic(Word({symbol}, alphabet)); }

SwitchingLaw SwitchingLaw::blocks(std::vector<SymbolBlock> schedule, int alphabet, std::optional<BlockRule> rule) {
    if (alphabet < 1) throw InvalidInput("alphabet size must be >= 1");
    auto check_symbol = [&](Symbol s) {
        if (s < 1 || s > alphabet) throw InvalidInput("block symbol " + std::to_string(s) + " outside alphabet");
    };
    for (const auto& b : schedule) {
        check_symbol(b.symbol);
        if (b.length == 0) throw InvalidInput("block lengths must be >= 1");
    }
    if (rule) {
        if (rule->symbols.empty()) throw InvalidInput("block rule needs at least one symbol");
        for (Symbol s : rule->symbols) check_symbol(s);
        if (rule->first == 0) throw InvalidInput("block rule first length must be >= 1");
        if (!(rule->ratio >= 1.0) || !std::isfinite(rule->ratio)) throw InvalidInput("block rule ratio must be >= 1");
    } else if (schedule.empty()) {
        throw InvalidInput("blocks law needs a schedule or a rule");
    }
    SwitchingLaw law;
    law.kind_ = Kind::Blocks;
    law.alphabet_ = alphabet;
    law.blocks_ = std::move(schedule);
    law.rule_ = std::move(rule);
    law.build_engine();
    return law;
}

SwitchingLaw SwitchingLaw::constructed(Word prefix, Word contracting, Word expanding,
                                       std::vector<ExponentPair> schedule) {
    if (contracting.empty() || expanding.empty()) throw InvalidInput("constructed law needs nonempty i and j words");
    if (schedule.empty()) throw InvalidInput("constructed law needs at least one exponent pair");
    const int k = prefix.alphabet();
    if (contracting.alphabet() != k || expanding.alphabet() != k) throw InvalidInput("alphabet mismatch");
    for (const auto& p : schedule)
        if (p.contract == 0 || p.expand == 0) throw InvalidInput("exponents must be >= 1");
    SwitchingLaw law;
    law.kind_ = Kind::Constructed;
    law.alphabet_ = k;
    law.word_ = std::move(prefix);
    law.i_word_ = std::move(contracting);
    law.j_word_ = std::move(expanding);
    law.exponents_ = std::move(schedule);
    law.build_engine();
    return law;
}

SwitchingLaw SwitchingLaw::explicit_prefix(Word prefix, std::optional<Symbol> fallback) {
    if (!fallback) {
        if (prefix.empty()) throw InvalidInput("explicit law with empty prefix needs a fallback symbol");
        fallback = prefix.symbols().back();
    }
    if (*fallback < 1 || *fallback > prefix.alphabet()) throw InvalidInput("fallback symbol outside alphabet");
    SwitchingLaw law;
    law.kind_ = Kind::Explicit;
    law.alphabet_ = prefix.alphabet();
    law.word_ = std::move(prefix);
    law.fallback_ = *fallback;
    law.build_engine();
    return law;
}

Symbol SwitchingLaw::eval(std::uint64_t n) const {
    if (n == 0) throw InvalidInput("switching laws are indexed from 1");
    return engine_->at(n - 1 + offset_);
}

Word SwitchingLaw::take(std::uint64_t count) const {
    std::vector<Symbol> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(eval(n));
    return Word(std::move(out), alphabet_);
}

SwitchingLaw SwitchingLaw::shift(std::uint64_t k) const {
    if (k == 0) return *this;
    switch (kind_) {
        case Kind::Periodic: {
            Word w = word_;
            for (std::uint64_t r = 0; r < k % word_.size(); ++r) w = w.rotated();
            return periodic(std::move(w));
        }
        case Kind::Explicit: {
            const std::size_t drop = static_cast<std::size_t>(std::min<std::uint64_t>(k, word_.size()));
            std::vector<Symbol> rest(word_.symbols().begin() + static_cast<std::ptrdiff_t>(drop), word_.symbols().end());
            return explicit_prefix(Word(std::move(rest), alphabet_), fallback_);
        }
        case Kind::Blocks:
        case Kind::Constructed: {
            SwitchingLaw out = *this;
            out.offset_ = sat_add(offset_, k);
            return out;
        }
    }
    return *this;
}

SwitchingLaw doubling_law() {
    return SwitchingLaw::blocks({}, 2, BlockRule{{1, 2}, 2, 2.0, 0});
}

double law_metric(const SwitchingLaw& a, const SwitchingLaw& b, int precision) {
    if (a.alphabet() != b.alphabet()) throw InvalidInput("law_metric: alphabet mismatch");
    if (precision < 1) throw InvalidInput("law_metric: precision must be >= 1");
    double sum = 0.0;
    for (int n = 1; n <= precision; ++n) {
        if (a.eval(static_cast<std::uint64_t>(n)) != b.eval(static_cast<std::uint64_t>(n))) sum += std::ldexp(1.0, -n);
    }
    return sum;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t checked_count(int alphabet, std::size_t length, std::uint64_t budget) {
    if (alphabet < 1) throw InvalidInput("alphabet size must be >= 1");
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < length; ++i) {
        if (total > budget / static_cast<std::uint64_t>(alphabet)) {
            throw ResourceError(std::to_string(alphabet) + "^" + std::to_string(length) +
                                " words exceed the enumeration budget of " + std::to_string(budget));
        }
        total *= static_cast<std::uint64_t>(alphabet);
    }
    if (total > budget) throw ResourceError("word count exceeds the enumeration budget");
    return total;
}

}  // namespace

WordEnumerator::WordEnumerator(int alphabet, std::size_t length, std::uint64_t budget)
    : alphabet_(alphabet), current_(length, 1), total_(checked_count(alphabet, length, budget)) {}

std::optional<Word> WordEnumerator::next() {
    if (done_) return std::nullopt;
    Word out(current_, alphabet_);
    std::size_t i = current_.size();
    while (i > 0 && current_[i - 1] == alphabet_) {
        current_[i - 1] = 1;
        --i;
    }
    if (i == 0) {
        done_ = true;
    } else {
        ++current_[i - 1];
    }
    return out;
}

NecklaceEnumerator::NecklaceEnumerator(int alphabet, std::size_t length, std::uint64_t budget)
    : alphabet_(alphabet), length_(length), a_(length + 1, 0) {
    checked_count(alphabet, length, budget);
}

bool NecklaceEnumerator::advance() {
    // FKM: a prenecklace a[1..n] with period p = i is a necklace iff p | n.
    for (;;) {
        std::size_t i = length_;
        while (i > 0 && a_[i] == alphabet_ - 1) --i;
        if (i == 0) return false;
        ++a_[i];
        for (std::size_t j = i + 1; j <= length_; ++j) a_[j] = a_[j - i];
        if (length_ % i == 0) return true;
    }
}

std::optional<Word> NecklaceEnumerator::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
    } else if (length_ == 0 || !advance()) {
        done_ = true;
        return std::nullopt;
    }
    std::vector<Symbol> symbols(a_.begin() + 1, a_.end());
    for (auto& s : symbols) s += 1;
    return Word(std::move(symbols), alphabet_);
}

std::vector<Word> enumerate_words(int alphabet, std::size_t length, std::uint64_t budget) {
    WordEnumerator e(alphabet, length, budget);
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(e.total()));
    while (auto w = e.next()) out.push_back(std::move(*w));
    return out;
}

std::vector<Word> enumerate_necklaces(int alphabet, std::size_t length, std::uint64_t budget) {
    NecklaceEnumerator e(alphabet, length, budget);
    std::vector<Word> out;
    while (auto w = e.next()) out.push_back(std::move(*w));
    return out;
}

RunProfile run_profile(const SwitchingLaw& law, std::uint64_t horizon, std::uint64_t window_width) {
    if (window_width < 1 || horizon < window_width) throw InvalidInput("run_profile needs horizon >= width >= 1");
    RunProfile profile;
    profile.horizon = horizon;
    profile.window_width = window_width;
    const auto k = static_cast<std::size_t>(law.alphabet());
    for (std::uint64_t start = 1; start <= horizon; start += window_width) {
        RunProfile::Window w{start, std::min(window_width, horizon - start + 1), std::vector<std::uint64_t>(k, 0)};
        Symbol prev = 0;
        std::uint64_t run = 0;
        for (std::uint64_t n = start; n < start + w.width; ++n) {
            const Symbol s = law.eval(n);
            run = (s == prev) ? run + 1 : 1;
            prev = s;
            auto& best = w.max_run[static_cast<std::size_t>(s - 1)];
            best = std::max(best, run);
        }
        profile.windows.push_back(std::move(w));
    }
    return profile;
}

}  // namespace chaoslab
