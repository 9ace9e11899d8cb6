#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace chaoslab {

/// Switching symbol, 1-based: the alphabet is {1, ..., K}.
using Symbol = int;

/// Finite word over {1..K}. Ordering is lexicographic on the symbols.
class Word {
public:
    Word() = default;
    Word(std::vector<Symbol> symbols, int alphabet);
    Word(std::initializer_list<Symbol> symbols, int alphabet);

    /// Empty word over an alphabet of size K.
    static Word empty(int alphabet);

    /// `symbol` repeated `count` times.
    static Word constant(Symbol symbol, std::size_t count, int alphabet);

    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    int alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }

    /// 1-based access, matching the sequence index convention.
    Symbol at(std::size_t n) const;
    Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }

    Word concat(const Word& tail) const;
    Word power(std::size_t times) const;
    /// Cyclic left rotation by one symbol.
    Word rotated() const;
    /// First `n` symbols (or all of them if shorter).
    Word prefix(std::size_t n) const;

    /// "1,2,2"; the empty word renders as "".
    std::string to_string() const;
    /// Accepts "1,2,2", "1 2 2" or "" (empty).
    static Word parse(const std::string& text, int alphabet);

    friend bool operator==(const Word& a, const Word& b) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        return a.symbols_ <=> b.symbols_;
    }

private:
    std::vector<Symbol> symbols_;
    int alphabet_ = 0;
};

}  // namespace chaoslab
