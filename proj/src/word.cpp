#include "chaoslab/word.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

void validate(const std::vector<Symbol>& symbols, int alphabet) {
    if (alphabet < 1) throw InvalidInput("alphabet size must be >= 1");
    for (Symbol s : symbols) {
        if (s < 1 || s > alphabet) {
            throw InvalidInput("symbol " + std::to_string(s) + " outside alphabet 1.." + std::to_string(alphabet));
        }
    }
}

}  // namespace

Word::Word(std::vector<Symbol> symbols, int alphabet) : symbols_(std::move(symbols)), alphabet_(alphabet) {
    validate(symbols_, alphabet_);
}

Word::Word(std::initializer_list<Symbol> symbols, int alphabet) : symbols_(symbols), alphabet_(alphabet) {
    validate(symbols_, alphabet_);
}

Word Word::empty(int alphabet) { return Word(std::vector<Symbol>{}, alphabet); }

Word Word::constant(Symbol symbol, std::size_t count, int alphabet) {
    return Word(std::vector<Symbol>(count, symbol), alphabet);
}

Symbol Word::at(std::size_t n) const {
    if (n < 1 || n > symbols_.size()) throw InvalidInput("word index out of range");
    return symbols_[n - 1];
}

Word Word::concat(const Word& tail) const {
    if (tail.alphabet_ != alphabet_) throw InvalidInput("cannot concatenate words over different alphabets");
    Word out = *this;
    out.symbols_.insert(out.symbols_.end(), tail.symbols_.begin(), tail.symbols_.end());
    return out;
}

Word Word::power(std::size_t times) const {
    Word out = Word::empty(alphabet_);
    out.symbols_.reserve(symbols_.size() * times);
    for (std::size_t i = 0; i < times; ++i) out.symbols_.insert(out.symbols_.end(), symbols_.begin(), symbols_.end());
    return out;
}

Word Word::rotated() const {
    Word out = *this;
    if (!out.symbols_.empty()) std::rotate(out.symbols_.begin(), out.symbols_.begin() + 1, out.symbols_.end());
    return out;
}

Word Word::prefix(std::size_t n) const {
    Word out = *this;
    if (n < out.symbols_.size()) out.symbols_.resize(n);
    return out;
}

std::string Word::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(symbols_[i]);
    }
    return out;
}

Word Word::parse(const std::string& text, int alphabet) {
    std::vector<Symbol> symbols;
    std::size_t i = 0;
    while (i < text.size()) {
        const char ch = text[i];
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw InvalidInput("cannot parse word '" + text + "': unexpected character '" + std::string(1, ch) + "'");
        }
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        symbols.push_back(std::stoi(text.substr(i, j - i)));
        i = j;
    }
    return Word(std::move(symbols), alphabet);
}

}  // namespace chaoslab
