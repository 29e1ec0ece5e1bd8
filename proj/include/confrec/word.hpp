#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace confrec {

using Symbol = std::uint16_t;

// Finite word over the alphabet {0, ..., |D|-1}. The empty word stands for the
// identity composition.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Symbol> s) : symbols_(s) {}
    explicit Word(std::vector<Symbol> s) : symbols_(std::move(s)) {}

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    std::span<const Symbol> symbols() const { return symbols_; }
    const std::vector<Symbol>& vec() const { return symbols_; }

    void push_back(Symbol s) { symbols_.push_back(s); }
    void reserve(std::size_t n) { symbols_.reserve(n); }

    // Suffix starting at position `from` (the word after `from` shifts).
    Word drop(std::size_t from) const;
    Word take(std::size_t n) const;
    Word concat(const Word& other) const;
    // I^k
    Word power(std::size_t k) const;
    // First m symbols of I^infinity.
    Word periodic_prefix(std::size_t m) const;

    bool is_prefix_of(const Word& other) const;

    // Largest symbol + 1, or 0 for the empty word.
    std::size_t max_symbol_bound() const;

    // "0,1,2" form, or "" for the empty word.
    std::string to_string() const;

    // Accepts "0,1,0", "010" (single-digit symbols), or "", "-", "empty".
    static Word parse(std::string_view text);

    // i-th word of D^n in lexicographic order (most significant symbol first).
    static Word from_index(std::uint64_t index, std::size_t alphabet, std::size_t length);

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& a, const Word& b) { return a.symbols_ <=> b.symbols_; }

private:
    std::vector<Symbol> symbols_;
};

// True iff neither word is a prefix of the other.
inline bool prefix_incomparable(const Word& a, const Word& b) { return !a.is_prefix_of(b) && !b.is_prefix_of(a); }

// |D|^n, or 0 when it exceeds `cap`.
std::uint64_t word_count(std::size_t alphabet, std::size_t length, std::uint64_t cap);

} // namespace confrec
