#include "confrec/word.hpp"

#include "confrec/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace confrec {

Word Word::drop(std::size_t from) const
{
    if (from >= symbols_.size()) return {};
    return Word(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(from), symbols_.end()));
}

Word Word::take(std::size_t n) const
{
    n = std::min(n, symbols_.size());
    return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::concat(const Word& other) const
{
    std::vector<Symbol> out;
    out.reserve(size() + other.size());
    out.insert(out.end(), symbols_.begin(), symbols_.end());
    out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
    return Word(std::move(out));
}

Word Word::power(std::size_t k) const { return periodic_prefix(k * size()); }

Word Word::periodic_prefix(std::size_t m) const
{
    if (m > 0 && symbols_.empty()) {
        throw DomainError("periodic prefix of the empty word");
    }
    std::vector<Symbol> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = symbols_[i % symbols_.size()];
    return Word(std::move(out));
}

bool Word::is_prefix_of(const Word& other) const
{
    return size() <= other.size() && std::equal(symbols_.begin(), symbols_.end(), other.symbols_.begin());
}

std::size_t Word::max_symbol_bound() const
{
    std::size_t m = 0;
    for (Symbol s : symbols_) m = std::max<std::size_t>(m, std::size_t{s} + 1);
    return m;
}

std::string Word::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(symbols_[i]);
    }
    return out;
}

Word Word::parse(std::string_view text)
{
    if (text.empty() || text == "-" || text == "empty") return {};
    std::vector<Symbol> out;
    const bool has_comma = text.find(',') != std::string_view::npos;
    if (!has_comma) {
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw ValidationError("invalid word '" + std::string(text) + "'");
            }
            out.push_back(static_cast<Symbol>(c - '0'));
        }
        return Word(std::move(out));
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        const std::string_view tok = text.substr(pos, end - pos);
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || value > 0xFFFF) {
            throw ValidationError("invalid word '" + std::string(text) + "'");
        }
        out.push_back(static_cast<Symbol>(value));
        pos = end + 1;
    }
    return Word(std::move(out));
}

Word Word::from_index(std::uint64_t index, std::size_t alphabet, std::size_t length)
{
    std::vector<Symbol> out(length);
    for (std::size_t k = length; k-- > 0;) {
        out[k] = static_cast<Symbol>(index % alphabet);
        index /= alphabet;
    }
    return Word(std::move(out));
}

std::uint64_t word_count(std::size_t alphabet, std::size_t length, std::uint64_t cap)
{
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < length; ++i) {
        if (n > cap / alphabet) return 0;
        n *= alphabet;
    }
    return n > cap ? 0 : n;
}

} // namespace confrec
