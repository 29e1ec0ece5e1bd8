#pragma once

#include "confrec/ifs.hpp"
#include "confrec/rate.hpp"
#include "confrec/rng.hpp"

#include <cstdint>
#include <vector>

namespace confrec {

// T on coding space: drop the first symbol.
Word shift(const Word& coding);
Word shift_n(const Word& coding, std::size_t n);

struct CodingSample {
    Word digits;
    double weight_exponent = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

// Draws codings in i.i.d. blocks of length b; block I has probability
// proportional to hi(|phi_I'|)^gamma.
class BlockSampler {
public:
    BlockSampler(const IfsSpec& ifs, double gamma, std::size_t block);

    std::size_t block() const { return block_; }
    const std::vector<double>& probabilities() const { return prob_; }

    Word draw(CounterRng& rng, std::size_t length) const;
    Word draw(std::uint64_t seed, std::uint64_t index, std::size_t length) const;

private:
    std::size_t alphabet_;
    std::size_t block_;
    std::vector<double> prob_;
    std::vector<double> cdf_;
};

std::vector<CodingSample> sample_codings(const IfsSpec& ifs, double gamma, std::size_t depth, std::size_t count,
                                         std::uint64_t seed, std::size_t block = 1);

enum class Verdict { Hit, Miss, Unknown };

const char* to_string(Verdict v);

struct HitVerdict {
    int n = 0;
    Verdict verdict = Verdict::Unknown;
    Interval gap;  // encloses |T^n x - x|
};

HitVerdict classify_gap(int n, Interval gap, double phi_n);

HitVerdict classify_recurrence_event(const IfsSpec& ifs, const Word& coding, int n, const RateFunction& phi);

struct OrbitHits {
    std::vector<HitVerdict> verdicts;  // n = 1..n_max
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t unknown = 0;
};

OrbitHits orbit_hits(const IfsSpec& ifs, const Word& coding, const RateFunction& phi, int n_max);

} // namespace confrec
