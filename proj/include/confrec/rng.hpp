#pragma once

#include <cstdint>

namespace confrec {

// Counter-based generator: output k of stream (seed, stream) is
// splitmix64_mix(key + k * golden), key = mix(seed ^ mix(stream + golden)).
// Any sample can be regenerated from (seed, index) alone.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kGolden))) {}

    constexpr std::uint64_t next() { return mix(key_ + (++counter_) * kGolden); }

    // Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace confrec
