#include "confrec/symbolic.hpp"

#include "confrec/errors.hpp"
#include "confrec/kernels.hpp"
#include "confrec/sum.hpp"
#include "word_walk.hpp"

#include <algorithm>
#include <cmath>

namespace confrec {

Word shift(const Word& coding)
{
    if (coding.empty()) throw DomainError("shift of the empty coding");
    return coding.drop(1);
}

Word shift_n(const Word& coding, std::size_t n)
{
    if (n > coding.size()) throw DomainError("shift beyond the coding length");
    return coding.drop(n);
}

BlockSampler::BlockSampler(const IfsSpec& ifs, double gamma, std::size_t block)
    : alphabet_(ifs.alphabet_size()), block_(block)
{
    if (block == 0) throw DomainError("block length must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be nonnegative");
    if (word_count(alphabet_, block, std::uint64_t{1} << 20) == 0) throw ResourceError("too many blocks");

    // Similarity digits: r_i^gamma, exactly the natural measure's digit law.
    // Otherwise the sup-derivative bound of each block.
    const detail::DerivWalker walker(ifs);
    walker.for_each(Word{}, block, [&](const std::vector<Symbol>&, Interval d) {
        prob_.push_back(std::pow(d.hi, gamma));
    });
    CompensatedSum total;
    for (double p : prob_) total += p;
    const double z = total.value();
    CompensatedSum run;
    for (double& p : prob_) {
        p /= z;
        run += p;
        cdf_.push_back(run.value());
    }
    cdf_.back() = 1.0;
}

Word BlockSampler::draw(CounterRng& rng, std::size_t length) const
{
    if (length == 0) throw DomainError("coding length must be positive");
    if (length % block_ != 0) throw DomainError("coding length must be a multiple of the block length");
    std::vector<Symbol> out(length);
    for (std::size_t pos = 0; pos < length; pos += block_) {
        const double u = rng.uniform();
        const auto idx = static_cast<std::uint64_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
        std::uint64_t x = std::min<std::uint64_t>(idx, cdf_.size() - 1);
        for (std::size_t k = block_; k-- > 0;) {
            out[pos + k] = static_cast<Symbol>(x % alphabet_);
            x /= alphabet_;
        }
    }
    return Word(std::move(out));
}

Word BlockSampler::draw(std::uint64_t seed, std::uint64_t index, std::size_t length) const
{
    CounterRng rng(seed, index);
    return draw(rng, length);
}

std::vector<CodingSample> sample_codings(const IfsSpec& ifs, double gamma, std::size_t depth, std::size_t count,
                                         std::uint64_t seed, std::size_t block)
{
    if (depth == 0 || count == 0) throw DomainError("depth and count must be positive");
    const BlockSampler sampler(ifs, gamma, block);
    std::vector<CodingSample> out(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = {sampler.draw(seed, k, depth), gamma, seed, k};
    }
    return out;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Hit:
        return "HIT";
    case Verdict::Miss:
        return "MISS";
    default:
        return "UNKNOWN";
    }
}

HitVerdict classify_gap(int n, Interval gap, double phi_n)
{
    HitVerdict out;
    out.n = n;
    out.gap = gap;
    if (gap.hi < phi_n) {
        out.verdict = Verdict::Hit;
    } else if (gap.lo >= phi_n) {
        out.verdict = Verdict::Miss;
    } else {
        out.verdict = Verdict::Unknown;
    }
    return out;
}

HitVerdict classify_recurrence_event(const IfsSpec& ifs, const Word& coding, int n, const RateFunction& phi)
{
    if (n < 1 || static_cast<std::size_t>(n) >= coding.size()) {
        throw DomainError("need 1 <= n < length(coding), got n = " + std::to_string(n));
    }
    const Box x = eval_pi(ifs, coding);
    const Box tx = eval_pi(ifs, shift_n(coding, static_cast<std::size_t>(n)));
    return classify_gap(n, distance_range(x, tx), phi(n));
}

OrbitHits orbit_hits(const IfsSpec& ifs, const Word& coding, const RateFunction& phi, int n_max)
{
    if (n_max < 1 || static_cast<std::size_t>(n_max) >= coding.size()) {
        throw DomainError("need 1 <= n_max < length(coding)");
    }
    const std::vector<Box> boxes = suffix_boxes(ifs, coding);
    OrbitHits out;
    for (int n = 1; n <= n_max; ++n) {
        const HitVerdict v = classify_gap(n, distance_range(boxes[0], boxes[static_cast<std::size_t>(n)]), phi(n));
        out.verdicts.push_back(v);
        if (v.verdict == Verdict::Hit) ++out.hits;
        else if (v.verdict == Verdict::Miss) ++out.misses;
        else ++out.unknown;
    }
    return out;
}

} // namespace confrec
