#include "confrec/kernels.hpp"

#include "confrec/errors.hpp"
#include "confrec/sum.hpp"
#include "word_walk.hpp"

#include <algorithm>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace confrec::kernels {

namespace {

// Prefix length used to cut an enumeration into chunks.
std::size_t chunk_depth(std::size_t alphabet, std::size_t extra)
{
    std::size_t p = 0;
    std::uint64_t chunks = 1;
    while (p < extra && chunks < 256) {
        chunks *= alphabet;
        ++p;
    }
    return p;
}

// Rethrows the first exception captured inside a parallel region.
class ErrorSlot {
public:
    template <class F>
    void run(F&& f)
    {
        try {
            f();
        } catch (...) {
#pragma omp critical(confrec_error_slot)
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const
    {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
};

Interval interval_sum(const std::vector<Interval>& xs)
{
    Interval s = Interval::point(0.0);
    for (const Interval& x : xs) s += x;
    return s;
}

std::vector<Word> sorted(std::vector<Word> w)
{
    std::sort(w.begin(), w.end());
    return w;
}

// Index of the target that is a prefix of `coding`, or -1.
long find_prefix(const std::vector<Word>& sorted_targets, const Word& coding)
{
    auto it = std::upper_bound(sorted_targets.begin(), sorted_targets.end(), coding);
    if (it == sorted_targets.begin()) return -1;
    --it;
    return it->is_prefix_of(coding) ? static_cast<long>(it - sorted_targets.begin()) : -1;
}

void tally_sample(const IfsSpec& ifs, const BlockSampler& sampler, const RateFunction& phi, std::size_t length,
                  std::uint64_t seed, std::uint64_t index, int n_max, std::vector<std::uint64_t>& hits,
                  std::vector<std::uint64_t>& unknown, std::uint32_t& point_hits, std::int32_t& first_hit,
                  std::uint64_t& mask)
{
    const Word coding = sampler.draw(seed, index, length);
    const std::vector<Box> boxes = suffix_boxes(ifs, coding);
    point_hits = 0;
    first_hit = 0;
    mask = 0;
    for (int n = 1; n <= n_max; ++n) {
        const HitVerdict v =
            classify_gap(n, distance_range(boxes[0], boxes[static_cast<std::size_t>(n)]), phi(n));
        if (v.verdict == Verdict::Hit) {
            ++hits[static_cast<std::size_t>(n - 1)];
            ++point_hits;
            if (first_hit == 0) first_hit = n;
            if (n <= 64) mask |= std::uint64_t{1} << (n - 1);
        } else if (v.verdict == Verdict::Unknown) {
            ++unknown[static_cast<std::size_t>(n - 1)];
        }
    }
}

void check_orbit_args(std::size_t length, int n_max)
{
    if (n_max < 1 || static_cast<std::size_t>(n_max) >= length) {
        throw DomainError("orbit experiment needs 1 <= n_max < L");
    }
}

void count_membership(const std::vector<std::vector<Word>>& fams, const Word& coding, std::vector<std::uint64_t>& c)
{
    bool any = false;
    bool first_two = fams.size() >= 2;
    for (std::size_t f = 0; f < fams.size(); ++f) {
        const bool in = find_prefix(fams[f], coding) >= 0;
        if (in) ++c[f];
        any = any || in;
        if (f < 2 && !in) first_two = false;
    }
    if (first_two) ++c[fams.size()];
    if (any) ++c[fams.size() + 1];
}

std::vector<std::vector<Word>> sorted_families(const std::vector<std::vector<Word>>& families)
{
    std::vector<std::vector<Word>> out;
    for (const auto& f : families) out.push_back(sorted(f));
    return out;
}

} // namespace

void set_threads(int threads)
{
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

PartitionSums partition_sums(const IfsSpec& ifs, const Word& prefix, std::size_t extra, double s)
{
    const detail::DerivWalker walker(ifs);
    CompensatedSum lo, hi;
    std::uint64_t words = 0;
    walker.for_each(prefix, extra, [&](const std::vector<Symbol>&, Interval d) {
        lo += std::pow(d.lo, s);
        hi += std::pow(d.hi, s);
        ++words;
    });
    return {lo.value(), hi.value(), words};
}

std::vector<InnerCylinder> inner_cylinders(const IfsSpec& ifs, const Word& root, std::size_t n, double rho)
{
    if (n < root.size()) throw DomainError("n must be at least |root|");
    const std::size_t extra = n - root.size();
    const std::uint64_t count = word_count(ifs.alphabet_size(), extra, ~std::uint64_t{0});
    std::vector<InnerCylinder> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        out.push_back(find_inner_cylinder(ifs, root.concat(Word::from_index(i, ifs.alphabet_size(), extra)), rho));
    }
    return out;
}

Interval family_intersection(const MeasureModel& model, const std::vector<Word>& a, const std::vector<Word>& b)
{
    Interval total = Interval::point(0.0);
    for (const Word& x : a) {
        for (const Word& y : b) total += cylinder_intersection(model, x, y);
    }
    return total;
}

OrbitTally orbit_experiment(const IfsSpec& ifs, const BlockSampler& sampler, const RateFunction& phi,
                            std::size_t length, std::size_t count, std::uint64_t seed, int n_max)
{
    check_orbit_args(length, n_max);
    OrbitTally t;
    t.hits.assign(static_cast<std::size_t>(n_max), 0);
    t.unknown.assign(static_cast<std::size_t>(n_max), 0);
    t.point_hits.assign(count, 0);
    t.first_hit.assign(count, 0);
    t.hit_mask.assign(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
        tally_sample(ifs, sampler, phi, length, seed, i, n_max, t.hits, t.unknown, t.point_hits[i], t.first_hit[i],
                     t.hit_mask[i]);
    }
    return t;
}

std::vector<std::uint64_t> membership_counts(const BlockSampler& sampler, const std::vector<std::vector<Word>>& families,
                                             std::size_t length, std::size_t count, std::uint64_t seed)
{
    const auto fams = sorted_families(families);
    std::vector<std::uint64_t> c(fams.size() + 2, 0);
    for (std::size_t i = 0; i < count; ++i) count_membership(fams, sampler.draw(seed, i, length), c);
    return c;
}

} // namespace serial

namespace parallel {

PartitionSums partition_sums(const IfsSpec& ifs, const Word& prefix, std::size_t extra, double s)
{
    const std::size_t p = chunk_depth(ifs.alphabet_size(), extra);
    const std::uint64_t chunks = word_count(ifs.alphabet_size(), p, ~std::uint64_t{0});
    std::vector<PartitionSums> part(chunks);
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        err.run([&] {
            const Word head = prefix.concat(Word::from_index(static_cast<std::uint64_t>(c), ifs.alphabet_size(), p));
            part[static_cast<std::size_t>(c)] = serial::partition_sums(ifs, head, extra - p, s);
        });
    }
    err.rethrow();
    CompensatedSum lo, hi;
    PartitionSums out;
    for (const PartitionSums& x : part) {
        lo += x.lower;
        hi += x.upper;
        out.words += x.words;
    }
    out.lower = lo.value();
    out.upper = hi.value();
    return out;
}

std::vector<InnerCylinder> inner_cylinders(const IfsSpec& ifs, const Word& root, std::size_t n, double rho)
{
    if (n < root.size()) throw DomainError("n must be at least |root|");
    const std::size_t extra = n - root.size();
    const std::uint64_t count = word_count(ifs.alphabet_size(), extra, ~std::uint64_t{0});
    std::vector<InnerCylinder> out(count);
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
        err.run([&] {
            const Word base = root.concat(Word::from_index(static_cast<std::uint64_t>(i), ifs.alphabet_size(), extra));
            out[static_cast<std::size_t>(i)] = find_inner_cylinder(ifs, base, rho);
        });
    }
    err.rethrow();
    return out;
}

Interval family_intersection(const MeasureModel& model, const std::vector<Word>& a, const std::vector<Word>& b)
{
    // A single family has pairwise incomparable words, so after sorting, the
    // words of `a` having y as a prefix form a contiguous range, and at most one
    // word of `a` (the predecessor of y) is a prefix of y.
    const std::vector<Word> sa = sorted(a);
    std::vector<Interval> nu_a(sa.size());
    for (std::size_t i = 0; i < sa.size(); ++i) nu_a[i] = model.nu(sa[i]);

    std::vector<Interval> part(b.size(), Interval::point(0.0));
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(b.size()); ++j) {
        err.run([&] {
            const Word& y = b[static_cast<std::size_t>(j)];
            Interval acc = Interval::point(0.0);
            auto lo = std::lower_bound(sa.begin(), sa.end(), y);
            // Words x >= y with y a prefix of x contribute nu(x).
            for (auto it = lo; it != sa.end() && y.is_prefix_of(*it); ++it) {
                acc += nu_a[static_cast<std::size_t>(it - sa.begin())];
            }
            // A proper prefix x of y sorts strictly before y.
            if (lo != sa.begin()) {
                const Word& x = *(lo - 1);
                if (x.is_prefix_of(y)) acc += model.nu(y);
            }
            part[static_cast<std::size_t>(j)] = acc;
        });
    }
    err.rethrow();
    return interval_sum(part);
}

OrbitTally orbit_experiment(const IfsSpec& ifs, const BlockSampler& sampler, const RateFunction& phi,
                            std::size_t length, std::size_t count, std::uint64_t seed, int n_max)
{
    check_orbit_args(length, n_max);
    const auto nm = static_cast<std::size_t>(n_max);
    OrbitTally t;
    t.hits.assign(nm, 0);
    t.unknown.assign(nm, 0);
    t.point_hits.assign(count, 0);
    t.first_hit.assign(count, 0);
    t.hit_mask.assign(count, 0);
    ErrorSlot err;
#pragma omp parallel
    {
        std::vector<std::uint64_t> hits(nm, 0), unknown(nm, 0);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            err.run([&] {
                const auto k = static_cast<std::size_t>(i);
                tally_sample(ifs, sampler, phi, length, seed, k, n_max, hits, unknown, t.point_hits[k],
                             t.first_hit[k], t.hit_mask[k]);
            });
        }
#pragma omp critical(confrec_orbit_merge)
        for (std::size_t n = 0; n < nm; ++n) {
            t.hits[n] += hits[n];
            t.unknown[n] += unknown[n];
        }
    }
    err.rethrow();
    return t;
}

std::vector<std::uint64_t> membership_counts(const BlockSampler& sampler, const std::vector<std::vector<Word>>& families,
                                             std::size_t length, std::size_t count, std::uint64_t seed)
{
    const auto fams = sorted_families(families);
    std::vector<std::uint64_t> c(fams.size() + 2, 0);
    ErrorSlot err;
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(c.size(), 0);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            err.run([&] { count_membership(fams, sampler.draw(seed, static_cast<std::uint64_t>(i), length), local); });
        }
#pragma omp critical(confrec_membership_merge)
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += local[k];
    }
    err.rethrow();
    return c;
}

} // namespace parallel

} // namespace confrec::kernels
