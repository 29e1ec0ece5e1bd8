#pragma once

// Hot loops in two versions: serial:: is the straightforward reference,
// parallel:: uses OpenMP with a work split fixed by word prefixes (not by the
// thread count) and chunk results combined in order, so both are deterministic.

#include "confrec/ifs.hpp"
#include "confrec/rate.hpp"
#include "confrec/recurrence_sets.hpp"
#include "confrec/symbolic.hpp"

#include <cstdint>
#include <vector>

namespace confrec::kernels {

struct PartitionSums {
    double lower = 0.0;  // sum of inf |phi_I'|^s
    double upper = 0.0;  // sum of sup |phi_I'|^s
    std::uint64_t words = 0;
};

// Per-n aggregate of an orbit experiment.
struct OrbitTally {
    std::vector<std::uint64_t> hits;     // index n - 1
    std::vector<std::uint64_t> unknown;
    std::vector<std::uint32_t> point_hits;   // per sample, hits over n = 1..n_max
    std::vector<std::int32_t> first_hit;     // per sample, 0 when none
    std::vector<std::uint64_t> hit_mask;     // per sample, bit n - 1 set on a hit (n <= 64)
};

void set_threads(int threads);
int max_threads();

namespace serial {

// Words I = prefix + (extra symbols).
PartitionSums partition_sums(const IfsSpec& ifs, const Word& prefix, std::size_t extra, double s);

std::vector<InnerCylinder> inner_cylinders(const IfsSpec& ifs, const Word& root, std::size_t n, double rho);

// sum over a in A, b in B of nu(X_a cap X_b).
Interval family_intersection(const MeasureModel& model, const std::vector<Word>& a, const std::vector<Word>& b);

OrbitTally orbit_experiment(const IfsSpec& ifs, const BlockSampler& sampler, const RateFunction& phi,
                            std::size_t length, std::size_t count, std::uint64_t seed, int n_max);

// counts[f] = samples whose coding starts with a target of family f; last
// entry counts samples in families[0] and families[1]; one more for the union.
std::vector<std::uint64_t> membership_counts(const BlockSampler& sampler, const std::vector<std::vector<Word>>& families,
                                             std::size_t length, std::size_t count, std::uint64_t seed);

} // namespace serial

namespace parallel {

PartitionSums partition_sums(const IfsSpec& ifs, const Word& prefix, std::size_t extra, double s);

std::vector<InnerCylinder> inner_cylinders(const IfsSpec& ifs, const Word& root, std::size_t n, double rho);

Interval family_intersection(const MeasureModel& model, const std::vector<Word>& a, const std::vector<Word>& b);

OrbitTally orbit_experiment(const IfsSpec& ifs, const BlockSampler& sampler, const RateFunction& phi,
                            std::size_t length, std::size_t count, std::uint64_t seed, int n_max);

std::vector<std::uint64_t> membership_counts(const BlockSampler& sampler, const std::vector<std::vector<Word>>& families,
                                             std::size_t length, std::size_t count, std::uint64_t seed);

} // namespace parallel

} // namespace confrec::kernels
