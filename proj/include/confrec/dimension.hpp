#pragma once

#include "confrec/ifs.hpp"

#include <cstdint>
#include <vector>

namespace confrec {

inline constexpr std::uint64_t kDefaultWordBudget = std::uint64_t{1} << 24;

struct PressureEstimate {
    double s = 0.0;
    int depth = 0;
    double value_upper = 0.0;  // (1/n) log sum hi^s, an upper bound for P(s)
    double value_lower = 0.0;  // (1/n) log sum lo^s, a lower bound for P(s)
    Interval partition_sum;    // sum over D^n of |phi_I'|^s
};

enum class GammaMethod { Moran, PressureBisection };

const char* to_string(GammaMethod m);

struct GammaResult {
    Interval gamma;
    GammaMethod method = GammaMethod::Moran;
    int depth_used = 0;
};

PressureEstimate pressure_estimate(const IfsSpec& ifs, double s, int depth,
                                   std::uint64_t budget = kDefaultWordBudget);

// Similarity systems take the Moran path regardless of depth. Otherwise the
// bounds of every depth 1..depth are combined, so enclosures shrink
// monotonically (nested) as depth grows.
GammaResult solve_gamma(const IfsSpec& ifs, double tol, int depth, std::uint64_t budget = kDefaultWordBudget);

std::vector<Interval> partition_sum_check(const IfsSpec& ifs, double gamma, const std::vector<int>& depths,
                                          std::uint64_t budget = kDefaultWordBudget);

// sum_i r_i^s - 1 for similarity systems.
double moran_function(const IfsSpec& ifs, double s);

} // namespace confrec
