#pragma once

#include "confrec/ifs.hpp"
#include "confrec/rate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace confrec {

struct DichotomyConfig {
    double gamma = 0.0;
    std::size_t points = 10000;
    std::size_t length = 64;  // L
    int n_max = 25;
    std::uint64_t seed = 1;
    std::size_t block = 1;
    // Windows [lo, hi] for the "any hit" fractions.
    int early_lo = 1, early_hi = 10;
    int late_lo = 15, late_hi = 25;
    // Range of n for the rate band.
    int band_lo = 5, band_hi = 25;
};

struct DichotomyRow {
    int n = 0;
    double empirical_hit_rate = 0.0;
    double unknown_rate = 0.0;
    double phi_gamma = 0.0;
    double rate_ratio = 0.0;  // empirical_hit_rate / phi_gamma
    double mean_cumulative_hits = 0.0;
};

struct DichotomyPoint {
    std::size_t index = 0;
    std::uint32_t hit_count = 0;
    std::int32_t first_hit = 0;
};

struct DichotomySummary {
    bool divergent = false;
    std::string summability;
    double fraction_with_hit_early = 0.0;
    double fraction_with_hit_late = 0.0;
    double unknown_fraction = 0.0;
    bool unknown_flag = false;  // unknown fraction above 5%
    double band_min = 0.0;
    double band_max = 0.0;
    double mean_total_hits = 0.0;
};

struct DichotomyReport {
    DichotomyConfig config;
    std::string phi;
    std::vector<DichotomyRow> rows;
    std::vector<DichotomyPoint> points;
    DichotomySummary summary;
};

DichotomyReport run_dichotomy(const IfsSpec& ifs, const RateFunction& phi, const DichotomyConfig& cfg);

// Fraction of samples with a hit for some n in [lo, hi] (n <= 64).
double window_fraction(const std::vector<std::uint64_t>& masks, int lo, int hi);

} // namespace confrec
