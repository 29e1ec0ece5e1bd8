#include "confrec/experiments.hpp"

#include "confrec/errors.hpp"
#include "confrec/kernels.hpp"
#include "confrec/symbolic.hpp"

#include <algorithm>
#include <limits>

namespace confrec {

double window_fraction(const std::vector<std::uint64_t>& masks, int lo, int hi)
{
    if (masks.empty()) return 0.0;
    lo = std::max(lo, 1);
    hi = std::min(hi, 64);
    if (lo > hi) return 0.0;
    std::uint64_t window = 0;
    for (int n = lo; n <= hi; ++n) window |= std::uint64_t{1} << (n - 1);
    std::size_t c = 0;
    for (std::uint64_t m : masks) c += (m & window) != 0;
    return static_cast<double>(c) / static_cast<double>(masks.size());
}

DichotomyReport run_dichotomy(const IfsSpec& ifs, const RateFunction& phi, const DichotomyConfig& cfg)
{
    if (cfg.points == 0) throw DomainError("points must be positive");
    if (cfg.n_max < 1 || cfg.n_max > 64) throw DomainError("n_max must be in [1, 64]");
    if (cfg.length <= static_cast<std::size_t>(cfg.n_max)) throw DomainError("L must exceed n_max");

    const BlockSampler sampler(ifs, cfg.gamma, cfg.block);
    const auto tally =
        kernels::parallel::orbit_experiment(ifs, sampler, phi, cfg.length, cfg.points, cfg.seed, cfg.n_max);

    DichotomyReport rep;
    rep.config = cfg;
    rep.phi = phi.describe();
    const double N = static_cast<double>(cfg.points);
    double cumulative = 0.0;
    std::uint64_t unknown_total = 0;
    rep.summary.band_min = std::numeric_limits<double>::infinity();
    rep.summary.band_max = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        DichotomyRow row;
        row.n = n;
        row.empirical_hit_rate = static_cast<double>(tally.hits[k]) / N;
        row.unknown_rate = static_cast<double>(tally.unknown[k]) / N;
        row.phi_gamma = phi.phi_gamma(n);
        row.rate_ratio = row.empirical_hit_rate / row.phi_gamma;
        cumulative += row.empirical_hit_rate;
        row.mean_cumulative_hits = cumulative;
        unknown_total += tally.unknown[k];
        if (n >= cfg.band_lo && n <= cfg.band_hi) {
            rep.summary.band_min = std::min(rep.summary.band_min, row.rate_ratio);
            rep.summary.band_max = std::max(rep.summary.band_max, row.rate_ratio);
        }
        rep.rows.push_back(row);
    }
    if (rep.summary.band_max == 0.0) rep.summary.band_min = 0.0;
    for (std::size_t i = 0; i < cfg.points; ++i) rep.points.push_back({i, tally.point_hits[i], tally.first_hit[i]});

    rep.summary.divergent = phi.divergent();
    rep.summary.summability = phi.summability_note();
    rep.summary.fraction_with_hit_early = window_fraction(tally.hit_mask, cfg.early_lo, cfg.early_hi);
    rep.summary.fraction_with_hit_late = window_fraction(tally.hit_mask, cfg.late_lo, cfg.late_hi);
    rep.summary.unknown_fraction = static_cast<double>(unknown_total) / (N * cfg.n_max);
    rep.summary.unknown_flag = rep.summary.unknown_fraction > 0.05;
    rep.summary.mean_total_hits = cumulative;
    return rep;
}

} // namespace confrec
