#include "confrec/dimension.hpp"

#include "confrec/errors.hpp"
#include "confrec/kernels.hpp"
#include "confrec/sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

namespace confrec {

namespace {

constexpr int kBisectionSteps = 50;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_budget(const IfsSpec& ifs, int depth, std::uint64_t budget)
{
    if (depth < 1) throw DomainError("depth must be at least 1");
    if (word_count(ifs.alphabet_size(), static_cast<std::size_t>(depth), budget) == 0) {
        throw ResourceError("enumeration budget exceeded: " + std::to_string(ifs.alphabet_size()) + "^" +
                            std::to_string(depth) + " words > " + std::to_string(budget));
    }
}

// Largest s on the bisection grid of [a, b] where pred holds, assuming pred is
// true below some threshold and false above it.
template <class Pred>
double bisect_last_true(double a, double b, double tol, Pred pred)
{
    for (int i = 0; i < kBisectionSteps && b - a > tol; ++i) {
        const double m = a + 0.5 * (b - a);
        if (pred(m)) {
            a = m;
        } else {
            b = m;
        }
    }
    return a;
}

template <class Pred>
double bisect_first_true(double a, double b, double tol, Pred pred)
{
    for (int i = 0; i < kBisectionSteps && b - a > tol; ++i) {
        const double m = a + 0.5 * (b - a);
        if (pred(m)) {
            b = m;
        } else {
            a = m;
        }
    }
    return b;
}

GammaResult solve_moran(const IfsSpec& ifs, double tol)
{
    GammaResult out;
    out.method = GammaMethod::Moran;
    out.depth_used = 1;
    if (ifs.alphabet_size() == 1) {
        out.gamma = Interval::point(0.0);
        return out;
    }
    // f(s) = sum r_i^s - 1 is convex and decreasing; f(0) = |D| - 1 > 0.
    double hi = 1.0;
    while (moran_function(ifs, hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw BracketError("Moran equation has no root below 1e6");
    }
    double lo = 0.0;
    // Newton from the left stays left of the root for a convex decreasing f.
    double s = 0.0;
    for (int i = 0; i < 100; ++i) {
        CompensatedSum f, df;
        for (std::size_t k = 0; k < ifs.alphabet_size(); ++k) {
            const double r = ifs.ratio(static_cast<Symbol>(k));
            const double p = std::pow(r, s);
            f += p;
            df += p * std::log(r);
        }
        const double step = (f.value() - 1.0) / df.value();
        const double next = std::clamp(s - step, lo, hi);
        if (next == s) break;
        s = next;
    }
    // Certify a bracket around s by sign checks.
    double h = std::max(tol / 4.0, 8.0 * kEps * std::max(1.0, s));
    for (int i = 0; i < 60; ++i, h *= 2.0) {
        const double a = std::max(0.0, s - h), b = s + h;
        if (moran_function(ifs, a) > 0.0 && moran_function(ifs, b) < 0.0) {
            out.gamma = {a, b};
            return out;
        }
    }
    throw BracketError("could not bracket the Moran root");
}

// Transfer operator on the shift with potential s log|phi_{w_1}'(pi(sigma w))|,
// tested against f(w) = F[w_1..w_m]. If (L f)(w) <= lambda f(w) everywhere then
// P(s) <= log lambda, and likewise from below; pi(w) lies in the cylinder box
// of w_1..w_m, which bounds |phi_i'(pi w)|.
class CylinderTransfer {
public:
    static constexpr std::uint64_t kMaxStates = std::uint64_t{1} << 16;

    CylinderTransfer(const IfsSpec& ifs, int m) : alphabet_(ifs.alphabet_size())
    {
        states_ = word_count(alphabet_, static_cast<std::size_t>(m), kMaxStates);
        const std::uint64_t stride = states_ / alphabet_;
        next_.resize(states_ * alphabet_);
        deriv_.resize(states_ * alphabet_);
        for (std::uint64_t j = 0; j < states_; ++j) {
            const Interval x = cylinder_box(ifs, Word::from_index(j, alphabet_, static_cast<std::size_t>(m))).x;
            for (std::size_t i = 0; i < alphabet_; ++i) {
                next_[j * alphabet_ + i] = static_cast<std::uint32_t>(i * stride + j / alphabet_);
                deriv_[j * alphabet_ + i] = derivative(ifs.maps()[i], x);
            }
        }
    }

    // Bounds on exp(P(s)).
    Interval growth(double s) const
    {
        const std::size_t edges = deriv_.size();
        std::vector<double> lo(edges), hi(edges);
        for (std::size_t e = 0; e < edges; ++e) {
            const Interval w = pow_nonneg(deriv_[e], s);
            lo[e] = w.lo;
            hi[e] = w.hi;
        }
        const double slack = 4.0 * kEps * static_cast<double>(alphabet_ + 4);
        const Interval upper = ratios(hi);
        const Interval lower = ratios(lo);
        return {lower.lo * (1.0 - slack), upper.hi * (1.0 + slack)};
    }

private:
    static Interval derivative(const MapDesc& d, Interval x)
    {
        if (const auto* sim = std::get_if<Similarity>(&d)) return Interval::point(sim->ratio);
        const auto& m = std::get<Moebius>(d);
        const Interval det = abs(Interval::point(m.a) * Interval::point(m.d) - Interval::point(m.b) * Interval::point(m.c));
        return det / sqr(Interval::point(m.c) * x + Interval::point(m.d));
    }

    // Power iteration for a near-Perron vector F, then min and max of (A F)_J / F_J.
    Interval ratios(const std::vector<double>& w) const
    {
        std::vector<double> f(states_, 1.0), g(states_);
        for (int it = 0; it < 200; ++it) {
            double top = 0.0;
            for (std::uint64_t j = 0; j < states_; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < alphabet_; ++i) acc += w[j * alphabet_ + i] * f[next_[j * alphabet_ + i]];
                g[j] = acc;
                top = std::max(top, acc);
            }
            for (std::uint64_t j = 0; j < states_; ++j) f[j] = g[j] / top;
        }
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
        for (std::uint64_t j = 0; j < states_; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < alphabet_; ++i) acc += w[j * alphabet_ + i] * f[next_[j * alphabet_ + i]];
            rmin = std::min(rmin, acc / f[j]);
            rmax = std::max(rmax, acc / f[j]);
        }
        return {rmin, rmax};
    }

    std::size_t alphabet_;
    std::uint64_t states_ = 0;
    std::vector<std::uint32_t> next_;
    std::vector<Interval> deriv_;
};

} // namespace

const char* to_string(GammaMethod m) { return m == GammaMethod::Moran ? "Moran" : "PressureBisection"; }

double moran_function(const IfsSpec& ifs, double s)
{
    if (!ifs.all_similarity()) throw DomainError("Moran equation needs a similarity system");
    CompensatedSum f;
    for (std::size_t k = 0; k < ifs.alphabet_size(); ++k) f += std::pow(ifs.ratio(static_cast<Symbol>(k)), s);
    return f.value() - 1.0;
}

PressureEstimate pressure_estimate(const IfsSpec& ifs, double s, int depth, std::uint64_t budget)
{
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("s must be nonnegative");
    check_budget(ifs, depth, budget);
    const auto sums = kernels::parallel::partition_sums(ifs, Word{}, static_cast<std::size_t>(depth), s);
    PressureEstimate out;
    out.s = s;
    out.depth = depth;
    out.value_upper = std::log(sums.upper) / depth;
    out.value_lower = std::log(sums.lower) / depth;
    // pow and the summation are round-to-nearest; widen by a few ulps per term.
    const double slack = 4.0 * kEps * (depth + 4);
    out.partition_sum = {round_down(sums.lower * (1.0 - slack)), round_up(sums.upper * (1.0 + slack))};
    return out;
}

GammaResult solve_gamma(const IfsSpec& ifs, double tol, int depth, std::uint64_t budget)
{
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    if (ifs.all_similarity()) return solve_moran(ifs, tol);
    check_budget(ifs, depth, budget);

    // Transfer bounds at every cylinder depth up to `depth` that fits, then
    // P(s) <= value_upper(k) and P(s) >= value_lower(k) for every k.
    std::vector<CylinderTransfer> transfers;
    for (int k = 1; k <= depth; ++k) {
        if (word_count(ifs.alphabet_size(), static_cast<std::size_t>(k), CylinderTransfer::kMaxStates) == 0) break;
        transfers.emplace_back(ifs, k);
    }
    auto certified_positive = [&](double s) {
        for (auto t = transfers.rbegin(); t != transfers.rend(); ++t) {
            if (t->growth(s).lo > 1.0) return true;
        }
        for (int k = 1; k <= depth; ++k) {
            if (pressure_estimate(ifs, s, k, budget).value_lower > 0.0) return true;
        }
        return false;
    };
    auto certified_negative = [&](double s) {
        for (auto t = transfers.rbegin(); t != transfers.rend(); ++t) {
            if (t->growth(s).hi < 1.0) return true;
        }
        for (int k = depth; k >= 1; --k) {
            if (pressure_estimate(ifs, s, k, budget).value_upper < 0.0) return true;
        }
        return false;
    };

    // Search interval depends on the system only, so every depth bisects on
    // the same grid.
    double s_max = std::max(1.0, static_cast<double>(ifs.dim()));
    while (!(pressure_estimate(ifs, s_max, 1, budget).value_upper < 0.0)) {
        s_max *= 2.0;
        if (s_max > 1e6) throw BracketError("pressure stays nonnegative; depth insufficient");
    }
    const double lo = certified_positive(0.0) ? bisect_last_true(0.0, s_max, tol / 4.0, certified_positive) : 0.0;
    const double hi = bisect_first_true(0.0, s_max, tol / 4.0, certified_negative);
    if (lo > hi) throw BracketError("pressure bounds are inconsistent");

    GammaResult out;
    out.gamma = {lo, hi};
    out.method = GammaMethod::PressureBisection;
    out.depth_used = depth;
    return out;
}

std::vector<Interval> partition_sum_check(const IfsSpec& ifs, double gamma, const std::vector<int>& depths,
                                          std::uint64_t budget)
{
    std::vector<Interval> out;
    for (int d : depths) out.push_back(pressure_estimate(ifs, gamma, d, budget).partition_sum);
    return out;
}

} // namespace confrec
