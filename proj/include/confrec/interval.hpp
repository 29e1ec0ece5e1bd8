#pragma once

// Closed intervals and axis-aligned boxes with outward rounding.
//
// Results are computed in round-to-nearest; the rounding error is recovered
// with error-free transforms (TwoSum, fma) and the bound is moved one ulp
// outward only when the operation was inexact.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace confrec {

inline double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

namespace detail {

// Directed rounding of a round-to-nearest result r whose exact value is r + err
// (err from an error-free transform). Only steps when the result was inexact.
inline double dn(double r, double err) { return err < 0.0 ? round_down(r) : r; }
inline double up(double r, double err) { return err > 0.0 ? round_up(r) : r; }

// Below this magnitude fma error terms may themselves be rounded.
constexpr double kTiny = 1e-280;

inline double add_dn(double a, double b)
{
    const double s = a + b, bb = s - a;
    return dn(s, (a - (s - bb)) + (b - bb));
}
inline double add_up(double a, double b)
{
    const double s = a + b, bb = s - a;
    return up(s, (a - (s - bb)) + (b - bb));
}
inline double mul_dn(double a, double b)
{
    const double p = a * b;
    if (std::abs(p) < kTiny) return p == 0.0 && (a == 0.0 || b == 0.0) ? 0.0 : round_down(p);
    return dn(p, std::fma(a, b, -p));
}
inline double mul_up(double a, double b)
{
    const double p = a * b;
    if (std::abs(p) < kTiny) return p == 0.0 && (a == 0.0 || b == 0.0) ? 0.0 : round_up(p);
    return up(p, std::fma(a, b, -p));
}
// a/b - q has the sign of (a - q b) / b.
inline double div_dn(double a, double b)
{
    const double q = a / b;
    if (std::abs(q) < kTiny || !std::isfinite(q)) return q == 0.0 && a == 0.0 ? 0.0 : round_down(q);
    const double r = std::fma(-q, b, a);
    return dn(q, b > 0.0 ? r : -r);
}
inline double div_up(double a, double b)
{
    const double q = a / b;
    if (std::abs(q) < kTiny || !std::isfinite(q)) return q == 0.0 && a == 0.0 ? 0.0 : round_up(q);
    const double r = std::fma(-q, b, a);
    return up(q, b > 0.0 ? r : -r);
}

} // namespace detail

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    static constexpr Interval point(double x) { return {x, x}; }

    double width() const { return hi - lo; }
    double mid() const { return lo + 0.5 * (hi - lo); }
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool is_point() const { return lo == hi; }
};

inline Interval operator+(Interval a, Interval b) { return {detail::add_dn(a.lo, b.lo), detail::add_up(a.hi, b.hi)}; }
inline Interval operator-(Interval a, Interval b) { return {detail::add_dn(a.lo, -b.hi), detail::add_up(a.hi, -b.lo)}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b)
{
    using namespace detail;
    return {std::min({mul_dn(a.lo, b.lo), mul_dn(a.lo, b.hi), mul_dn(a.hi, b.lo), mul_dn(a.hi, b.hi)}),
            std::max({mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)})};
}

inline Interval operator/(Interval a, Interval b)
{
    if (b.contains_zero()) {
        throw std::domain_error("interval division by an interval containing zero");
    }
    using namespace detail;
    return {std::min({div_dn(a.lo, b.lo), div_dn(a.lo, b.hi), div_dn(a.hi, b.lo), div_dn(a.hi, b.hi)}),
            std::max({div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo), div_up(a.hi, b.hi)})};
}

inline Interval& operator+=(Interval& a, Interval b) { return a = a + b; }
inline Interval& operator*=(Interval& a, Interval b) { return a = a * b; }

inline Interval abs(Interval a)
{
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return -a;
    return {0.0, std::max(-a.lo, a.hi)};
}

inline Interval sqr(Interval a)
{
    const Interval m = abs(a);
    return {detail::mul_dn(m.lo, m.lo), detail::mul_up(m.hi, m.hi)};
}

inline Interval sqrt(Interval a)
{
    auto root = [](double x, bool upward) {
        const double q = std::sqrt(std::max(0.0, x));
        const double r = std::fma(-q, q, x);
        return upward ? detail::up(q, r) : detail::dn(q, r);
    };
    return {std::max(0.0, root(a.lo, false)), root(a.hi, true)};
}

// x^s for x >= 0 and s >= 0 (monotone increasing in x). libm pow is not
// correctly rounded, so two ulps of slack are applied on each side.
inline Interval pow_nonneg(Interval a, double s)
{
    if (s == 0.0) return Interval::point(1.0);
    if (s == 1.0) return {std::max(0.0, a.lo), a.hi};
    auto lower = [s](double x) { return x <= 0.0 ? 0.0 : std::max(0.0, round_down(round_down(std::pow(x, s)))); };
    auto upper = [s](double x) { return x <= 0.0 ? 0.0 : round_up(round_up(std::pow(x, s))); };
    return {lower(a.lo), upper(a.hi)};
}

inline Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

inline Interval intersect(Interval a, Interval b)
{
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Axis-aligned box in the plane. One-dimensional systems live on the real
// axis and keep y = [0, 0].
struct Box {
    Interval x;
    Interval y;

    static Box point(double px, double py = 0.0) { return {Interval::point(px), Interval::point(py)}; }

    bool contains(const Box& o) const { return x.contains(o.x) && y.contains(o.y); }
    bool intersects(const Box& o) const { return x.intersects(o.x) && y.intersects(o.y); }
    double max_width() const { return std::max(x.width(), y.width()); }

    // Upper bound on the Euclidean diameter.
    double diameter_upper() const
    {
        const double wx = detail::add_up(x.hi, -x.lo);
        if (y.width() == 0.0) return wx;
        return round_up(std::hypot(wx, detail::add_up(y.hi, -y.lo)));
    }
};

inline Box hull(const Box& a, const Box& b) { return {hull(a.x, b.x), hull(a.y, b.y)}; }
inline Box intersect(const Box& a, const Box& b) { return {intersect(a.x, b.x), intersect(a.y, b.y)}; }

inline Box inflate(const Box& b, double r)
{
    using detail::add_dn, detail::add_up;
    return {{add_dn(b.x.lo, -r), add_up(b.x.hi, r)}, {add_dn(b.y.lo, -r), add_up(b.y.hi, r)}};
}

// Enclosure of { |p - q| : p in a, q in b }.
inline Interval distance_range(const Box& a, const Box& b)
{
    using detail::add_dn, detail::add_up;
    const double gx = std::max({0.0, add_dn(a.x.lo, -b.x.hi), add_dn(b.x.lo, -a.x.hi)});
    const double gy = std::max({0.0, add_dn(a.y.lo, -b.y.hi), add_dn(b.y.lo, -a.y.hi)});
    const double fx = std::max(add_up(a.x.hi, -b.x.lo), add_up(b.x.hi, -a.x.lo));
    const double fy = std::max(add_up(a.y.hi, -b.y.lo), add_up(b.y.hi, -a.y.lo));
    const bool flat = a.y.width() == 0.0 && b.y.width() == 0.0 && a.y.lo == b.y.lo;
    if (flat) return {gx, fx};
    const double lo = gx == 0.0 && gy == 0.0 ? 0.0 : std::max(0.0, round_down(round_down(std::hypot(gx, gy))));
    return {lo, round_up(round_up(std::hypot(fx, fy)))};
}

} // namespace confrec
