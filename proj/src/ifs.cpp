#include "confrec/ifs.hpp"

#include "confrec/errors.hpp"
#include "word_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace confrec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxHutchinsonIterations = 100000;

std::string map_label(std::size_t i) { return "maps[" + std::to_string(i) + "]"; }

Box inflate_dim(const Box& b, double r, int dim)
{
    if (dim == 2) return inflate(b, r);
    return {{round_down(b.x.lo - r), round_up(b.x.hi + r)}, b.y};
}

Box bbox_of_ball(const Point& c, double r, int dim) { return inflate_dim(Box::point(c[0], c[1]), r, dim); }

double moebius_eval(double a, double b, double c, double d, double x)
{
    return c == 0.0 ? (a * x + b) / d : (a * x + b) / (c * x + d);
}

} // namespace

IfsSpec IfsSpec::build(int dim, std::vector<MapDesc> maps, IfsOptions options)
{
    if (dim != 1 && dim != 2) throw ValidationError("dim must be 1 or 2");
    if (maps.empty()) throw ValidationError("at least one map is required");
    if (maps.size() > 0xFFFF) throw ValidationError("alphabet too large");
    if (!(options.v_margin >= 0.0)) throw ValidationError("v_margin must be nonnegative");
    if (!(options.hull_tol > 0.0)) throw ValidationError("hull tolerance must be positive");
    if (!(options.holder_alpha > 0.0)) throw ValidationError("holder_alpha must be positive");
    if (!(options.holder_c >= 0.0)) throw ValidationError("holder_c must be nonnegative");

    IfsSpec ifs;
    ifs.dim_ = dim;
    ifs.options_ = options;
    ifs.maps_ = std::move(maps);

    for (std::size_t i = 0; i < ifs.maps_.size(); ++i) {
        MapCoeffs m;
        if (const auto* s = std::get_if<Similarity>(&ifs.maps_[i])) {
            if (!(s->ratio > 0.0 && s->ratio < 1.0)) {
                throw ValidationError(map_label(i) + ": contraction violated (ratio " + std::to_string(s->ratio) +
                                      " not in (0,1))");
            }
            const auto& o = s->orthogonal;
            if (dim == 1) {
                if (std::abs(std::abs(o[0]) - 1.0) > 1e-12) {
                    throw ValidationError(map_label(i) + ": orthogonal part must be +1 or -1 in 1D");
                }
            } else {
                const double e00 = o[0] * o[0] + o[2] * o[2] - 1.0;
                const double e11 = o[1] * o[1] + o[3] * o[3] - 1.0;
                const double e01 = o[0] * o[1] + o[2] * o[3];
                if (std::max({std::abs(e00), std::abs(e11), std::abs(e01)}) > 1e-9) {
                    throw ValidationError(map_label(i) + ": orthogonal part is not orthogonal");
                }
            }
            m.similarity = true;
            m.ratio = s->ratio;
            m.a = (o[0] < 0.0 ? -1.0 : 1.0) * s->ratio;
            m.b = s->translation[0];
            m.c = 0.0;
            m.d = 1.0;
            for (int k = 0; k < 4; ++k) m.lin[k] = s->ratio * o[k];
            m.shift = s->translation;
        } else {
            const auto& mb = std::get<Moebius>(ifs.maps_[i]);
            if (dim != 1) throw ValidationError(map_label(i) + ": Moebius maps are supported in 1D only");
            const double det = mb.a * mb.d - mb.b * mb.c;
            if (!std::isfinite(det) || det == 0.0) {
                throw ValidationError(map_label(i) + ": Moebius map is degenerate (ad - bc = 0)");
            }
            if (mb.c == 0.0 && mb.d == 0.0) throw ValidationError(map_label(i) + ": c and d both zero");
            m.similarity = false;
            m.ratio = std::numeric_limits<double>::quiet_NaN();
            m.a = mb.a, m.b = mb.b, m.c = mb.c, m.d = mb.d;
            if (mb.c != 0.0) {
                const Interval c = Interval::point(mb.c);
                m.k1 = Interval::point(mb.a) / c;
                m.k2 = Interval::point(mb.b) - Interval::point(mb.a) * Interval::point(mb.d) / c;
            }
            ifs.all_similarity_ = false;
        }
        ifs.coeffs_.push_back(m);
    }

    ifs.hull_ = ifs.compute_hull(options.hull_tol);
    ifs.neighbourhood_ = inflate_dim(ifs.hull_.box, options.v_margin * ifs.hull_.diameter.hi, dim);

    // Per-map derivative ranges over the hull; contraction and pole checks over V.
    ifs.map_derivative_.resize(ifs.coeffs_.size());
    double lipschitz_log = 0.0;
    for (std::size_t i = 0; i < ifs.coeffs_.size(); ++i) {
        const MapCoeffs& m = ifs.coeffs_[i];
        if (m.similarity) {
            ifs.map_derivative_[i] = Interval::point(m.ratio);
            continue;
        }
        const Interval over_v = ifs.derivative_over(m, ifs.neighbourhood_.x);
        if (!(over_v.hi < 1.0)) {
            throw ValidationError(map_label(i) + ": contraction violated (sup |phi'| = " + std::to_string(over_v.hi) +
                                  " on V)");
        }
        if (!(over_v.lo > 0.0)) throw ValidationError(map_label(i) + ": inf |phi'| must be positive on V");
        ifs.map_derivative_[i] = ifs.derivative_over(m, ifs.hull_.box.x);
        if (m.c != 0.0) {
            const Interval den = abs(Interval::point(m.c) * ifs.hull_.box.x + Interval::point(m.d));
            lipschitz_log = std::max(lipschitz_log, round_up(2.0 * std::abs(m.c) / den.lo));
        }
    }
    for (const Interval& d : ifs.map_derivative_) ifs.max_sup_derivative_ = std::max(ifs.max_sup_derivative_, d.hi);

    if (!ifs.all_similarity_) {
        // log|phi_I'(x)| - log|phi_I'(y)| <= Lip * sum_k rho^k |x - y|.
        const double exponent = lipschitz_log * ifs.hull_.box.x.width() / (1.0 - ifs.max_sup_derivative_);
        ifs.distortion_ = round_up(std::exp(round_up(exponent)) * (1.0 + 4 * kEps));
    }
    return ifs;
}

void IfsSpec::check_word(const Word& w) const
{
    if (w.max_symbol_bound() > alphabet_size()) {
        throw DomainError("word (" + w.to_string() + ") has a symbol outside the alphabet of size " +
                          std::to_string(alphabet_size()));
    }
}

Interval IfsSpec::apply_interval(const MapCoeffs& m, Interval x) const
{
    if (m.c == 0.0) {
        if (m.d == 1.0) return Interval::point(m.a) * x + Interval::point(m.b);
        const Interval d = Interval::point(m.d);
        return Interval::point(m.a) / d * x + Interval::point(m.b) / d;
    }
    const Interval den = Interval::point(m.c) * x + Interval::point(m.d);
    if (den.contains_zero()) throw DomainError("Moebius pole inside the evaluated interval");
    return m.k1 + m.k2 / den;
}

Interval IfsSpec::derivative_over(const MapCoeffs& m, Interval x) const
{
    if (m.similarity) return Interval::point(m.ratio);
    const Interval a = Interval::point(m.a), b = Interval::point(m.b);
    const Interval c = Interval::point(m.c), d = Interval::point(m.d);
    const Interval det = abs(a * d - b * c);
    if (m.c == 0.0) return det / sqr(d);
    const Interval den = c * x + d;
    if (den.contains_zero()) throw ValidationError("Moebius pole inside the neighbourhood V");
    return det / sqr(den);
}

Enclosure IfsSpec::initial_enclosure() const
{
    if (dim_ == 1) return {hull_.box, 0.0};
    return {Box::point(ball_center_[0], ball_center_[1]), ball_radius_};
}

Enclosure IfsSpec::apply(Symbol i, const Enclosure& e) const
{
    const MapCoeffs& m = coeffs_[i];
    if (dim_ == 1) {
        return {{apply_interval(m, e.center.x), e.center.y}, 0.0};
    }
    const Interval cx = Interval::point(m.lin[0]) * e.center.x + Interval::point(m.lin[1]) * e.center.y +
                        Interval::point(m.shift[0]);
    const Interval cy = Interval::point(m.lin[2]) * e.center.x + Interval::point(m.lin[3]) * e.center.y +
                        Interval::point(m.shift[1]);
    return {{cx, cy}, e.radius == 0.0 ? 0.0 : round_up(m.ratio * e.radius)};
}

Point IfsSpec::apply_point(Symbol i, const Point& p) const
{
    const MapCoeffs& m = coeffs_[i];
    if (dim_ == 1) return {moebius_eval(m.a, m.b, m.c, m.d, p[0]), 0.0};
    return {m.lin[0] * p[0] + m.lin[1] * p[1] + m.shift[0], m.lin[2] * p[0] + m.lin[3] * p[1] + m.shift[1]};
}

HullResult IfsSpec::compute_hull(double tol) { return dim_ == 1 ? compute_hull_1d(tol) : compute_hull_2d(tol); }

HullResult IfsSpec::compute_hull_1d(double tol) const
{
    Interval start;
    if (options_.domain) {
        start = *options_.domain;
        if (!(start.lo <= start.hi) || !std::isfinite(start.lo) || !std::isfinite(start.hi)) {
            throw ValidationError("domain must be a finite interval [lo, hi]");
        }
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const MapCoeffs& m = coeffs_[i];
            if (m.c != 0.0 && (Interval::point(m.c) * start + Interval::point(m.d)).contains_zero()) {
                throw ValidationError(map_label(i) + ": pole inside the domain");
            }
            const double slack = 1e-12 * std::max(1.0, start.mag());
            if (!Interval(start.lo - slack, start.hi + slack).contains(apply_interval(m, start))) {
                throw ValidationError(map_label(i) + ": domain is not mapped into itself");
            }
        }
    } else if (all_similarity_) {
        double centre = 0.0;
        for (const MapCoeffs& m : coeffs_) centre += m.b / (1.0 - m.a);
        centre /= static_cast<double>(coeffs_.size());
        double radius = 0.0;
        for (const MapCoeffs& m : coeffs_) {
            radius = std::max(radius, std::abs(m.a * centre + m.b - centre) / (1.0 - m.ratio));
        }
        radius = radius * (1.0 + 1e-9) + std::numeric_limits<double>::denorm_min();
        start = {centre - radius, centre + radius};
    } else {
        throw ValidationError("systems with Moebius maps require a \"domain\" interval");
    }

    // Hutchinson iteration on intervals. Every map is monotone on the current
    // interval, so endpoint images give the exact image interval.
    double lo = start.lo, hi = start.hi;
    int it = 0;
    for (;; ++it) {
        if (it >= kMaxHutchinsonIterations) {
            throw ValidationError("contraction violated: Hutchinson iteration did not converge");
        }
        double nlo = std::numeric_limits<double>::infinity();
        double nhi = -nlo;
        for (const MapCoeffs& m : coeffs_) {
            const double u = moebius_eval(m.a, m.b, m.c, m.d, lo);
            const double v = moebius_eval(m.a, m.b, m.c, m.d, hi);
            nlo = std::min({nlo, u, v});
            nhi = std::max({nhi, u, v});
        }
        if (!std::isfinite(nlo) || !std::isfinite(nhi)) {
            throw ValidationError("contraction violated: Hutchinson iteration diverged");
        }
        const double move = std::max(std::abs(nlo - lo), std::abs(nhi - hi));
        lo = nlo, hi = nhi;
        if (move <= tol) break;
    }

    auto invariant = [this](Interval box) {
        for (const MapCoeffs& m : coeffs_) {
            if (m.c != 0.0 && (Interval::point(m.c) * box + Interval::point(m.d)).contains_zero()) return false;
            if (!box.contains(apply_interval(m, box))) return false;
        }
        return true;
    };

    // Fixed points of short words lie in X. Iterating from both ends of the
    // converged interval lands on the round-to-nearest fixed points from each side.
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    Word wmin, wmax;
    const std::size_t depth = coeffs_.size() <= 4 ? 3 : (coeffs_.size() <= 16 ? 2 : 1);
    for (std::size_t len = 1; len <= depth; ++len) {
        const std::uint64_t count = word_count(coeffs_.size(), len, 1u << 14);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            const Word w = Word::from_index(idx, coeffs_.size(), len);
            for (double x : {lo, hi}) {
                for (int k = 0; k < 4000; ++k) {
                    double y = x;
                    for (std::size_t j = w.size(); j-- > 0;) {
                        const MapCoeffs& m = coeffs_[w[j]];
                        y = moebius_eval(m.a, m.b, m.c, m.d, y);
                    }
                    if (y == x) break;
                    x = y;
                }
                if (x < fmin) fmin = x, wmin = w;
                if (x > fmax) fmax = x, wmax = w;
            }
        }
    }

    // Prefer the span of the fixed points when it is already invariant (exact
    // for similarity systems with extreme fixed points); otherwise inflate the
    // converged interval until it is.
    Interval box{fmin, fmax};
    bool certified = invariant(box);
    double delta = std::max({std::abs(lo), std::abs(hi), hi - lo}) * 4 * kEps;
    if (delta == 0.0) delta = std::numeric_limits<double>::denorm_min();
    for (int k = 0; k < 2200 && !certified; ++k, delta *= 2.0) {
        box = {round_down(lo - delta), round_up(hi + delta)};
        certified = invariant(box);
    }
    if (!certified) throw BracketError("could not certify an invariant hull");

    const double upper = detail::add_up(box.hi, -box.lo);
    // J with phi_w(J) inside J holds the fixed point of w, which lies in X.
    auto enclose = [&](const Word& w, double x) -> std::optional<Interval> {
        double e = 0.0;
        for (int k = 0; k < 64; ++k) {
            const Interval j{round_down(x - e), round_up(x + e)};
            Interval y = j;
            for (std::size_t i = w.size(); i-- > 0;) y = apply_interval(coeffs_[w[i]], y);
            if (j.contains(y)) return j;
            e = e == 0.0 ? std::max(std::abs(x), 1e-300) * kEps : 2.0 * e;
        }
        return std::nullopt;
    };
    double lower = 0.0;
    const auto jmin = enclose(wmin, fmin), jmax = enclose(wmax, fmax);
    if (jmin && jmax) lower = std::min(upper, std::max(0.0, detail::add_dn(jmax->lo, -jmin->hi)));

    HullResult out;
    out.box = {box, Interval::point(0.0)};
    out.diameter = {lower, upper};
    out.iterations = it + 1;
    return out;
}

HullResult IfsSpec::compute_hull_2d(double tol)
{
    (void)tol;
    // Fixed points p_i of each similarity: (I - A_i) p = t_i.
    std::vector<Point> fixed;
    for (const MapCoeffs& m : coeffs_) {
        const double a = 1.0 - m.lin[0], b = -m.lin[1], c = -m.lin[2], d = 1.0 - m.lin[3];
        const double det = a * d - b * c;
        fixed.push_back({(d * m.shift[0] - b * m.shift[1]) / det, (a * m.shift[1] - c * m.shift[0]) / det});
    }
    Point centre{0.0, 0.0};
    for (const Point& p : fixed) centre[0] += p[0], centre[1] += p[1];
    centre[0] /= static_cast<double>(fixed.size());
    centre[1] /= static_cast<double>(fixed.size());

    // Ball B(centre, R) with phi_i(B) inside B: |phi_i(c) - c| + r_i R <= R.
    const Box cbox = Box::point(centre[0], centre[1]);
    std::vector<double> offsets;
    double radius = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Enclosure img = apply(static_cast<Symbol>(i), {cbox, 0.0});
        const double off = distance_range(img.center, cbox).hi;
        offsets.push_back(off);
        radius = std::max(radius, off / (1.0 - coeffs_[i].ratio));
    }
    radius = round_up(radius * (1.0 + 1e-9)) + std::numeric_limits<double>::denorm_min();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (!(round_up(offsets[i] + round_up(coeffs_[i].ratio * radius)) <= radius)) {
            radius = round_up(radius * (1.0 + 1e-6));
            i = static_cast<std::size_t>(-1);
        }
    }

    // Diam(X) from depth-k cylinders: fixed points give a lower bound and the
    // image balls an upper bound.
    std::size_t k = 1;
    while (coeffs_.size() > 1 && word_count(coeffs_.size(), k + 1, 512) != 0) ++k;
    const std::uint64_t count = word_count(coeffs_.size(), k, 512);
    std::vector<Point> centres, fps;
    std::vector<double> radii;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        const Word w = Word::from_index(idx, coeffs_.size(), k);
        Point c = centre;
        double r = radius;
        for (std::size_t j = w.size(); j-- > 0;) {
            c = apply_point(w[j], c);
            r *= coeffs_[w[j]].ratio;
        }
        centres.push_back(c);
        radii.push_back(r);
        // Fixed point of phi_w by iteration.
        Point x = c;
        for (int it = 0; it < 200; ++it) {
            Point y = x;
            for (std::size_t j = w.size(); j-- > 0;) y = apply_point(w[j], y);
            if (y == x) break;
            x = y;
        }
        fps.push_back(x);
    }
    double lower = 0.0, upper = 0.0;
    for (std::size_t i = 0; i < centres.size(); ++i) {
        for (std::size_t j = i; j < centres.size(); ++j) {
            const double dc = std::hypot(centres[i][0] - centres[j][0], centres[i][1] - centres[j][1]);
            upper = std::max(upper, dc + radii[i] + radii[j]);
            lower = std::max(lower, std::hypot(fps[i][0] - fps[j][0], fps[i][1] - fps[j][1]));
        }
    }
    upper = round_up(upper * (1.0 + 1e-12));
    upper = std::min(upper, round_up(2.0 * radius));
    // fixed points and hypot are round-to-nearest: give back a few ulps of scale
    const double scale = std::max(std::abs(centre[0]), std::abs(centre[1])) + radius;
    lower = std::max(0.0, round_down(lower - 64 * kEps * scale));

    HullResult out;
    ball_center_ = centre;
    ball_radius_ = radius;
    out.box = bbox_of_ball(centre, radius, 2);
    out.diameter = {std::min(lower, upper), upper};
    out.iterations = 0;
    return out;
}

HullResult attractor_hull(const IfsSpec& ifs, double tol)
{
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    IfsSpec copy = ifs;
    return copy.compute_hull(tol);
}

double Composition::operator()(double x) const { return moebius_eval(m[0], m[1], m[2], m[3], x); }

Point Composition::operator()(const Point& p) const
{
    if (dim == 1) return {(*this)(p[0]), 0.0};
    return {m[0] * p[0] + m[1] * p[1] + t[0], m[2] * p[0] + m[3] * p[1] + t[1]};
}

Composition compose_word(const IfsSpec& ifs, const Word& word)
{
    ifs.check_word(word);
    Composition out;
    out.dim = ifs.dim();
    for (std::size_t k = 0; k < word.size(); ++k) {
        const auto& desc = ifs.maps()[word[k]];
        if (const auto* s = std::get_if<Similarity>(&desc)) {
            out.ratio *= s->ratio;
            if (out.dim == 1) {
                const double a = (s->orthogonal[0] < 0.0 ? -1.0 : 1.0) * s->ratio;
                const double b = s->translation[0];
                // [m0 m1; m2 m3] * [a b; 0 1]
                out.m = {out.m[0] * a, out.m[0] * b + out.m[1], out.m[2] * a, out.m[2] * b + out.m[3]};
            } else {
                const auto& o = s->orthogonal;
                const std::array<double, 4> l{s->ratio * o[0], s->ratio * o[1], s->ratio * o[2], s->ratio * o[3]};
                const auto& tr = s->translation;
                out.t = {out.m[0] * tr[0] + out.m[1] * tr[1] + out.t[0], out.m[2] * tr[0] + out.m[3] * tr[1] + out.t[1]};
                out.m = {out.m[0] * l[0] + out.m[1] * l[2], out.m[0] * l[1] + out.m[1] * l[3],
                         out.m[2] * l[0] + out.m[3] * l[2], out.m[2] * l[1] + out.m[3] * l[3]};
            }
        } else {
            const auto& mb = std::get<Moebius>(desc);
            out.similarity = false;
            out.m = {out.m[0] * mb.a + out.m[1] * mb.c, out.m[0] * mb.b + out.m[1] * mb.d,
                     out.m[2] * mb.a + out.m[3] * mb.c, out.m[2] * mb.b + out.m[3] * mb.d};
            const double mag = std::max({std::abs(out.m[0]), std::abs(out.m[1]), std::abs(out.m[2]), std::abs(out.m[3])});
            if (mag > 1e150) {
                for (double& v : out.m) v = std::ldexp(v, -500);
            }
        }
    }
    if (!out.similarity) out.ratio = std::numeric_limits<double>::quiet_NaN();
    return out;
}

Interval derivative_norm_bounds(const IfsSpec& ifs, const Word& word)
{
    ifs.check_word(word);
    if (word.empty()) throw DomainError("derivative bounds need a nonempty word");

    const detail::DerivWalker walker(ifs);
    return walker.bounds(walker.state_of(word));
}

namespace {

Box tightest_fixed_point(const IfsSpec& ifs, const Word& word, const Box& cyl)
{
    const Composition comp = compose_word(ifs, word);
    Point p{0.0, 0.0};
    if (ifs.dim() == 1) {
        if (comp.m[2] == 0.0) {
            const double a = comp.m[0] / comp.m[3], b = comp.m[1] / comp.m[3];
            p[0] = b / (1.0 - a);
        } else {
            double x = ifs.hull().x.mid();
            for (int k = 0; k < 10000; ++k) {
                const double y = comp(x);
                if (y == x) break;
                x = y;
            }
            p[0] = x;
        }
    } else {
        const double a = 1.0 - comp.m[0], b = -comp.m[1], c = -comp.m[2], d = 1.0 - comp.m[3];
        const double det = a * d - b * c;
        p = {(d * comp.t[0] - b * comp.t[1]) / det, (a * comp.t[1] - c * comp.t[0]) / det};
    }

    // |p - p*| <= |phi_I(p) - p| / (1 - Lip).
    const double lip = derivative_norm_bounds(ifs, word).hi;
    if (!(lip < 1.0)) throw BracketError("composition is not a certified contraction");
    Enclosure e{Box::point(p[0], p[1]), 0.0};
    for (std::size_t k = word.size(); k-- > 0;) e = ifs.apply(word[k], e);
    const double err = distance_range(e.box(), Box::point(p[0], p[1])).hi;
    const double r = err == 0.0 ? 0.0 : round_up(err / round_down(1.0 - lip));
    const Box enc = inflate_dim(Box::point(p[0], p[1]), r, ifs.dim());
    const Box out = intersect(enc, cyl);
    if (out.x.lo > out.x.hi || out.y.lo > out.y.hi) return enc;
    return out;
}

} // namespace

Box fixed_point(const IfsSpec& ifs, const Word& word, double tol)
{
    if (!(tol > 0.0)) throw DomainError("fixed point tolerance must be positive");
    ifs.check_word(word);
    if (word.empty()) throw DomainError("fixed point needs a nonempty word");
    const Box enc = tightest_fixed_point(ifs, word, cylinder_box(ifs, word));
    if (enc.max_width() > tol) {
        throw BracketError("fixed point enclosure of width " + std::to_string(enc.max_width()) +
                           " exceeds tolerance");
    }
    return enc;
}

Box cylinder_box(const IfsSpec& ifs, const Word& word)
{
    ifs.check_word(word);
    if (word.empty()) return ifs.hull();
    Enclosure e = ifs.initial_enclosure();
    for (std::size_t k = word.size(); k-- > 0;) e = ifs.apply(word[k], e);
    return e.box();
}

CylinderData cylinder_data(const IfsSpec& ifs, const Word& word)
{
    ifs.check_word(word);
    CylinderData out;
    out.word = word;
    out.box = cylinder_box(ifs, word);
    const Interval diam = ifs.diameter();
    if (word.empty()) {
        out.deriv_norm = Interval::point(1.0);
        out.diam = diam;
        return out;
    }
    out.deriv_norm = derivative_norm_bounds(ifs, word);
    if (out.deriv_norm.is_point()) {
        const double r = out.deriv_norm.lo;
        out.diam = {r * diam.lo, r * diam.hi};
        if (!(diam.is_point() && ifs.dim() == 1)) out.diam = {round_down(r * diam.lo), round_up(r * diam.hi)};
    } else {
        out.diam = {round_down(out.deriv_norm.lo * diam.lo),
                    std::min(round_up(out.deriv_norm.hi * diam.hi), out.box.diameter_upper())};
    }
    out.fixed_point = tightest_fixed_point(ifs, word, out.box);
    return out;
}

Box eval_pi(const IfsSpec& ifs, const Word& prefix)
{
    if (prefix.empty()) throw DomainError("eval_pi needs a nonempty prefix");
    return cylinder_box(ifs, prefix);
}

std::vector<Box> suffix_boxes(const IfsSpec& ifs, const Word& coding)
{
    ifs.check_word(coding);
    std::vector<Box> out(coding.size() + 1);
    Enclosure e = ifs.initial_enclosure();
    out[coding.size()] = ifs.hull();
    for (std::size_t k = coding.size(); k-- > 0;) {
        e = ifs.apply(coding[k], e);
        out[k] = e.box();
    }
    return out;
}

} // namespace confrec
