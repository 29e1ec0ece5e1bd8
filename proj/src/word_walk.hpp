#pragma once

// Depth-first enumeration of all extensions of a prefix with incremental
// derivative bounds. Internal to the library.

#include "confrec/ifs.hpp"

#include <cmath>
#include <vector>

namespace confrec::detail {

struct IntervalMatrix {
    Interval a{1.0, 1.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 1.0};

    IntervalMatrix operator*(const IntervalMatrix& o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    double mag() const { return std::max({a.mag(), b.mag(), c.mag(), d.mag()}); }

    void scale_pow2(int e)
    {
        auto s = [e](Interval& v) { v = {std::ldexp(v.lo, e), std::ldexp(v.hi, e)}; };
        s(a), s(b), s(c), s(d);
    }
};

// Matrix, |det| and ratio of a composed 1D map, with the matrix stored as the
// true matrix times 2^scale.
struct DerivState {
    IntervalMatrix m;
    Interval det = Interval::point(1.0);
    int scale = 0;
    double ratio = 1.0;
};

inline IntervalMatrix map_matrix(const MapDesc& desc, Interval& det)
{
    if (const auto* s = std::get_if<Similarity>(&desc)) {
        const double a = (s->orthogonal[0] < 0.0 ? -1.0 : 1.0) * s->ratio;
        det = Interval::point(s->ratio);
        return {Interval::point(a), Interval::point(s->translation[0]), Interval::point(0.0), Interval::point(1.0)};
    }
    const auto& mb = std::get<Moebius>(desc);
    det = abs(Interval::point(mb.a) * Interval::point(mb.d) - Interval::point(mb.b) * Interval::point(mb.c));
    return {Interval::point(mb.a), Interval::point(mb.b), Interval::point(mb.c), Interval::point(mb.d)};
}

class DerivWalker {
public:
    explicit DerivWalker(const IfsSpec& ifs) : ifs_(ifs), similarity_(ifs.all_similarity())
    {
        for (const MapDesc& d : ifs.maps()) {
            Interval det;
            mats_.push_back(map_matrix(d, det));
            dets_.push_back(det);
        }
    }

    DerivState extend(const DerivState& st, Symbol s) const
    {
        DerivState out;
        out.ratio = st.ratio * (similarity_ ? ifs_.ratio(s) : 1.0);
        if (similarity_) return out;
        out.m = st.m * mats_[s];
        out.det = st.det * dets_[s];
        out.scale = st.scale;
        if (out.m.mag() > 1e100) {
            out.m.scale_pow2(-300);
            out.scale -= 300;
        }
        return out;
    }

    // [inf, sup] of |phi_I'| over the hull.
    Interval bounds(const DerivState& st) const
    {
        if (similarity_) return Interval::point(st.ratio);
        const Interval den = sqr(st.m.c * ifs_.hull().x + st.m.d);
        const Interval det{std::ldexp(st.det.lo, 2 * st.scale), std::ldexp(st.det.hi, 2 * st.scale)};
        return det / den;
    }

    DerivState state_of(const Word& w) const
    {
        DerivState st;
        for (Symbol s : w.symbols()) st = extend(st, s);
        return st;
    }

    // Calls f(symbols, bounds) for every extension of `prefix` by `extra`
    // symbols, in lexicographic order.
    template <class F>
    void for_each(const Word& prefix, std::size_t extra, F&& f) const
    {
        const std::size_t k = ifs_.alphabet_size();
        std::vector<DerivState> stack(extra + 1);
        stack[0] = state_of(prefix);
        std::vector<Symbol> sym(extra, 0);
        std::size_t from = 0;
        for (;;) {
            for (std::size_t j = from; j < extra; ++j) stack[j + 1] = extend(stack[j], sym[j]);
            f(sym, bounds(stack[extra]));
            std::size_t j = extra;
            while (j > 0 && sym[j - 1] + 1u == k) sym[--j] = 0;
            if (j == 0) break;
            ++sym[j - 1];
            from = j - 1;
        }
    }

private:
    const IfsSpec& ifs_;
    bool similarity_;
    std::vector<IntervalMatrix> mats_;
    std::vector<Interval> dets_;
};

} // namespace confrec::detail
