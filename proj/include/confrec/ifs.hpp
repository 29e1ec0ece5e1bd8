#pragma once

// Conformal iterated function systems and certified per-cylinder quantities.
//
// One-dimensional maps are real Moebius transformations (similarities are the
// special case c = 0, d = 1), so compositions are 2x2 matrix products.
// Two-dimensional systems are restricted to similarities.

#include "confrec/interval.hpp"
#include "confrec/word.hpp"

#include <array>
#include <optional>
#include <variant>
#include <vector>

namespace confrec {

using Point = std::array<double, 2>;

struct Similarity {
    double ratio = 0.5;
    // Row-major 2x2 orthogonal part. In 1D only orthogonal[0] = +-1 is used.
    std::array<double, 4> orthogonal{1.0, 0.0, 0.0, 1.0};
    std::array<double, 2> translation{0.0, 0.0};
};

// x -> (a x + b) / (c x + d), one-dimensional only.
struct Moebius {
    double a = 0.0, b = 1.0, c = 1.0, d = 1.0;
};

using MapDesc = std::variant<Similarity, Moebius>;

struct IfsOptions {
    double holder_alpha = 1.0;
    double holder_c = 0.0;
    bool osc_declared = false;
    // Initial interval mapped into itself by every map; required for Moebius maps.
    std::optional<Interval> domain;
    // V is the hull inflated by this fraction of Diam(X).
    double v_margin = 0.05;
    double hull_tol = 1e-12;
};

// Ball-plus-box enclosure: the set { c + v : c in center, |v| <= radius }.
// 1D enclosures use radius 0 and carry the whole interval in `center`.
struct Enclosure {
    Box center;
    double radius = 0.0;

    Box box() const { return radius == 0.0 ? center : inflate(center, radius); }
};

struct HullResult {
    Box box;            // certified: every map sends it into itself
    Interval diameter;  // enclosure of Diam(X)
    int iterations = 0;
};

class IfsSpec {
public:
    static IfsSpec build(int dim, std::vector<MapDesc> maps, IfsOptions options = {});

    std::size_t alphabet_size() const { return maps_.size(); }
    int dim() const { return dim_; }
    const std::vector<MapDesc>& maps() const { return maps_; }
    const IfsOptions& options() const { return options_; }
    bool osc_declared() const { return options_.osc_declared; }
    double holder_alpha() const { return options_.holder_alpha; }
    double holder_c() const { return options_.holder_c; }
    bool all_similarity() const { return all_similarity_; }

    const Box& hull() const { return hull_.box; }
    Interval diameter() const { return hull_.diameter; }
    const HullResult& hull_result() const { return hull_; }
    // The open neighbourhood V (closed box stand-in).
    const Box& neighbourhood() const { return neighbourhood_; }

    // Similarity ratio of map i (only meaningful for similarities).
    double ratio(Symbol i) const { return coeffs_[i].ratio; }
    // Enclosure of |phi_i'| over the hull.
    Interval map_derivative(Symbol i) const { return map_derivative_[i]; }
    // max_i sup_hull |phi_i'| (< 1).
    double max_sup_derivative() const { return max_sup_derivative_; }
    // D with sup_hull |phi_I'| <= D * inf_hull |phi_I'| for every word I.
    double distortion_constant() const { return distortion_; }

    void check_word(const Word& w) const;

    Enclosure initial_enclosure() const;
    Enclosure apply(Symbol i, const Enclosure& e) const;
    // Point evaluation in round-to-nearest.
    Point apply_point(Symbol i, const Point& p) const;

private:
    struct MapCoeffs {
        bool similarity = true;
        double ratio = 0.0;
        // 1D Moebius form (a, b, c, d); similarities use (s r, t, 0, 1).
        double a = 0.0, b = 0.0, c = 0.0, d = 1.0;
        Interval k1, k2;  // a/c and b - a d / c when c != 0
        // 2D similarity: linear part and translation.
        std::array<double, 4> lin{};
        std::array<double, 2> shift{};
    };

    Interval apply_interval(const MapCoeffs& m, Interval x) const;
    Interval derivative_over(const MapCoeffs& m, Interval x) const;
    HullResult compute_hull(double tol);
    HullResult compute_hull_1d(double tol) const;
    HullResult compute_hull_2d(double tol);

    friend HullResult attractor_hull(const IfsSpec& ifs, double tol);

    int dim_ = 1;
    std::vector<MapDesc> maps_;
    std::vector<MapCoeffs> coeffs_;
    IfsOptions options_;
    bool all_similarity_ = true;
    HullResult hull_;
    Box neighbourhood_;
    // 2D hull ball.
    Point ball_center_{};
    double ball_radius_ = 0.0;
    std::vector<Interval> map_derivative_;
    double max_sup_derivative_ = 0.0;
    double distortion_ = 1.0;
};

// phi_I as an evaluable map.
class Composition {
public:
    int dim = 1;
    bool similarity = true;
    // Product of the constituent similarity ratios (similarity systems only).
    double ratio = 1.0;
    // 1D: Moebius coefficients (a, b, c, d). 2D: row-major linear part.
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};
    // 2D translation.
    std::array<double, 2> t{0.0, 0.0};

    double operator()(double x) const;
    Point operator()(const Point& p) const;
};

struct CylinderData {
    Word word;
    Interval deriv_norm;
    Interval diam;
    Box box;
    Box fixed_point;  // only meaningful for nonempty words
};

Composition compose_word(const IfsSpec& ifs, const Word& word);

// [lo, hi] with lo <= inf_hull |phi_I'| <= sup_hull |phi_I'| <= hi.
Interval derivative_norm_bounds(const IfsSpec& ifs, const Word& word);

// Certified enclosure of the unique fixed point of phi_I, width <= tol.
Box fixed_point(const IfsSpec& ifs, const Word& word, double tol);

// Enclosure of X_I = phi_I(X); the empty word gives the hull.
Box cylinder_box(const IfsSpec& ifs, const Word& word);

CylinderData cylinder_data(const IfsSpec& ifs, const Word& word);

HullResult attractor_hull(const IfsSpec& ifs, double tol);

// Enclosure of pi(w) for every infinite coding w starting with `prefix`.
Box eval_pi(const IfsSpec& ifs, const Word& prefix);

// Boxes of every suffix: out[k] encloses X_{coding[k..]}, out[size] is the hull.
std::vector<Box> suffix_boxes(const IfsSpec& ifs, const Word& coding);

} // namespace confrec
