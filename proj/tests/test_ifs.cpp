#include "confrec/errors.hpp"
#include "confrec/ifs.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace confrec;

namespace {

Word random_word(std::mt19937_64& gen, std::size_t alphabet, std::size_t len)
{
    std::vector<Symbol> s(len);
    for (auto& x : s) x = static_cast<Symbol>(gen() % alphabet);
    return Word(std::move(s));
}

// phi_I(x) in long double straight from the map list.
long double eval_long(const IfsSpec& ifs, const Word& w, long double x)
{
    for (std::size_t k = w.size(); k-- > 0;) {
        const auto& d = ifs.maps()[w[k]];
        if (const auto* s = std::get_if<Similarity>(&d)) {
            x = s->orthogonal[0] * static_cast<long double>(s->ratio) * x + s->translation[0];
        } else {
            const auto& m = std::get<Moebius>(d);
            x = (m.a * x + m.b) / (m.c * x + m.d);
        }
    }
    return x;
}

const double kSqrt3 = std::sqrt(3.0);
const double kEps = std::numeric_limits<double>::epsilon();

} // namespace

TEST_CASE("compose_word on the Cantor system")
{
    const IfsSpec c = fixtures::cantor();
    const Composition c01 = compose_word(c, Word{0, 1});
    CHECK(c01(0.0) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(c01(1.0) == doctest::Approx(3.0 / 9.0).epsilon(1e-15));
    CHECK(c01.ratio == c.ratio(0) * c.ratio(1));
    const Composition c11 = compose_word(c, Word{1, 1});
    CHECK(c11(0.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(c11.ratio == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    const Composition id = compose_word(c, Word{});
    CHECK(id(0.37) == 0.37);
    CHECK_THROWS_AS(compose_word(c, Word{0, 2}), DomainError);
}

TEST_CASE("derivative bounds")
{
    const IfsSpec c = fixtures::cantor();
    const Interval d = derivative_norm_bounds(c, Word{0, 1, 1, 0});
    CHECK(d.lo == d.hi);
    CHECK(d.lo == doctest::Approx(std::pow(3.0, -4)).epsilon(1e-15));
    CHECK_THROWS_AS(derivative_norm_bounds(c, Word{}), DomainError);

    // Gauss branches on the hull [(sqrt3 - 1)/2, sqrt3 - 1]: |phi_1'| = 1/(x+1)^2.
    const IfsSpec g = fixtures::gauss();
    const Interval g1 = derivative_norm_bounds(g, Word{0});
    const double true_lo = 1.0 / 3.0;
    const double true_hi = 1.0 / std::pow((kSqrt3 - 1.0) / 2.0 + 1.0, 2);
    CHECK(g1.lo <= true_lo);
    CHECK(g1.hi >= true_hi);
    CHECK(g1.lo == doctest::Approx(true_lo).epsilon(1e-9));
    CHECK(g1.hi == doctest::Approx(true_hi).epsilon(1e-9));

    const Interval a = derivative_norm_bounds(g, Word{0});
    const Interval b = derivative_norm_bounds(g, Word{1});
    const Interval ab = derivative_norm_bounds(g, Word{0, 1});
    CHECK(ab.hi <= a.hi * b.hi * (1 + 1e-12));
    CHECK(ab.lo >= a.lo * b.lo * (1 - 1e-12));
}

TEST_CASE("fixed points")
{
    const IfsSpec c = fixtures::cantor();
    CHECK(fixed_point(c, Word{1}, 1e-12).x.contains(1.0));
    const Box p01 = fixed_point(c, Word{0, 1}, 1e-12);
    CHECK(p01.x.lo <= 0.25);
    CHECK(p01.x.hi >= 0.25);
    CHECK(p01.x.width() <= 1e-12);
    const Box p10 = fixed_point(c, Word{1, 0}, 1e-12);
    CHECK(p10.x.mid() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(fixed_point(c, Word{0}, 0.0), DomainError);
    CHECK_THROWS_AS(fixed_point(c, Word{0}, -1.0), DomainError);

    const IfsSpec g = fixtures::gauss();
    const Box pg = fixed_point(g, Word{0}, 1e-12);
    CHECK(pg.x.mid() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-13));
    const Box pg12 = fixed_point(g, Word{0, 1}, 1e-12);
    CHECK(pg12.x.mid() == doctest::Approx(kSqrt3 - 1.0).epsilon(1e-13));
}

TEST_CASE("cylinder data examples")
{
    const IfsSpec c = fixtures::cantor();
    const CylinderData d00 = cylinder_data(c, Word{0, 0});
    CHECK(d00.box.x.lo == doctest::Approx(0.0));
    CHECK(d00.box.x.hi == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(d00.diam.lo == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(d00.diam.width() <= 1e-16);
    CHECK(d00.fixed_point.x.contains(0.0));
    const CylinderData d1 = cylinder_data(c, Word{1});
    CHECK(d1.box.x.lo == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d1.box.x.hi == 1.0);
    CHECK(d1.diam.lo == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("attractor hulls")
{
    const IfsSpec c = fixtures::cantor();
    CHECK(c.hull().x.lo == 0.0);
    CHECK(c.hull().x.hi == 1.0);
    // the stored maps have their extreme fixed point a few ulps under 1
    CHECK(c.diameter().lo >= 1.0 - 8 * kEps);
    CHECK(c.diameter().hi == 1.0);

    Similarity half;
    half.ratio = 0.5;
    const IfsSpec single = IfsSpec::build(1, {half});
    CHECK(single.hull().x.lo == 0.0);
    CHECK(single.hull().x.hi == 0.0);
    CHECK(single.diameter().hi == 0.0);

    // Extreme points of the {1,2} continued fraction set are the period-2
    // points [0; 2,1,2,1,...] = (sqrt3 - 1)/2 and [0; 1,2,1,2,...] = sqrt3 - 1.
    const IfsSpec g = fixtures::gauss();
    const HullResult h = attractor_hull(g, 1e-12);
    CHECK(h.box.x.lo <= (kSqrt3 - 1.0) / 2.0);
    CHECK(h.box.x.hi >= kSqrt3 - 1.0);
    CHECK(h.box.x.lo == doctest::Approx((kSqrt3 - 1.0) / 2.0).epsilon(1e-11));
    CHECK(h.box.x.hi == doctest::Approx(kSqrt3 - 1.0).epsilon(1e-11));
    CHECK(g.diameter().contains((kSqrt3 - 1.0) / 2.0));
    CHECK_THROWS_AS(attractor_hull(g, 0.0), DomainError);

    for (const IfsSpec* ifs : {&c, &g}) {
        for (Symbol i = 0; i < ifs->alphabet_size(); ++i) {
            CHECK(ifs->hull().contains(cylinder_box(*ifs, Word{i})));
        }
    }
}

TEST_CASE("eval_pi examples")
{
    const IfsSpec c = fixtures::cantor();
    const Box b = eval_pi(c, Word{0, 1, 0, 1});
    CHECK(b.x.contains(0.25));
    CHECK(b.x.width() == doctest::Approx(std::pow(3.0, -4)).epsilon(1e-12));
    const Box b0 = eval_pi(c, Word{0});
    CHECK(b0.x.lo == 0.0);
    CHECK(b0.x.hi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const Box b111 = eval_pi(c, Word{1, 1, 1});
    CHECK(b111.x.lo == doctest::Approx(26.0 / 27.0).epsilon(1e-15));
    CHECK(b111.x.hi == 1.0);
    CHECK_THROWS_AS(eval_pi(c, Word{}), DomainError);
}

TEST_CASE("similarity exactness")
{
    std::mt19937_64 gen(11);
    for (const IfsSpec& ifs : {fixtures::cantor(), fixtures::golden()}) {
        for (int t = 0; t < 200; ++t) {
            const Word w = random_word(gen, ifs.alphabet_size(), 1 + gen() % 20);
            double r = 1.0;
            for (Symbol s : w.symbols()) r *= ifs.ratio(s);
            const CylinderData d = cylinder_data(ifs, w);
            CHECK(d.deriv_norm.lo == r);
            CHECK(d.deriv_norm.hi == r);
            CHECK(d.diam.lo == doctest::Approx(r * ifs.diameter().mid()).epsilon(1e-15));
        }
    }
}

TEST_CASE("bounded distortion on the Gauss system")
{
    const IfsSpec g = fixtures::gauss();
    const double c_low = 1.0 / g.distortion_constant();
    REQUIRE(c_low > 0.0);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<long double> u(g.hull().x.lo, g.hull().x.hi);
    for (std::size_t len = 1; len <= 12; ++len) {
        for (int t = 0; t < 20; ++t) {
            const Word w = random_word(gen, 2, len);
            const Interval d = derivative_norm_bounds(g, w);
            for (int k = 0; k < 100; ++k) {
                const long double x = u(gen), y = u(gen);
                if (std::abs(x - y) < 1e-6L) continue;
                const long double ratio =
                    std::abs(eval_long(g, w, x) - eval_long(g, w, y)) / (d.hi * std::abs(x - y));
                CHECK(ratio <= 1.0L + 1e-9L);
                CHECK(ratio >= c_low * (1.0L - 1e-9L));
            }
        }
    }
}

TEST_CASE("cylinder invariants: distortion relation, fixed point in box, nesting")
{
    std::mt19937_64 gen(3);
    for (const IfsSpec& ifs : {fixtures::cantor(), fixtures::golden(), fixtures::gauss(), fixtures::sierpinski()}) {
        const double c_low = 1.0 / ifs.distortion_constant();
        for (int t = 0; t < 100; ++t) {
            const Word w = random_word(gen, ifs.alphabet_size(), 1 + gen() % 10);
            const CylinderData d = cylinder_data(ifs, w);
            CHECK(d.diam.lo >= c_low * d.deriv_norm.lo * ifs.diameter().lo * (1 - 1e-12));
            CHECK(d.diam.hi <= d.deriv_norm.hi * ifs.diameter().hi * (1 + 1e-12));
            CHECK(d.box.contains(d.fixed_point));
            const Word ext = w.concat(random_word(gen, ifs.alphabet_size(), 1 + gen() % 5));
            CHECK(d.box.contains(cylinder_box(ifs, ext)));
            double prod = 1.0;
            for (Symbol s : w.symbols()) prod *= ifs.map_derivative(s).hi;
            CHECK(d.deriv_norm.hi <= prod * (1 + 1e-12));
        }
    }
}

TEST_CASE("fixed point and coding consistency")
{
    std::mt19937_64 gen(9);
    for (const IfsSpec& ifs : {fixtures::cantor(), fixtures::gauss()}) {
        for (int t = 0; t < 50; ++t) {
            const Word w = random_word(gen, ifs.alphabet_size(), 1 + gen() % 6);
            const double tol = 1e-10;
            const Box p = fixed_point(ifs, w, tol);
            const long double x = p.x.mid();
            CHECK(std::abs(eval_long(ifs, w, x) - x) <= 2 * tol);
            const Box b1 = eval_pi(ifs, w);
            double prev = b1.x.width();
            for (std::size_t m = 2; m <= 6; ++m) {
                const Box b = eval_pi(ifs, w.power(m));
                CHECK(b.x.lo <= p.x.hi);
                CHECK(b.x.hi >= p.x.lo);
                if (prev < 1e-9) break;
                CHECK(b.x.width() <= prev * std::pow(ifs.max_sup_derivative(), double(w.size())) * (1 + 1e-6) + 1e-14);
                prev = b.x.width();
            }
        }
    }
}

TEST_CASE("validation failures")
{
    Similarity bad;
    bad.ratio = 1.5;
    try {
        IfsSpec::build(1, {bad});
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("contraction violated") != std::string::npos);
    }
    CHECK_THROWS_AS(IfsSpec::build(2, {Moebius{}}), ValidationError);
    CHECK_THROWS_AS(IfsSpec::build(1, {Moebius{0, 1, 1, 1}}), ValidationError);  // no domain
    IfsOptions opt;
    opt.domain = Interval{-2.0, 1.0};
    CHECK_THROWS_AS(IfsSpec::build(1, {Moebius{0, 1, 1, 1}}, opt), ValidationError);  // pole at -1
    opt.domain = Interval{0.0, 1.0};
    // x -> 1/(x + 0.5) expands near 0 and leaves [0, 1]
    CHECK_THROWS_AS(IfsSpec::build(1, {Moebius{0, 1, 1, 0.5}}, opt), ValidationError);
    CHECK_THROWS_AS(IfsSpec::build(1, {}), ValidationError);
    CHECK_THROWS_AS(IfsSpec::build(3, {Similarity{}}), ValidationError);
}

TEST_CASE("two-dimensional similarity system")
{
    const IfsSpec s = fixtures::sierpinski();
    CHECK(s.diameter().contains(std::sqrt(1.25)));
    const Box p = fixed_point(s, Word{2}, 1e-12);
    CHECK(p.x.contains(0.5));
    CHECK(p.y.contains(1.0));
    CHECK(derivative_norm_bounds(s, Word{0, 1, 2}).lo == 0.125);
}
