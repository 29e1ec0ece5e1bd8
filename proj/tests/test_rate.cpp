#include "confrec/errors.hpp"
#include "confrec/rate.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace confrec;

namespace {

std::string write_table(const std::string& name, const std::string& body)
{
    const std::string path = (std::filesystem::temp_directory_path() / ("confrec_rate_" + name)).string();
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST_CASE("parametric families")
{
    const double g = 0.5;
    const RateFunction p = RateFunction::parse("power:c=2,a=1", g);
    CHECK(p.phi_gamma(4) == doctest::Approx(0.5));
    CHECK(p(4) == doctest::Approx(0.25));
    CHECK(p.divergent());
    CHECK_FALSE(RateFunction::parse("power:a=1.5", g).divergent());
    CHECK(RateFunction::parse("power", g).phi_gamma(10) == doctest::Approx(0.1));

    const RateFunction r = RateFunction::parse("geom:rho=0.5", g);
    CHECK(r(3) == 0.125);
    CHECK(r.phi_gamma(3) == doctest::Approx(std::pow(0.125, g)));
    CHECK_FALSE(r.divergent());
    CHECK(RateFunction::geometric(1.0, g).divergent());

    const RateFunction l = RateFunction::parse("logcorr", g);
    CHECK(l.phi_gamma(3) == doctest::Approx(1.0 / (3.0 * std::log(4.0))));
    CHECK(l(3) == doctest::Approx(std::pow(l.phi_gamma(3), 1.0 / g)));
    CHECK(l.divergent());
    CHECK(l.summability_note() == "divergent");
    CHECK(RateFunction::parse("power:c=1,a=1", g).describe() == "power:c=1,a=1");
}

TEST_CASE("phi and phi^gamma agree")
{
    for (const char* spec : {"power:c=3,a=0.7", "geom:rho=0.8", "logcorr"}) {
        const RateFunction f = RateFunction::parse(spec, 0.63);
        for (int n = 1; n <= 50; ++n) CHECK(std::pow(f(n), 0.63) == doctest::Approx(f.phi_gamma(n)).epsilon(1e-12));
    }
}

TEST_CASE("tables")
{
    std::string body = "# harmonic\nn,phi\n";
    for (int n = 1; n <= 64; ++n) body += std::to_string(n) + "," + std::to_string(1.0 / n) + "\n";
    const std::string path = write_table("harmonic.csv", body);
    const RateFunction t = RateFunction::parse("table:@" + path, 1.0);
    CHECK(t.max_n() == 64);
    CHECK(t(2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(t(65), DomainError);
    CHECK(t.divergent());
    CHECK(t.summability_note() == "divergent (dyadic block heuristic)");

    std::string sq;
    for (int n = 1; n <= 64; ++n) sq += std::to_string(n) + "," + std::to_string(1.0 / (n * double(n))) + "\n";
    const RateFunction q = RateFunction::parse("table:@" + write_table("square.csv", sq), 1.0);
    CHECK_FALSE(q.divergent());

    CHECK(RateFunction::table({0.5, 0.25}, 1.0).summability_note() == "undetermined (table too short)");
    CHECK_THROWS_AS(RateFunction::parse("table:@" + write_table("gap.csv", "1,0.5\n3,0.2\n"), 1.0), ValidationError);
    CHECK_THROWS_AS(RateFunction::parse("table:@" + write_table("neg.csv", "1,-0.5\n"), 1.0), ValidationError);
    CHECK_THROWS_AS(RateFunction::parse("table:@" + write_table("bad.csv", "1;0.5\n"), 1.0), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("malformed specs")
{
    for (const char* spec : {"powr:a=1", "power:a", "power:a=x", "power:b=1", "geom", "geom:rho=0", "logcorr:a=1",
                             "table:file.csv", "table:@/nonexistent/file.csv", "power:c=-1"}) {
        CAPTURE(spec);
        CHECK_THROWS_AS(RateFunction::parse(spec, 0.5), ValidationError);
    }
    CHECK_THROWS_AS(RateFunction::parse("power", 0.0), ValidationError);
    CHECK_THROWS_AS(RateFunction::parse("power", 0.5)(0), DomainError);
}
