// Serial reference vs OpenMP kernels: wall time and agreement.
//   bench_kernels [threads] [repeats]

#include "confrec/ifs_json.hpp"
#include "confrec/kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

using namespace confrec;

namespace {

double best_of(int repeats, const std::function<void()>& f)
{
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double ts, double tp, bool agree)
{
    std::printf("%-22s %10.4f %10.4f %8.2fx  %s\n", name, ts, tp, ts / tp, agree ? "agree" : "DIFFER");
}

std::vector<Word> targets(const std::vector<InnerCylinder>& v)
{
    std::vector<Word> out;
    for (const auto& c : v) out.push_back(c.target);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    const int threads = argc > 1 ? std::atoi(argv[1]) : 0;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    if (threads > 0) kernels::set_threads(threads);
    const std::string dir = CONFREC_DATA_DIR;
    const IfsSpec cantor = load_ifs_json(dir + "/cantor.json");
    const IfsSpec gauss = load_ifs_json(dir + "/gauss12.json");
    const double gc = std::log(2.0) / std::log(3.0), gg = 0.5312805062772;

    std::printf("threads %d\n%-22s %10s %10s %9s\n", kernels::max_threads(), "kernel", "serial s", "parallel s",
                "speedup");

    {
        kernels::PartitionSums a, b;
        const double ts = best_of(repeats, [&] { a = kernels::serial::partition_sums(gauss, Word{}, 18, gg); });
        const double tp = best_of(repeats, [&] { b = kernels::parallel::partition_sums(gauss, Word{}, 18, gg); });
        row("partition_sums d=18", ts, tp, std::abs(a.upper - b.upper) <= 1e-12 * a.upper);
    }
    {
        std::vector<InnerCylinder> a, b;
        const double ts = best_of(repeats, [&] { a = kernels::serial::inner_cylinders(gauss, Word{}, 14, 1e-7); });
        const double tp = best_of(repeats, [&] { b = kernels::parallel::inner_cylinders(gauss, Word{}, 14, 1e-7); });
        row("inner_cylinders n=14", ts, tp, targets(a) == targets(b));
    }
    {
        const MeasureModel m(cantor, gc);
        const auto a = targets(kernels::parallel::inner_cylinders(cantor, Word{}, 11, std::pow(3.0, -11) / 2));
        const auto b = targets(kernels::parallel::inner_cylinders(cantor, Word{}, 12, std::pow(3.0, -12) / 2));
        Interval x, y;
        const double ts = best_of(repeats, [&] { x = kernels::serial::family_intersection(m, a, b); });
        const double tp = best_of(repeats, [&] { y = kernels::parallel::family_intersection(m, a, b); });
        row("family_intersection", ts, tp, std::abs(x.mid() - y.mid()) <= 1e-12 * std::max(x.mid(), 1e-300));
    }
    {
        const BlockSampler sampler(gauss, gg, 4);
        const RateFunction phi = RateFunction::parse("logcorr", gg);
        kernels::OrbitTally a, b;
        const double ts =
            best_of(repeats, [&] { a = kernels::serial::orbit_experiment(gauss, sampler, phi, 64, 20000, 1, 25); });
        const double tp =
            best_of(repeats, [&] { b = kernels::parallel::orbit_experiment(gauss, sampler, phi, 64, 20000, 1, 25); });
        row("orbit_experiment", ts, tp, a.hits == b.hits && a.point_hits == b.point_hits);
    }
    {
        const BlockSampler sampler(cantor, gc, 1);
        std::vector<std::vector<Word>> fams;
        const RateFunction phi = RateFunction::parse("power:c=1,a=1", gc);
        for (std::size_t n = 1; n <= 8; ++n) {
            fams.push_back(targets(kernels::parallel::inner_cylinders(cantor, Word{}, n, phi(static_cast<int>(n)) / 2)));
        }
        std::vector<std::uint64_t> a, b;
        const double ts = best_of(repeats, [&] { a = kernels::serial::membership_counts(sampler, fams, 64, 200000, 3); });
        const double tp = best_of(repeats, [&] { b = kernels::parallel::membership_counts(sampler, fams, 64, 200000, 3); });
        row("membership_counts", ts, tp, a == b);
    }
    return 0;
}
