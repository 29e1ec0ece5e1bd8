// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "confrec/dimension.hpp"
#include "confrec/experiments.hpp"
#include "confrec/ifs_json.hpp"
#include "confrec/recurrence_sets.hpp"
#include "confrec/symbolic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace confrec;

namespace {

IfsSpec load(const char* name) { return load_ifs_json(std::string(CONFREC_DATA_DIR) + "/" + name); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double x, int prec = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        o.pass = false;
        o.note("runtime " + num(secs, 3) + " s over " + num(limit_s, 3) + " s");
    }
    if (!o.pass) ++failures;
    std::printf("%s  %-28s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
}

// Independent estimate of dim of the {1,2} continued fraction set from the
// cycle expansion of the transfer operator determinant
//   det(1 - z L_s) = exp(-sum_n z^n / n sum_{|I| = n} |l_I|^s / (1 - l_I)),
// l_I = phi_I'(x_I) at the periodic point of I (closed form from the integer
// matrix of I), truncated at order `order` and evaluated at z = 1. Its root in s
// is the dimension. Long double throughout.
double gauss_oracle(int order)
{
    struct M {
        long double a, b, c, d;
    };
    // traces[n] = sum over words of length n of |l|^s / (1 - l)
    auto traces = [order](long double s) {
        std::vector<long double> t(static_cast<std::size_t>(order) + 1, 0.0L);
        std::vector<std::pair<M, int>> stack{{{1, 0, 0, 1}, 0}};
        while (!stack.empty()) {
            const auto [m, l] = stack.back();
            stack.pop_back();
            if (l > 0) {
                // x = (a x + b) / (c x + d): c x^2 + (d - a) x - b = 0
                const long double x = (-(m.d - m.a) + std::sqrt((m.d - m.a) * (m.d - m.a) + 4 * m.c * m.b)) / (2 * m.c);
                const long double det = m.a * m.d - m.b * m.c;
                const long double deriv = det / ((m.c * x + m.d) * (m.c * x + m.d));
                t[static_cast<std::size_t>(l)] += std::pow(std::fabs(deriv), s) / (1.0L - deriv);
            }
            if (l == order) continue;
            for (int i = 1; i <= 2; ++i) stack.push_back({{m.b, m.a + i * m.b, m.d, m.c + i * m.d}, l + 1});
        }
        return t;
    };
    auto det_at_one = [&](long double s) {
        const auto t = traces(s);
        std::vector<long double> c(t.size(), 0.0L);
        c[0] = 1.0L;
        long double sum = 1.0L;
        for (std::size_t k = 1; k < t.size(); ++k) {
            long double acc = 0.0L;
            for (std::size_t j = 1; j <= k; ++j) acc += t[j] * c[k - j];
            c[k] = -acc / static_cast<long double>(k);
            sum += c[k];
        }
        return sum;
    };
    long double lo = 0.3L, hi = 0.8L;
    const bool sign_lo = det_at_one(lo) > 0;
    for (int it = 0; it < 70; ++it) {
        const long double mid = 0.5L * (lo + hi);
        if ((det_at_one(mid) > 0) == sign_lo) lo = mid;
        else hi = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

template <class T>
double spread(const std::vector<T>& v)
{
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

} // namespace

int main()
{
    const IfsSpec cantor = load("cantor.json");
    const IfsSpec golden = load("golden.json");
    const IfsSpec sierpinski = load("sierpinski.json");
    const IfsSpec gauss = load("gauss12.json");
    const double cantor_gamma = std::log(2.0) / std::log(3.0);

    // Gauss oracle runs before anything else touches the Gauss system.
    double gauss_ref = 0.0;
    criterion("gauss oracle (setup)", 0, [&] {
        Outcome o;
        gauss_ref = gauss_oracle(14);
        const double check = gauss_oracle(12);
        o.require(std::abs(gauss_ref - check) < 1e-9, "oracle not converged");
        o.note("gamma_ref = " + num(gauss_ref, 13) + ", order 12 vs 14 diff " + num(std::abs(gauss_ref - check), 3));
        return o;
    });

    criterion("dimension exactness", 1.0, [&] {
        Outcome o;
        const GammaResult c = solve_gamma(cantor, 1e-13, 1);
        const GammaResult g = solve_gamma(golden, 1e-13, 1);
        const double gref = std::log2((1.0 + std::sqrt(5.0)) / 2.0);
        const double ec = std::max(std::abs(c.gamma.lo - cantor_gamma), std::abs(c.gamma.hi - cantor_gamma));
        const double eg = std::max(std::abs(g.gamma.lo - gref), std::abs(g.gamma.hi - gref));
        o.require(ec <= 1e-12, "cantor error " + num(ec));
        o.require(eg <= 1e-12, "golden error " + num(eg));
        o.note("cantor err " + num(ec, 2) + ", golden err " + num(eg, 2));
        return o;
    });

    criterion("pressure consistency", 30.0, [&] {
        Outcome o;
        std::vector<int> depths;
        for (int d = 1; d <= 12; ++d) depths.push_back(d);
        double worst = 0.0;
        for (const IfsSpec* s : {&cantor, &golden, &sierpinski}) {
            const double gamma = solve_gamma(*s, 1e-14, 1).gamma.mid();
            for (const Interval& z : partition_sum_check(*s, gamma, depths)) {
                worst = std::max({worst, std::abs(z.lo - 1.0), std::abs(z.hi - 1.0)});
            }
        }
        o.require(worst <= 1e-10, "similarity sums off by " + num(worst));
        const double gamma = solve_gamma(gauss, 1e-10, 12).gamma.mid();
        double top = 0.0, bottom = 1e300;
        for (const Interval& z : partition_sum_check(gauss, gamma, {4, 5, 6, 7, 8, 9, 10})) {
            top = std::max(top, z.hi);
            bottom = std::min(bottom, z.lo);
        }
        o.require(top / bottom <= 10.0, "gauss band " + num(top / bottom));
        o.note("similarity max |Z-1| " + num(worst, 2) + ", gauss band [" + num(bottom, 4) + ", " + num(top, 4) +
               "] max/min " + num(top / bottom, 4));
        return o;
    });

    criterion("gauss dimension", 120.0, [&] {
        Outcome o;
        Interval prev{0.0, 2.0};
        for (int depth : {6, 8, 10, 12}) {
            const Interval g = solve_gamma(gauss, 1e-10, depth).gamma;
            o.require(prev.contains(g), "not nested at depth " + std::to_string(depth));
            o.require(g.contains(gauss_ref), "depth " + std::to_string(depth) + " misses the oracle");
            prev = g;
        }
        o.require(prev.width() <= 0.01, "width " + num(prev.width()));
        o.note("depth 12 [" + num(prev.lo, 10) + ", " + num(prev.hi, 10) + "] width " + num(prev.width(), 3));
        return o;
    });

    criterion("E_n exactness", 0, [&] {
        Outcome o;
        const RateFunction phi = RateFunction::geometric(1.0 / 3.0, cantor_gamma);
        const EnFamily e = build_En(cantor, cantor_gamma, phi, 2, Word{});
        const EnFamily r = build_En(cantor, cantor_gamma, phi, 2, Word{0});
        o.require(e.members.size() == 4, "members " + std::to_string(e.members.size()));
        // 00000, 01010, 10101, 11111 by hand, each of measure 2^-5.
        const Word hand[] = {Word{0, 0, 0, 0, 0}, Word{0, 1, 0, 1, 0}, Word{1, 0, 1, 0, 1}, Word{1, 1, 1, 1, 1}};
        for (std::size_t i = 0; i < e.members.size() && i < 4; ++i) {
            o.require(e.members[i].target == hand[i], "target " + e.members[i].target.to_string());
        }
        o.require(std::abs(e.nu_measure.mid() - 0.125) <= 1e-15, "nu(E_2) " + num(e.nu_measure.mid(), 17));
        const double ratio = e.nu_measure.mid() / phi.phi_gamma(2);
        o.require(std::abs(ratio - 0.5) <= 1e-14, "ratio " + num(ratio, 17));
        o.require(r.nu_measure.mid() == 0.5 * e.nu_measure.mid(), "root (0) measure " + num(r.nu_measure.mid(), 17));
        o.note("nu(E_2) = " + num(e.nu_measure.mid()) + ", ratio " + num(ratio) + ", root (0) " +
               num(r.nu_measure.mid()));
        return o;
    });

    criterion("recurrence certificate", 0, [&] {
        Outcome o;
        std::size_t cylinders = 0, checks = 0, miss = 0, unknown = 0;
        for (const IfsSpec* s : {&cantor, &gauss}) {
            const double gamma = s == &cantor ? cantor_gamma : gauss_ref;
            for (const char* spec : {"power:c=1,a=1", "geom:rho=0.5", "logcorr"}) {
                const RateFunction phi = RateFunction::parse(spec, gamma);
                for (int n = 1; n <= 10; ++n) {
                    const EnFamily fam = build_En(*s, gamma, phi, n, Word{});
                    for (std::size_t m = 0; m < fam.members.size(); ++m) {
                        ++cylinders;
                        CounterRng rng(static_cast<std::uint64_t>(n), m);
                        for (int t = 0; t < 100; ++t) {
                            Word x = fam.members[m].target;
                            for (int j = 0; j < 40; ++j) x.push_back(static_cast<Symbol>(rng.next() % 2));
                            const Verdict v = classify_recurrence_event(*s, x, n, phi).verdict;
                            ++checks;
                            miss += v == Verdict::Miss;
                            unknown += v == Verdict::Unknown;
                        }
                    }
                }
            }
        }
        o.require(miss == 0, std::to_string(miss) + " MISS");
        o.require(unknown == 0, std::to_string(unknown) + " UNKNOWN");
        o.note(std::to_string(cylinders) + " cylinders, " + std::to_string(checks) + " points, all HIT");
        return o;
    });

    const RateFunction harmonic = RateFunction::parse("power:c=1,a=1", cantor_gamma);

    criterion("series ratio band", 60.0, [&] {
        Outcome o;
        std::vector<double> all;
        for (const Word& root : {Word{}, Word{0}, Word{0, 1}}) {
            std::vector<double> band;
            for (const SeriesRow& r : series_ratio(cantor, cantor_gamma, harmonic, root, 12)) {
                if (r.Q >= 4) {
                    band.push_back(r.ratio.lo);
                    band.push_back(r.ratio.hi);
                }
            }
            o.require(spread(band) <= 4.0, "root (" + root.to_string() + ") max/min " + num(spread(band)));
            all.insert(all.end(), band.begin(), band.end());
        }
        o.note("ratios in [" + num(*std::min_element(all.begin(), all.end()), 4) + ", " +
               num(*std::max_element(all.begin(), all.end()), 4) + "], max/min " + num(spread(all), 4));
        return o;
    });

    criterion("quasi-independence", 0, [&] {
        Outcome o;
        std::vector<double> cs;
        for (const Word& root : {Word{}, Word{0}, Word{0, 1}}) {
            std::vector<double> per_root;
            const SecondMomentReport rep = second_moment_report(cantor, cantor_gamma, harmonic, root, 10);
            for (const SecondMomentRow& row : rep.rows) {
                if (row.Q == 6 || row.Q == 8 || row.Q == 10) {
                    o.require(row.S2.hi <= row.fitted_C.hi * rep.nu_root.hi * (row.S_tilde + row.S_tilde * row.S_tilde) *
                                               (1 + 1e-12),
                              "S2 above fitted bound");
                    per_root.push_back(row.fitted_C.mid());
                }
            }
            o.require(spread(per_root) <= 2.0, "C spread " + num(spread(per_root)));
            cs.insert(cs.end(), per_root.begin(), per_root.end());
        }
        // Pairwise intersections against Monte Carlo membership.
        const RateFunction third = RateFunction::geometric(1.0 / 3.0, cantor_gamma);
        int worst_pair = 0;
        double worst_z = 0.0;
        for (const auto& [a, b, phi] : {std::tuple{2, 3, &third}, std::tuple{3, 5, &harmonic}, std::tuple{4, 6, &harmonic}}) {
            const EnFamily fa = build_En(cantor, cantor_gamma, *phi, a, Word{});
            const EnFamily fb = build_En(cantor, cantor_gamma, *phi, b, Word{});
            const double exact = pairwise_intersection(cantor, cantor_gamma, fa, fb).mid();
            const MembershipEstimate mc =
                estimate_membership(cantor, cantor_gamma, {fa, fb}, 1000000, static_cast<std::uint64_t>(100 + a));
            const double se = MembershipEstimate::std_error(exact, mc.samples);
            const double z = std::abs(mc.in_both - exact) / se;
            if (z > worst_z) worst_z = z, worst_pair = a;
            o.require(z <= 3.0, "E_" + std::to_string(a) + " cap E_" + std::to_string(b) + " off by " + num(z, 3) + " se");
        }
        o.note("C in [" + num(*std::min_element(cs.begin(), cs.end()), 4) + ", " +
               num(*std::max_element(cs.begin(), cs.end()), 4) + "]; MC worst " + num(worst_z, 3) + " se (pair from E_" +
               std::to_string(worst_pair) + ")");
        return o;
    });

    criterion("chung-erdos lower bound", 0, [&] {
        Outcome o;
        const SecondMomentReport rep = second_moment_report(cantor, cantor_gamma, harmonic, Word{}, 10);
        double prev = 0.0;
        for (const SecondMomentRow& row : rep.rows) {
            o.require(row.ce_lower.lo > 0.0, "ce_lower not positive at Q=" + std::to_string(row.Q));
            o.require(row.ce_lower.mid() >= prev, "ce_lower decreases at Q=" + std::to_string(row.Q));
            prev = row.ce_lower.mid();
        }
        std::vector<EnFamily> fams;
        for (int n = 1; n <= 10; ++n) fams.push_back(build_En(cantor, cantor_gamma, harmonic, n, Word{}));
        const MembershipEstimate mc = estimate_membership(cantor, cantor_gamma, fams, 1000000, 77);
        const double bound = mc.in_union + 3 * MembershipEstimate::std_error(mc.in_union, mc.samples);
        o.require(rep.ce_lower.hi <= bound, "ce_lower " + num(rep.ce_lower.hi) + " above MC union " + num(bound));
        o.note("ce_lower(Q=10) " + num(rep.ce_lower.mid()) + " <= MC union " + num(mc.in_union));
        return o;
    });

    criterion("covering tail", 0, [&] {
        Outcome o;
        double worst = 0.0, worst_factor = 0.0;
        for (const IfsSpec* s : {&cantor, &golden, &sierpinski}) {
            const double gamma = solve_gamma(*s, 1e-14, 1).gamma.mid();
            // phi(n)^gamma = 2^-n
            const RateFunction phi = RateFunction::geometric(std::pow(2.0, -1.0 / gamma), gamma);
            for (int N : {5, 10, 20}) {
                const CoveringTail t = covering_tail(*s, gamma, phi, N, 10);
                double closed = 0.0;
                for (int n = N; n <= N + 10; ++n) closed += std::ldexp(1.0, -n);
                closed *= std::pow(2.0 * t.K, gamma);
                worst = std::max(worst, std::abs(t.value.mid() - closed));
                const CoveringTail t5 = covering_tail(*s, gamma, phi, N + 5, 10);
                worst_factor = std::max(worst_factor, std::abs(t5.value.mid() / t.value.mid() - 1.0 / 32) * 32);
            }
        }
        o.require(worst <= 1e-10, "closed form off by " + num(worst));
        o.require(worst_factor <= 1e-10, "N vs N+5 factor off by " + num(worst_factor));
        o.note("max |tail - closed| " + num(worst, 2) + ", factor 2^-5 rel err " + num(worst_factor, 2));
        return o;
    });

    criterion("monte carlo dichotomy", 120.0, [&] {
        Outcome o;
        DichotomyConfig cfg;
        cfg.gamma = cantor_gamma;
        cfg.points = 10000;
        cfg.seed = 2025;
        std::string bands;
        for (const char* spec : {"power:c=1,a=1", "power:c=1,a=2"}) {
            const RateFunction phi = RateFunction::parse(spec, cantor_gamma);
            const DichotomyReport rep = run_dichotomy(cantor, phi, cfg);
            const DichotomyReport again = run_dichotomy(cantor, phi, cfg);
            bool same = true;
            for (std::size_t i = 0; i < rep.rows.size(); ++i) same &= rep.rows[i].empirical_hit_rate == again.rows[i].empirical_hit_rate;
            o.require(same, std::string(spec) + " not deterministic");
            const double band = rep.summary.band_max / rep.summary.band_min;
            o.require(band <= 8.0, std::string(spec) + " band " + num(band));
            bands += std::string(bands.empty() ? "" : ", ") + spec + " band [" + num(rep.summary.band_min, 4) + ", " +
                     num(rep.summary.band_max, 4) + "]";
            if (phi.divergent()) {
                const double growth = rep.rows[24].mean_cumulative_hits - rep.rows[4].mean_cumulative_hits;
                const double need = 0.5 * (std::log(25.0) - std::log(5.0)) * rep.summary.band_min;
                o.require(growth >= need, "growth " + num(growth) + " < " + num(need));
                bands += " growth " + num(growth, 4) + " >= " + num(need, 4);
            }
        }
        o.note(bands);
        return o;
    });

    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
