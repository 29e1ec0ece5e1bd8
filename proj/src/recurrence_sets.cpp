#include "confrec/recurrence_sets.hpp"

#include "confrec/errors.hpp"
#include "confrec/kernels.hpp"
#include "confrec/sum.hpp"
#include "confrec/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace confrec {

namespace {

// Inner cylinders must sit strictly inside the ball.
constexpr double kContainmentMargin = 1e-9;

std::vector<Word> targets_of(const EnFamily& f)
{
    std::vector<Word> out;
    out.reserve(f.members.size());
    for (const InnerCylinder& c : f.members) out.push_back(c.target);
    return out;
}

void check_gamma(double gamma)
{
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be nonnegative");
}

} // namespace

MeasureModel::MeasureModel(const IfsSpec& ifs, double gamma)
    : ifs_(&ifs), gamma_(gamma), similarity_(ifs.all_similarity())
{
    check_gamma(gamma);
    warning_ = !ifs.osc_declared();
    exact_ = similarity_ && ifs.osc_declared();
    if (similarity_) {
        CompensatedSum z;
        for (std::size_t i = 0; i < ifs.alphabet_size(); ++i) {
            p_.push_back(std::pow(ifs.ratio(static_cast<Symbol>(i)), gamma));
            z += p_.back();
        }
        for (double& p : p_) p /= z.value();
    }
}

Interval MeasureModel::nu(const Word& word) const
{
    ifs_->check_word(word);
    if (word.empty()) return Interval::point(1.0);
    if (similarity_) {
        double v = 1.0;
        for (Symbol s : word.symbols()) v *= p_[s];
        return Interval::point(v);
    }
    return pow_nonneg(derivative_norm_bounds(*ifs_, word), gamma_);
}

NuValue nu_cylinder(const IfsSpec& ifs, double gamma, const Word& word)
{
    const MeasureModel model(ifs, gamma);
    return {model.nu(word), model.exact(), model.osc_warning()};
}

InnerCylinder find_inner_cylinder(const IfsSpec& ifs, const Word& base, double rho, std::size_t max_depth)
{
    ifs.check_word(base);
    if (base.empty()) throw DomainError("inner cylinder needs a nonempty word");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");

    const Box centre = fixed_point(ifs, base, std::numeric_limits<double>::infinity());
    const double limit = rho * (1.0 - kContainmentMargin);
    for (std::size_t m = 1; m <= max_depth; ++m) {
        const Word prefix = base.periodic_prefix(m);
        if (distance_range(cylinder_box(ifs, prefix), centre).hi <= limit) {
            InnerCylinder out;
            out.base = base;
            out.k = m / base.size();
            out.s = m % base.size();
            out.prefix = prefix;
            out.target = base.concat(prefix);
            return out;
        }
    }
    throw ResourceError("inner cylinder for (" + base.to_string() + ") needs more than " +
                        std::to_string(max_depth) + " symbols at rho = " + std::to_string(rho));
}

EnFamily build_En(const IfsSpec& ifs, double gamma, const RateFunction& phi, int n, const Word& root,
                  std::uint64_t budget)
{
    check_gamma(gamma);
    ifs.check_word(root);
    if (n < 1 || static_cast<std::size_t>(n) < root.size()) throw DomainError("build_En needs n >= max(1, |root|)");
    const std::size_t extra = static_cast<std::size_t>(n) - root.size();
    if (word_count(ifs.alphabet_size(), extra, budget) == 0) {
        throw ResourceError("enumeration budget exceeded for E_" + std::to_string(n));
    }

    EnFamily fam;
    fam.n = n;
    fam.root = root;
    fam.phi_n = phi(n);
    fam.members = kernels::parallel::inner_cylinders(ifs, root, static_cast<std::size_t>(n), fam.phi_n / 2.0);

    std::vector<Word> t = targets_of(fam);
    std::sort(t.begin(), t.end());
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i - 1].is_prefix_of(t[i])) {
            throw BracketError("target words (" + t[i - 1].to_string() + ") and (" + t[i].to_string() +
                               ") are prefix-comparable");
        }
    }

    const MeasureModel model(ifs, gamma);
    fam.nu_measure = Interval::point(0.0);
    for (const InnerCylinder& c : fam.members) {
        fam.member_nu.push_back(model.nu(c.target));
        fam.nu_measure += fam.member_nu.back();
    }
    return fam;
}

int series_start(const Word& root) { return std::max<int>(1, static_cast<int>(root.size())); }

namespace {

// All levels n0..Q together, checked before any family is built.
void check_levels(const IfsSpec& ifs, const Word& root, int Q)
{
    const std::uint64_t budget = std::uint64_t{1} << 24;
    std::uint64_t total = 0;
    for (int n = series_start(root); n <= Q; ++n) {
        const std::uint64_t c = word_count(ifs.alphabet_size(), static_cast<std::size_t>(n) - root.size(), budget);
        if (c == 0 || total + c > budget) {
            throw ResourceError("enumeration budget exceeded: levels up to Q = " + std::to_string(Q) + " need more than " +
                                std::to_string(budget) + " words");
        }
        total += c;
    }
}

} // namespace

std::vector<SeriesRow> series_ratio(const IfsSpec& ifs, double gamma, const RateFunction& phi, const Word& root, int Q)
{
    const int n0 = series_start(root);
    if (Q < n0) throw DomainError("Q must be at least max(1, |root|)");
    check_levels(ifs, root, Q);
    const Interval nu_root = MeasureModel(ifs, gamma).nu(root);
    std::vector<SeriesRow> rows;
    Interval S = Interval::point(0.0);
    CompensatedSum S_tilde;
    for (int n = n0; n <= Q; ++n) {
        const EnFamily fam = build_En(ifs, gamma, phi, n, root);
        SeriesRow row;
        row.Q = n;
        row.nu_En = fam.nu_measure;
        row.phi_gamma = phi.phi_gamma(n);
        S += fam.nu_measure;
        S_tilde += row.phi_gamma;
        row.S = S;
        row.S_tilde = S_tilde.value();
        row.ratio = S / (nu_root * Interval::point(row.S_tilde));
        rows.push_back(row);
    }
    return rows;
}

Interval cylinder_intersection(const MeasureModel& model, const Word& a, const Word& b)
{
    if (a.is_prefix_of(b)) return model.nu(b);
    if (b.is_prefix_of(a)) return model.nu(a);
    return Interval::point(0.0);
}

Interval pairwise_intersection(const IfsSpec& ifs, double gamma, const EnFamily& a, const EnFamily& b)
{
    if (a.root != b.root) throw DomainError("families must share the root word");
    const MeasureModel model(ifs, gamma);
    return kernels::parallel::family_intersection(model, targets_of(a), targets_of(b));
}

SecondMomentReport second_moment_from_families(const IfsSpec& ifs, double gamma, const std::vector<EnFamily>& families,
                                               const std::vector<double>& phi_gamma, const Word& root)
{
    if (families.empty() || families.size() != phi_gamma.size()) {
        throw DomainError("need one phi^gamma value per family");
    }
    const MeasureModel model(ifs, gamma);
    std::vector<std::vector<Word>> targets;
    for (const EnFamily& f : families) targets.push_back(targets_of(f));

    SecondMomentReport rep;
    rep.root = root;
    rep.nu_root = model.nu(root);
    for (std::size_t i = 0; i < ifs.alphabet_size(); ++i) {
        rep.kappa = std::max(rep.kappa, std::pow(ifs.map_derivative(static_cast<Symbol>(i)).hi, gamma));
    }

    Interval S = Interval::point(0.0), S2 = Interval::point(0.0);
    CompensatedSum S_tilde;
    for (std::size_t q = 0; q < families.size(); ++q) {
        S += families[q].nu_measure;
        S2 += families[q].nu_measure;
        for (std::size_t p = 0; p < q; ++p) {
            const Interval x = kernels::parallel::family_intersection(model, targets[p], targets[q]);
            S2 += x + x;
        }
        S_tilde += phi_gamma[q];
        SecondMomentRow row;
        row.Q = families[q].n;
        row.S = S;
        row.S2 = S2;
        row.ce_lower = sqr(S) / S2;
        row.S_tilde = S_tilde.value();
        row.fitted_C = S2 / (rep.nu_root * Interval::point(row.S_tilde + row.S_tilde * row.S_tilde));
        rep.rows.push_back(row);
    }
    const SecondMomentRow& last = rep.rows.back();
    rep.Q = last.Q;
    rep.S = last.S;
    rep.S2 = last.S2;
    rep.ce_lower = last.ce_lower;
    rep.S_tilde = last.S_tilde;
    rep.fitted_C = last.fitted_C;
    return rep;
}

SecondMomentReport second_moment_report(const IfsSpec& ifs, double gamma, const RateFunction& phi, const Word& root,
                                        int Q)
{
    const int n0 = series_start(root);
    if (Q < n0) throw DomainError("Q must be at least max(1, |root|)");
    check_levels(ifs, root, Q);
    std::vector<EnFamily> fams;
    std::vector<double> pg;
    for (int n = n0; n <= Q; ++n) {
        fams.push_back(build_En(ifs, gamma, phi, n, root));
        pg.push_back(phi.phi_gamma(n));
    }
    return second_moment_from_families(ifs, gamma, fams, pg, root);
}

CoveringTail covering_tail(const IfsSpec& ifs, double gamma, const RateFunction& phi, int N, int span,
                           std::uint64_t budget)
{
    check_gamma(gamma);
    if (N < 1) throw DomainError("N must be at least 1");
    if (span < 0) throw DomainError("span must be nonnegative");

    CoveringTail out;
    const Interval K = Interval::point(1.0) / (Interval::point(1.0) - Interval::point(ifs.max_sup_derivative()));
    out.K = K.hi;
    const Interval two_k_gamma = pow_nonneg(Interval::point(2.0) * K, gamma);

    Interval total = Interval::point(0.0);
    if (ifs.all_similarity()) {
        // sum over D^n of r_I^gamma = (sum_i r_i^gamma)^n
        Interval z = Interval::point(0.0);
        for (std::size_t i = 0; i < ifs.alphabet_size(); ++i) {
            z += pow_nonneg(Interval::point(ifs.ratio(static_cast<Symbol>(i))), gamma);
        }
        for (int n = N; n <= N + span; ++n) {
            Interval zn = Interval::point(1.0);
            for (int k = 0; k < n; ++k) zn = zn * z;
            total += two_k_gamma * Interval::point(phi.phi_gamma(n)) * zn;
        }
    } else {
        for (int n = N; n <= N + span; ++n) {
            if (word_count(ifs.alphabet_size(), static_cast<std::size_t>(n), budget) == 0) {
                throw ResourceError("enumeration budget exceeded at depth " + std::to_string(n));
            }
            const auto sums = kernels::parallel::partition_sums(ifs, Word{}, static_cast<std::size_t>(n), gamma);
            const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (n + 4);
            const Interval part{sums.upper, round_up(sums.upper * (1.0 + slack))};
            total += two_k_gamma * Interval::point(phi.phi_gamma(n)) * part;
        }
    }
    out.value = total;
    return out;
}

double MembershipEstimate::std_error(double p, std::size_t n)
{
    return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

MembershipEstimate estimate_membership(const IfsSpec& ifs, double gamma, const std::vector<EnFamily>& families,
                                       std::size_t samples, std::uint64_t seed)
{
    if (samples == 0) throw DomainError("samples must be positive");
    std::size_t length = 1;
    std::vector<std::vector<Word>> targets;
    for (const EnFamily& f : families) {
        targets.push_back(targets_of(f));
        for (const Word& w : targets.back()) length = std::max(length, w.size());
    }
    const BlockSampler sampler(ifs, gamma, 1);
    const auto counts = kernels::parallel::membership_counts(sampler, targets, length, samples, seed);
    MembershipEstimate out;
    out.samples = samples;
    const double n = static_cast<double>(samples);
    for (std::size_t f = 0; f < families.size(); ++f) out.in_family.push_back(static_cast<double>(counts[f]) / n);
    out.in_both = static_cast<double>(counts[families.size()]) / n;
    out.in_union = static_cast<double>(counts[families.size() + 1]) / n;
    return out;
}

} // namespace confrec
