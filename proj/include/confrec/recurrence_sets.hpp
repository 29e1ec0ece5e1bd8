#pragma once

#include "confrec/ifs.hpp"
#include "confrec/rate.hpp"

#include <cstdint>
#include <vector>

namespace confrec {

// Normalized natural measure nu = mu / mu(X) of cylinders.
//
// Similarity systems: nu(X_I) = prod p_i with p_i = r_i^gamma / sum_j r_j^gamma.
// This is exact under the open set condition; without a declared OSC the same
// numbers are returned with `exact` false.
// Conformal systems: nu(X_I) lies in [inf |phi_I'|^gamma, sup |phi_I'|^gamma]
// (gamma-conformal measure), which is never exact.
class MeasureModel {
public:
    MeasureModel(const IfsSpec& ifs, double gamma);

    Interval nu(const Word& word) const;
    bool exact() const { return exact_; }
    bool osc_warning() const { return warning_; }
    bool similarity() const { return similarity_; }
    const std::vector<double>& digit_probabilities() const { return p_; }
    double gamma() const { return gamma_; }

private:
    const IfsSpec* ifs_;
    double gamma_;
    bool similarity_;
    bool exact_;
    bool warning_;
    std::vector<double> p_;
};

struct NuValue {
    Interval nu;
    bool exact = false;
    bool osc_warning = false;
};

NuValue nu_cylinder(const IfsSpec& ifs, double gamma, const Word& word);

struct InnerCylinder {
    Word base;         // I, |I| = n
    std::size_t k = 0;
    std::size_t s = 0;
    Word prefix;       // I^k (i_1..i_s)
    Word target;       // I^{k+1} (i_1..i_s)
};

inline constexpr std::size_t kMaxInnerDepth = 2048;

// Shortest nonempty prefix of I^infinity whose box lies in the ball of radius
// rho about the fixed point of phi_I.
InnerCylinder find_inner_cylinder(const IfsSpec& ifs, const Word& base, double rho,
                                  std::size_t max_depth = kMaxInnerDepth);

struct EnFamily {
    int n = 0;
    Word root;
    double phi_n = 0.0;
    std::vector<InnerCylinder> members;  // ordered by base word
    std::vector<Interval> member_nu;
    Interval nu_measure;
};

EnFamily build_En(const IfsSpec& ifs, double gamma, const RateFunction& phi, int n, const Word& root,
                  std::uint64_t budget = std::uint64_t{1} << 24);

struct SeriesRow {
    int Q = 0;
    Interval nu_En;  // nu(E_Q)
    double phi_gamma = 0.0;
    Interval S;      // sum of nu(E_n), n = n0..Q
    double S_tilde = 0.0;  // sum of phi(n)^gamma
    Interval ratio;  // S / (nu(X_J) S_tilde)
};

// First index of the series: max(|J|, 1).
int series_start(const Word& root);

std::vector<SeriesRow> series_ratio(const IfsSpec& ifs, double gamma, const RateFunction& phi, const Word& root,
                                    int Q);

// nu(X_a cap X_b): the longer word's measure when one is a prefix of the other.
Interval cylinder_intersection(const MeasureModel& model, const Word& a, const Word& b);

// nu(E_n cap E_m) by the prefix rule.
Interval pairwise_intersection(const IfsSpec& ifs, double gamma, const EnFamily& a, const EnFamily& b);

struct SecondMomentRow {
    int Q = 0;
    Interval S;
    Interval S2;
    Interval ce_lower;  // S^2 / S2
    double S_tilde = 0.0;
    Interval fitted_C;  // S2 / (nu(X_J) (S_tilde + S_tilde^2))
};

struct SecondMomentReport {
    int Q = 0;
    Word root;
    Interval nu_root;
    Interval S;
    Interval S2;
    Interval ce_lower;
    double kappa = 0.0;
    double S_tilde = 0.0;
    Interval fitted_C;
    std::vector<SecondMomentRow> rows;  // one per Q' = n0..Q
};

// Assembles the report from explicit families (families[i] holds E_{n0+i}).
SecondMomentReport second_moment_from_families(const IfsSpec& ifs, double gamma, const std::vector<EnFamily>& families,
                                               const std::vector<double>& phi_gamma, const Word& root);

SecondMomentReport second_moment_report(const IfsSpec& ifs, double gamma, const RateFunction& phi, const Word& root,
                                        int Q);

struct CoveringTail {
    Interval value;
    double K = 0.0;
};

// sum_{n=N}^{N+span} sum_{I in D^n} (2 K |phi_I'| phi(n))^gamma, K = 1 / (1 - max_i sup |phi_i'|).
CoveringTail covering_tail(const IfsSpec& ifs, double gamma, const RateFunction& phi, int N, int span,
                           std::uint64_t budget = std::uint64_t{1} << 24);

// Monte Carlo membership: fraction of nu-distributed points lying in each set.
struct MembershipEstimate {
    std::size_t samples = 0;
    std::vector<double> in_family;   // per family
    double in_both = 0.0;            // families[0] and families[1] (when >= 2 given)
    double in_union = 0.0;

    static double std_error(double p, std::size_t n);
};

MembershipEstimate estimate_membership(const IfsSpec& ifs, double gamma, const std::vector<EnFamily>& families,
                                       std::size_t samples, std::uint64_t seed);

} // namespace confrec
