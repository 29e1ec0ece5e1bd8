#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace confrec {

// phi : N -> (0, inf). Families defined through phi^gamma need gamma_ref.
class RateFunction {
public:
    enum class Family { Power, Geometric, LogCorrected, Table };

    // phi(n)^gamma = c / n^a
    static RateFunction power(double c, double a, double gamma);
    // phi(n) = rho^n
    static RateFunction geometric(double rho, double gamma);
    // phi(n)^gamma = 1 / (n log(n + 1))
    static RateFunction log_corrected(double gamma);
    // phi(n) = values[n - 1]
    static RateFunction table(std::vector<double> values, double gamma);

    // "power:c=1,a=1", "geom:rho=0.5", "logcorr", "table:@file.csv"
    static RateFunction parse(std::string_view spec, double gamma);

    double operator()(int n) const;
    double phi_gamma(int n) const;

    Family family() const { return family_; }
    double gamma() const { return gamma_; }
    double c() const { return c_; }
    double a() const { return a_; }
    double rho() const { return rho_; }
    // Largest n with a value (tables); 0 means unbounded.
    int max_n() const { return static_cast<int>(table_.size()); }

    // Whether sum phi(n)^gamma diverges. Exact for the parametric families;
    // tables use the dyadic block heuristic in summability_note().
    bool divergent() const;
    std::string summability_note() const;
    std::string describe() const;

private:
    Family family_ = Family::Power;
    double gamma_ = 1.0;
    double c_ = 1.0, a_ = 1.0, rho_ = 0.5;
    std::vector<double> table_;
};

} // namespace confrec
