#pragma once

#include <cmath>

namespace confrec {

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x)) {
            c_ += (s_ - t) + x;
        } else {
            c_ += (x - t) + s_;
        }
        s_ = t;
    }
    CompensatedSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace confrec
