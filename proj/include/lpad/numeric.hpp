#pragma once

#include <cmath>
#include <string>

namespace lpad {

/// Neumaier's compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }

    void merge(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.carry_);
    }

    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// `x` with nine decimals, trailing zeros (and a bare point) removed: 0.9, 0.147168, 1.
std::string format_trimmed(double x);

} // namespace lpad
