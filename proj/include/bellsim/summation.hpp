#pragma once

#include <cmath>

namespace bellsim {

/// Neumaier-compensated accumulator. Keeps long sums of doubles
/// accurate to within a couple of ulps regardless of term ordering.
class NeumaierSum {
public:
    void add(double term) {
        const double t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            compensation_ += (sum_ - t) + term;
        } else {
            compensation_ += (term - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace bellsim
