#pragma once

#include <cmath>

#include "bellsim/angle.hpp"

namespace bellsim {

/// A two-valued measurement outcome, +1 or -1.
class Spin {
public:
    static constexpr Spin plus() { return Spin(+1); }
    static constexpr Spin minus() { return Spin(-1); }

    [[nodiscard]] constexpr int value() const { return value_; }

    constexpr Spin operator-() const { return Spin(-value_); }

    /// Product of two outcomes, in {-1, +1}.
    friend constexpr int operator*(Spin lhs, Spin rhs) {
        return lhs.value_ * rhs.value_;
    }

    friend constexpr bool operator==(Spin, Spin) = default;

private:
    explicit constexpr Spin(int v) : value_(v) {}
    int value_ = +1;
};

namespace detail {

// sign(0) is taken as +1 so that both parties agree bit-for-bit; the
// event has probability zero under the continuous hidden-variable
// density.
inline Spin sign_of(double v) {
    return v < 0.0 ? Spin::minus() : Spin::plus();
}

}  // namespace detail

/// Hidden-variable density for the singlet construction:
/// p(x) = |cos(x - theta_a)| / 4, normalized over [0, 2*pi).
inline double target_density(Angle x, Angle theta_a) {
    return 0.25 * std::abs(std::cos(x.radians() - theta_a.radians()));
}

/// First party's measurement rule: the sign of cos(x - theta_a).
inline Spin measure_a(Angle x, Angle theta_a) {
    return detail::sign_of(std::cos(x.radians() - theta_a.radians()));
}

/// Second party's measurement rule: the negated sign of cos(x - theta_b).
/// The negation makes equal settings perfectly anticorrelated.
inline Spin measure_b(Angle x, Angle theta_b) {
    return -detail::sign_of(std::cos(x.radians() - theta_b.radians()));
}

}  // namespace bellsim
