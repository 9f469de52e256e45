#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellsim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2.0;

/// An angle in radians, kept in canonical form on [0, 2*pi).
class Angle {
public:
    constexpr Angle() = default;

    /// Normalizes into [0, 2*pi). Throws std::invalid_argument for
    /// non-finite input.
    explicit Angle(double radians) : radians_(canonicalize(radians)) {}

    [[nodiscard]] double radians() const { return radians_; }

    friend bool operator==(Angle, Angle) = default;

private:
    static double canonicalize(double x) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("Angle: non-finite value");
        }
        double r = std::fmod(x, two_pi);
        if (r < 0.0) {
            r += two_pi;
        }
        if (r >= two_pi) {
            // fmod result can round up to the period for inputs just below it
            r = 0.0;
        }
        return r;
    }

    double radians_ = 0.0;
};

inline Angle normalize_angle(double radians) { return Angle(radians); }

}  // namespace bellsim
