#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "bellsim/angle.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/singlet.hpp"

namespace bellsim {

// Baseline local-hidden-variable model for contrast: both parties
// measure against one shared uniform angle with no communication. Its
// correlation is the saw-tooth -(1 - 2*delta/pi) for delta in [0, pi],
// which caps |S| at 2 in the CHSH combination below.

/// One communication-free trial; consumes exactly one draw.
inline std::pair<Spin, Spin> lhv_trial(TrialStream& stream, Angle theta_a,
                                       Angle theta_b) {
    const Angle x{stream.next_uniform() * two_pi};
    return {measure_a(x, theta_a), measure_b(x, theta_b)};
}

/// Saw-tooth correlation of the model above, exact for any settings.
inline double lhv_correlation(Angle theta_a, Angle theta_b) {
    double delta = std::abs(theta_a.radians() - theta_b.radians());
    if (delta > std::numbers::pi) delta = two_pi - delta;
    return -(1.0 - 2.0 * delta / std::numbers::pi);
}

struct ChshAngles {
    Angle a;
    Angle a_prime;
    Angle b;
    Angle b_prime;
};

/// The settings that maximise |S| for the cosine correlation:
/// a = 0, a' = pi/2, b = pi/4, b' = 3*pi/4.
inline ChshAngles standard_chsh_angles() {
    return ChshAngles{Angle{0.0}, Angle{half_pi},
                      Angle{std::numbers::pi / 4.0},
                      Angle{3.0 * std::numbers::pi / 4.0}};
}

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
inline double chsh_value(double e_ab, double e_ab_prime, double e_a_prime_b,
                         double e_a_prime_b_prime) {
    for (double e : {e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime}) {
        if (!(e >= -1.0 && e <= 1.0)) {
            throw std::invalid_argument(
                "chsh_value: correlations must lie in [-1, 1]");
        }
    }
    return e_ab - e_ab_prime + e_a_prime_b + e_a_prime_b_prime;
}

}  // namespace bellsim
