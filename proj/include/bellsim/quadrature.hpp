#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "bellsim/angle.hpp"
#include "bellsim/singlet.hpp"

namespace bellsim {

// Closed-form style reference values for the simulated quantities,
// computed by Gauss-Legendre quadrature over the hidden variable. The
// integrands are products of sign functions and |cos|, so they are
// analytic between the points where cos(x - theta) changes sign;
// splitting at those points restores spectral accuracy (errors far
// below the 1e-9 the callers need).

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1], positive half; nodes are
// symmetric and weights repeat.
inline constexpr std::array<double, 8> gl16_nodes = {
    0.09501250983763745, 0.2816035507792589,  0.45801677765722737,
    0.6178762444026438,  0.755404408355003,   0.8656312023878318,
    0.9445750230732326,  0.9894009349916499};

inline constexpr std::array<double, 8> gl16_weights = {
    0.18945061045506859, 0.1826034150449236,  0.16915651939500262,
    0.14959598881657676, 0.12462897125553403, 0.09515851168249259,
    0.062253523938647706, 0.027152459411754037};

}  // namespace detail

template <typename F>
double gauss_legendre_16(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < detail::gl16_nodes.size(); ++i) {
        const double t = halfwidth * detail::gl16_nodes[i];
        sum += detail::gl16_weights[i] * (f(mid - t) + f(mid + t));
    }
    return halfwidth * sum;
}

/// Integrates f over [breakpoints.front(), breakpoints.back()], one
/// 16-point panel per consecutive pair. Breakpoints must be sorted.
template <typename F>
double integrate_piecewise(const F& f, const std::vector<double>& breakpoints) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        total += gauss_legendre_16(f, breakpoints[i], breakpoints[i + 1]);
    }
    return total;
}

namespace detail {

// [0, 2*pi] split wherever cos(x - theta_a) or cos(x - theta_b)
// changes sign, i.e. at theta +- pi/2 reduced mod 2*pi.
inline std::vector<double> sign_change_breakpoints(Angle theta_a,
                                                   Angle theta_b) {
    std::vector<double> pts{0.0, two_pi};
    for (double theta : {theta_a.radians(), theta_b.radians()}) {
        pts.push_back(Angle(theta - half_pi).radians());
        pts.push_back(Angle(theta + half_pi).radians());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace detail

/// E(A B) under the protocol's hidden-variable density; equals
/// -cos(theta_a - theta_b) up to quadrature error.
inline double quadrature_correlation(Angle theta_a, Angle theta_b) {
    const auto integrand = [&](double x) {
        const Angle ax{x};
        return static_cast<double>(measure_a(ax, theta_a) *
                                   measure_b(ax, theta_b)) *
               target_density(ax, theta_a);
    };
    return integrate_piecewise(integrand,
                               detail::sign_change_breakpoints(theta_a, theta_b));
}

enum class Party { a, b };

/// E(A) or E(B) under the same density; both vanish identically.
inline double quadrature_marginal(Party party, Angle theta_a, Angle theta_b) {
    const auto integrand = [&](double x) {
        const Angle ax{x};
        const Spin s = (party == Party::a) ? measure_a(ax, theta_a)
                                           : measure_b(ax, theta_b);
        return static_cast<double>(s.value()) * target_density(ax, theta_a);
    };
    return integrate_piecewise(integrand,
                               detail::sign_change_breakpoints(theta_a, theta_b));
}

}  // namespace bellsim
