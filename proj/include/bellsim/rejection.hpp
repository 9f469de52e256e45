#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "bellsim/angle.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

/// Majorizer for rejection sampling: a proposal density g with a
/// constant c >= 1 such that f(x) <= c * g(x) for the target f.
template <typename GDensity, typename GSampler>
struct Envelope {
    double c;
    GDensity g_density;  // Angle -> double
    GSampler g_sampler;  // TrialStream& -> Angle
};

struct RejectionResult {
    Angle sample;
    std::uint64_t iterations;       // accepting iteration, >= 1
    std::uint64_t draws_consumed;   // always 2 * iterations
};

inline constexpr std::uint64_t default_iteration_cap = 1'000'000;

/// Thrown when the sampler exceeds its iteration cap. Acceptance is
/// geometric with success probability 1/c, so hitting any realistic cap
/// signals an invalid envelope or a broken stream, not bad luck.
class IterationCapError : public std::runtime_error {
public:
    IterationCapError(std::uint64_t cap, double c)
        : std::runtime_error(
              "rejection_sample: no acceptance within " + std::to_string(cap) +
              " iterations (envelope c = " + std::to_string(c) +
              "); envelope is likely invalid for the target density") {}
};

/// Numerically checks f(x) <= c * g(x) on a dense grid over [0, 2*pi).
/// A failing envelope is a configuration error; run this at setup, not
/// per sample.
template <typename Density, typename GDensity, typename GSampler>
bool envelope_dominates(Density&& f, const Envelope<GDensity, GSampler>& env,
                        int grid_points = 4096) {
    if (!(env.c >= 1.0)) {
        return false;
    }
    for (int i = 0; i < grid_points; ++i) {
        const Angle x(two_pi * i / grid_points);
        if (f(x) > env.c * env.g_density(x)) {
            return false;
        }
    }
    return true;
}

/// Draws one variate distributed exactly according to f.
///
/// Each iteration consumes exactly two draws from the stream, in fixed
/// order: the proposal w first, then the acceptance variate u. The
/// accept test is the division-free form u * c * g(w) <= f(w); an
/// iteration with f(w) == 0 is a rejection.
template <typename Density, typename GDensity, typename GSampler>
RejectionResult rejection_sample(TrialStream& stream, Density&& f,
                                 const Envelope<GDensity, GSampler>& env,
                                 std::uint64_t iteration_cap = default_iteration_cap) {
    for (std::uint64_t k = 1; k <= iteration_cap; ++k) {
        const Angle w = env.g_sampler(stream);
        const double u = stream.next_uniform();
        const double fw = f(w);
        if (fw > 0.0 && u * env.c * env.g_density(w) <= fw) {
            return RejectionResult{w, k, 2 * k};
        }
    }
    throw IterationCapError(iteration_cap, env.c);
}

/// P(K = k) = (1-p)^(k-1) * p for the accepting-iteration count K.
inline double geometric_pmf(double p, std::uint64_t k) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("geometric_pmf: p must be in (0, 1]");
    }
    if (k < 1) {
        throw std::invalid_argument("geometric_pmf: k must be >= 1");
    }
    return std::pow(1.0 - p, static_cast<double>(k - 1)) * p;
}

}  // namespace bellsim
