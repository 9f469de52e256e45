#pragma once

#include <cstdint>
#include <stdexcept>

#include "bellsim/angle.hpp"
#include "bellsim/rejection.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/singlet.hpp"

namespace bellsim {

// The two-party protocol. Alice samples the hidden variable x from the
// setting-dependent density by rejection, measures, and sends Bob a
// single positive integer: the iteration at which she first accepted.
// Bob re-derives the shared stream from the seed, replays exactly that
// many iterations to recover x, and measures with his own setting. The
// message is the only trial-dependent information that crosses sides;
// Alice's setting never appears in Bob's inputs.

struct UniformAngleDensity {
    double operator()(Angle) const { return 1.0 / two_pi; }
};

struct UniformAngleSampler {
    Angle operator()(TrialStream& stream) const {
        return Angle(stream.next_uniform() * two_pi);
    }
};

using BellEnvelope = Envelope<UniformAngleDensity, UniformAngleSampler>;

/// Target density for one trial, with Alice's setting bound.
struct BellTargetDensity {
    Angle theta_a;
    double operator()(Angle x) const { return target_density(x, theta_a); }
};

/// Uniform proposal over [0, 2*pi) with the tight constant c = pi/2.
/// Validated once on first use: grid domination plus the analytic peak
/// bound max f = 1/4 <= c / (2*pi).
inline const BellEnvelope& bell_envelope() {
    static const BellEnvelope env = [] {
        const BellEnvelope candidate{half_pi, UniformAngleDensity{},
                                     UniformAngleSampler{}};
        const bool peak_ok =
            0.25 <= candidate.c * candidate.g_density(Angle{});
        if (!peak_ok || !envelope_dominates(BellTargetDensity{Angle{}}, candidate)) {
            throw std::logic_error("bell_envelope: domination check failed");
        }
        return candidate;
    }();
    return env;
}

/// Acceptance probability per iteration, p = 1/c. The message K is
/// geometric with this parameter; both parties know it a priori, so
/// codec parameters may depend on it but never on observed data.
inline double protocol_acceptance_probability() {
    return 1.0 / bell_envelope().c;
}

struct AliceResult {
    Spin outcome;             // A
    std::uint64_t message;    // accepting iteration K, the content sent to Bob
    Angle hidden_x;           // diagnostic only; never part of any report
};

/// One full trial as observed from outside.
struct TrialOutcome {
    Spin a;
    Spin b;
    std::uint64_t k;
    Angle hidden_x;           // diagnostic only
};

/// Alice's side: sample x ~ |cos(x - theta_a)|/4 by rejection, measure,
/// and report the accepting iteration as the message. Requires a fresh
/// stream so that Bob's replay starts from the same position.
inline AliceResult alice_run(TrialStream& stream, Angle theta_a,
                             std::uint64_t iteration_cap = default_iteration_cap) {
    if (stream.draw_count() != 0) {
        throw std::logic_error("alice_run: stream has already been read");
    }
    const RejectionResult r =
        rejection_sample(stream, BellTargetDensity{theta_a}, bell_envelope(),
                         iteration_cap);
    return AliceResult{measure_a(r.sample, theta_a), r.iterations, r.sample};
}

/// Bob's side: re-derive the trial stream and replay `message`
/// iterations, consuming both draws of every iteration exactly as Alice
/// did; the proposal draw of the final iteration is her accepted x.
/// Alice's setting is not an input.
inline Spin bob_run(MasterSeed seed, std::uint64_t trial_index, Angle theta_b,
                    std::uint64_t message) {
    if (message < 1) {
        throw std::invalid_argument("bob_run: message must be >= 1");
    }
    TrialStream stream = derive_trial_stream(seed, trial_index);
    const auto& env = bell_envelope();
    Angle x;
    for (std::uint64_t k = 0; k < message; ++k) {
        x = env.g_sampler(stream);
        stream.next_uniform();
    }
    return measure_b(x, theta_b);
}

/// Runs both sides of one trial on the stream derived from
/// (seed, trial_index).
inline TrialOutcome run_trial(MasterSeed seed, std::uint64_t trial_index,
                              Angle theta_a, Angle theta_b,
                              std::uint64_t iteration_cap = default_iteration_cap) {
    TrialStream stream = derive_trial_stream(seed, trial_index);
    const AliceResult alice = alice_run(stream, theta_a, iteration_cap);
    const Spin b = bob_run(seed, trial_index, theta_b, alice.message);
    return TrialOutcome{alice.outcome, b, alice.message, alice.hidden_x};
}

}  // namespace bellsim
