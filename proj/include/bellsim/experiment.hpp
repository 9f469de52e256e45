#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bellsim/angle.hpp"
#include "bellsim/coding.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/protocol.hpp"
#include "bellsim/quadrature.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/singlet.hpp"
#include "bellsim/stats.hpp"

namespace bellsim {

// Batch runners. All accumulation is exact (64-bit integer sums of
// +-1 outcomes plus integer histograms), so a run's results are
// bit-identical for any thread count: threads only split the trial
// index range, and integer merges are order-exact.

/// Exact accumulator for a batch of trials.
struct TrialSums {
    std::int64_t sum_a = 0;
    std::int64_t sum_b = 0;
    std::int64_t sum_ab = 0;
    std::uint64_t trials = 0;
    KCounts k_counts;

    void add_outcomes(Spin a, Spin b) {
        sum_a += a.value();
        sum_b += b.value();
        sum_ab += a * b;
        ++trials;
    }

    void record_message(std::uint64_t k) { ++k_counts[k]; }

    void merge(const TrialSums& other) {
        sum_a += other.sum_a;
        sum_b += other.sum_b;
        sum_ab += other.sum_ab;
        trials += other.trials;
        for (const auto& [k, n] : other.k_counts) k_counts[k] += n;
    }
};

struct CorrelationEstimate {
    double e_ab = 0.0;
    double e_a = 0.0;
    double e_b = 0.0;
    double stderr_ab = 0.0;
    std::uint64_t trials = 0;
};

/// Sample means with the standard error of the product mean. Products
/// are +-1, so the sum of squares is exactly the trial count.
inline CorrelationEstimate estimate_from_sums(const TrialSums& sums) {
    if (sums.trials == 0) {
        throw std::invalid_argument("estimate_from_sums: no trials");
    }
    const double n = static_cast<double>(sums.trials);
    CorrelationEstimate est;
    est.trials = sums.trials;
    est.e_ab = static_cast<double>(sums.sum_ab) / n;
    est.e_a = static_cast<double>(sums.sum_a) / n;
    est.e_b = static_cast<double>(sums.sum_b) / n;
    if (sums.trials > 1) {
        const double s = static_cast<double>(sums.sum_ab);
        const double variance = (n - s * s / n) / (n - 1.0);
        est.stderr_ab = std::sqrt(std::max(0.0, variance) / n);
    }
    return est;
}

namespace detail {

// Runs fn(index, sums) for index_offset <= index < index_offset + trials,
// split into contiguous chunks, one thread per chunk, merged in chunk
// order. The merged result does not depend on the thread count.
template <typename TrialFn>
TrialSums accumulate_trials(std::uint64_t trials, std::uint64_t index_offset,
                            unsigned threads, const TrialFn& fn) {
    if (trials == 0) {
        throw std::invalid_argument("accumulate_trials: trials must be >= 1");
    }
    const std::uint64_t chunk_count =
        std::min<std::uint64_t>(std::max(threads, 1u), trials);
    if (chunk_count == 1) {
        TrialSums sums;
        for (std::uint64_t i = 0; i < trials; ++i) fn(index_offset + i, sums);
        return sums;
    }

    const std::uint64_t base = trials / chunk_count;
    const std::uint64_t remainder = trials % chunk_count;
    std::vector<TrialSums> parts(chunk_count);
    std::vector<std::thread> pool;
    pool.reserve(chunk_count);
    for (std::uint64_t c = 0; c < chunk_count; ++c) {
        const std::uint64_t begin =
            index_offset + c * base + std::min(c, remainder);
        const std::uint64_t length = base + (c < remainder ? 1 : 0);
        pool.emplace_back([&fn, &parts, c, begin, length] {
            for (std::uint64_t i = 0; i < length; ++i) fn(begin + i, parts[c]);
        });
    }
    for (auto& t : pool) t.join();

    TrialSums merged;
    for (const auto& part : parts) merged.merge(part);
    return merged;
}

}  // namespace detail

struct ProtocolRun {
    CorrelationEstimate correlation;
    KCounts k_counts;
};

/// Runs `trials` protocol trials at indices
/// [index_offset, index_offset + trials).
inline ProtocolRun run_protocol_trials(
    MasterSeed seed, std::uint64_t trials, Angle theta_a, Angle theta_b,
    std::uint64_t index_offset = 0, unsigned threads = 1,
    std::uint64_t iteration_cap = default_iteration_cap) {
    TrialSums sums = detail::accumulate_trials(
        trials, index_offset, threads,
        [&](std::uint64_t index, TrialSums& out) {
            const TrialOutcome t =
                run_trial(seed, index, theta_a, theta_b, iteration_cap);
            out.add_outcomes(t.a, t.b);
            out.record_message(t.k);
        });
    return ProtocolRun{estimate_from_sums(sums), std::move(sums.k_counts)};
}

/// Runs the communication-free baseline on the same stream layout.
inline CorrelationEstimate run_lhv_trials(MasterSeed seed, std::uint64_t trials,
                                          Angle theta_a, Angle theta_b,
                                          std::uint64_t index_offset = 0,
                                          unsigned threads = 1) {
    TrialSums sums = detail::accumulate_trials(
        trials, index_offset, threads,
        [&](std::uint64_t index, TrialSums& out) {
            TrialStream stream = derive_trial_stream(seed, index);
            const auto [a, b] = lhv_trial(stream, theta_a, theta_b);
            out.add_outcomes(a, b);
        });
    return estimate_from_sums(sums);
}

/// Communication-cost accounting for a batch of observed messages.
/// The codec parameter is fixed from the agreed acceptance probability
/// `p_codec` (both sides must know it before any data flows), not from
/// the observed frequencies.
struct CommunicationStats {
    std::uint64_t trials = 0;
    double mean_k = 0.0;
    double p_hat = 0.0;  // 1 / mean_k
    double empirical_entropy_bits = 0.0;
    double mean_codec_bits = 0.0;
    Codec codec = Codec::unary;
    std::uint64_t golomb_m = 1;
};

inline CommunicationStats make_communication_stats(const KCounts& counts,
                                                   Codec codec, double p_codec) {
    if (counts.empty()) {
        throw std::invalid_argument("make_communication_stats: empty histogram");
    }
    const std::uint64_t m = (codec == Codec::golomb) ? golomb_param(p_codec) : 1;
    std::uint64_t trials = 0;
    std::uint64_t total_k = 0;
    std::uint64_t total_bits = 0;
    for (const auto& [k, n] : counts) {
        trials += n;
        total_k += k * n;
        const std::uint64_t len =
            (codec == Codec::golomb) ? golomb_code_length(k, m) : unary_code_length(k);
        total_bits += len * n;
    }
    CommunicationStats stats;
    stats.trials = trials;
    stats.mean_k = static_cast<double>(total_k) / static_cast<double>(trials);
    stats.p_hat = 1.0 / stats.mean_k;
    stats.empirical_entropy_bits = empirical_entropy_bits(counts);
    stats.mean_codec_bits =
        static_cast<double>(total_bits) / static_cast<double>(trials);
    stats.codec = codec;
    stats.golomb_m = m;
    return stats;
}

/// The four correlators and their CHSH combination. Each correlator
/// uses its own disjoint block of trial indices.
struct ChshEstimate {
    CorrelationEstimate ab;
    CorrelationEstimate ab_prime;
    CorrelationEstimate a_prime_b;
    CorrelationEstimate a_prime_b_prime;
    double s = 0.0;
};

namespace detail {

template <typename RunPair>
ChshEstimate chsh_from(const ChshAngles& angles, std::uint64_t trials,
                       const RunPair& run_pair) {
    ChshEstimate est;
    est.ab = run_pair(angles.a, angles.b, 0 * trials);
    est.ab_prime = run_pair(angles.a, angles.b_prime, 1 * trials);
    est.a_prime_b = run_pair(angles.a_prime, angles.b, 2 * trials);
    est.a_prime_b_prime = run_pair(angles.a_prime, angles.b_prime, 3 * trials);
    est.s = chsh_value(est.ab.e_ab, est.ab_prime.e_ab, est.a_prime_b.e_ab,
                       est.a_prime_b_prime.e_ab);
    return est;
}

}  // namespace detail

inline ChshEstimate run_protocol_chsh(
    MasterSeed seed, std::uint64_t trials_per_correlator,
    const ChshAngles& angles = standard_chsh_angles(), unsigned threads = 1,
    std::uint64_t iteration_cap = default_iteration_cap) {
    return detail::chsh_from(
        angles, trials_per_correlator,
        [&](Angle ta, Angle tb, std::uint64_t offset) {
            return run_protocol_trials(seed, trials_per_correlator, ta, tb,
                                       offset, threads, iteration_cap)
                .correlation;
        });
}

inline ChshEstimate run_lhv_chsh(MasterSeed seed,
                                 std::uint64_t trials_per_correlator,
                                 const ChshAngles& angles = standard_chsh_angles(),
                                 unsigned threads = 1) {
    return detail::chsh_from(
        angles, trials_per_correlator,
        [&](Angle ta, Angle tb, std::uint64_t offset) {
            return run_lhv_trials(seed, trials_per_correlator, ta, tb, offset,
                                  threads);
        });
}

/// One row of a correlation sweep over the setting difference.
struct SweepPoint {
    double delta_radians = 0.0;
    CorrelationEstimate estimate;
    double analytic = 0.0;  // -cos(delta)
    double oracle = 0.0;    // quadrature value
};

/// Sweeps delta = 2*pi*j/points with theta_a = delta, theta_b = 0,
/// each point on its own disjoint block of trial indices.
inline std::vector<SweepPoint> run_sweep(
    MasterSeed seed, std::uint64_t trials_per_point, std::uint64_t points,
    unsigned threads = 1, std::uint64_t iteration_cap = default_iteration_cap) {
    if (points < 1) {
        throw std::invalid_argument("run_sweep: points must be >= 1");
    }
    std::vector<SweepPoint> rows;
    rows.reserve(points);
    for (std::uint64_t j = 0; j < points; ++j) {
        const double delta = two_pi * static_cast<double>(j) /
                             static_cast<double>(points);
        const Angle theta_a{delta};
        const Angle theta_b{0.0};
        SweepPoint row;
        row.delta_radians = delta;
        row.estimate = run_protocol_trials(seed, trials_per_point, theta_a,
                                           theta_b, j * trials_per_point,
                                           threads, iteration_cap)
                           .correlation;
        row.analytic = -std::cos(delta);
        row.oracle = quadrature_correlation(theta_a, theta_b);
        rows.push_back(row);
    }
    return rows;
}

/// No-signaling check on the message channel: the histogram of K is
/// collected for several first-party settings (disjoint index blocks,
/// same second-party setting) and tested for homogeneity. A failure
/// would mean the message carries information about theta_a.
inline GofResult message_homogeneity_across_settings(
    MasterSeed seed, std::uint64_t trials_each,
    const std::vector<Angle>& theta_a_values, Angle theta_b,
    unsigned threads = 1,
    std::uint64_t iteration_cap = default_iteration_cap) {
    if (theta_a_values.size() < 2) {
        throw std::invalid_argument(
            "message_homogeneity_across_settings: need at least two settings");
    }
    std::vector<KCounts> groups;
    groups.reserve(theta_a_values.size());
    for (std::size_t j = 0; j < theta_a_values.size(); ++j) {
        ProtocolRun run = run_protocol_trials(
            seed, trials_each, theta_a_values[j], theta_b,
            static_cast<std::uint64_t>(j) * trials_each, threads, iteration_cap);
        groups.push_back(std::move(run.k_counts));
    }
    return chi_square_homogeneity(groups);
}

}  // namespace bellsim
