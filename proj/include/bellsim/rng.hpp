#pragma once

#include <cstdint>

namespace bellsim {

/// Root seed for a whole experiment. Two runs with the same MasterSeed
/// produce bit-identical results, independent of thread count or the
/// order in which trials are evaluated.
struct MasterSeed {
    std::uint64_t value = 0;
};

namespace detail {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer: a 64-bit bijection with full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

class TrialStream;
TrialStream derive_trial_stream(MasterSeed seed, std::uint64_t trial_index);

/// Per-trial stream of uniform variates, shared by both parties.
///
/// The generator is splitmix64 (Steele/Lea/Flood-style weyl counter plus
/// finalizer), a fixed portable algorithm: replaying a stream on any
/// platform reproduces the same values bit for bit. Copy a stream to
/// fork its read position; a copy replays independently.
class TrialStream {
public:
    /// Next raw 64-bit word. Counts as one draw.
    std::uint64_t next_bits() {
        state_ += detail::golden_gamma;
        ++draw_count_;
        return detail::mix64(state_);
    }

    /// Next variate, uniform on [0, 1). Counts as one draw.
    double next_uniform() {
        return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
    }

    [[nodiscard]] std::uint64_t draw_count() const { return draw_count_; }

private:
    friend TrialStream derive_trial_stream(MasterSeed, std::uint64_t);
    explicit TrialStream(std::uint64_t state) : state_(state) {}

    std::uint64_t state_;
    std::uint64_t draw_count_ = 0;
};

/// Derives the stream for one trial by hashing (seed, trial_index)
/// through two avalanche rounds. Streams for distinct indices are
/// decorrelated, so trials can run in any order or in parallel and
/// still replay identically.
inline TrialStream derive_trial_stream(MasterSeed seed,
                                       std::uint64_t trial_index) {
    const std::uint64_t spread = detail::mix64(trial_index + detail::golden_gamma);
    return TrialStream(detail::mix64(seed.value ^ spread));
}

}  // namespace bellsim
