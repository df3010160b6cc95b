#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace ddk {

/// Deterministic pseudo-random source.
///
/// The algorithm is frozen so that seeded runs reproduce bit-for-bit:
///   * state: xoshiro256** (Blackman & Vigna), seeded by four splitmix64 outputs;
///   * uniform01: top 53 bits of a draw scaled by 2^-53, in [0, 1);
///   * normal: Box-Muller on (1 - u1, u2); both outputs are used, the sine
///     branch is cached and returned by the next call;
///   * uniform_int: modulo rejection over the full 64-bit range.
///
/// Single owner. Parallel work must derive its own sources via split().
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t next_u64() noexcept;
    double uniform01() noexcept;
    double normal() noexcept;
    /// Uniform integer in the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Independent child stream; advances this source by one draw.
    RandomSource split() noexcept;

private:
    std::array<std::uint64_t, 4> state_{};
    std::optional<double> cached_normal_;
};

/// Convenience constructor mirroring the free-function form used by the CLI.
inline RandomSource seeded_rng(std::uint64_t seed) { return RandomSource(seed); }

}  // namespace ddk
