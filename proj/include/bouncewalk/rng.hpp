// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Counter-based random numbers. Every Gaussian pair is addressed by
// (root seed, path index, step index, lane), so a path's noise does not
// depend on how paths are scheduled across threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace bouncewalk {

inline constexpr const char* kRngFamily = "philox4x32-10+box-muller/v1";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Noise purpose; keeps initial-condition draws disjoint from step noise.
enum class StreamLane : std::uint32_t { Step = 0, InitialVelocity = 1 };

/// Stateless per-path stream. `normal_pair` returns two independent standard
/// normals for a given (step, slot); slot usually indexes the spatial axis.
class PathStream {
 public:
  PathStream(std::uint64_t root_seed, std::uint64_t path_index)
      : key_{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32)},
        path_lo_(static_cast<std::uint32_t>(path_index)),
        path_hi_(static_cast<std::uint32_t>(path_index >> 32)) {}

  PhiloxCounter raw(std::uint32_t step, std::uint32_t slot, StreamLane lane) const {
    const std::uint32_t tag = (static_cast<std::uint32_t>(lane) << 24) | (slot & 0x00FFFFFFu);
    return philox4x32_10({step, tag, path_lo_, path_hi_}, key_);
  }

  std::pair<double, double> normal_pair(std::uint32_t step, std::uint32_t slot,
                                        StreamLane lane = StreamLane::Step) const {
    const PhiloxCounter bits = raw(step, slot, lane);
    // 53-bit uniforms; u1 in (0, 1] so the log is finite.
    const std::uint64_t a = (std::uint64_t{bits[0]} << 32 | bits[1]) >> 11;
    const std::uint64_t b = (std::uint64_t{bits[2]} << 32 | bits[3]) >> 11;
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = (static_cast<double>(a) + 1.0) * kScale;
    const double u2 = static_cast<double>(b) * kScale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  PhiloxKey key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
};

}  // namespace bouncewalk
