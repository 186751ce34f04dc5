#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace twinslice {

/// 64-bit FNV-1a; stable across platforms, used to turn stream labels into seeds.
std::uint64_t fnv1a64(std::string_view bytes);

/// SplitMix64 step: advances state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/**
 * Labeled pseudo-random stream (xoshiro256** seeded through SplitMix64).
 *
 * The state depends only on (master seed, label), so adding a stream for
 * one purpose never shifts the draws of another.
 */
class RngStream
{
public:
  RngStream(std::uint64_t masterSeed, std::string label);

  const std::string& label() const { return m_label; }

  std::uint64_t next();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Exponential variate with the given rate (> 0).
  double exponential(double rate);

  /// True with probability p; p <= 0 never, p >= 1 always.
  bool bernoulli(double p);

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

private:
  std::string m_label;
  std::array<std::uint64_t, 4> m_s{};
};

RngStream forkRng(std::uint64_t masterSeed, std::string_view label);

} // namespace twinslice
