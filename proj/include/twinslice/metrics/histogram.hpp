#pragma once

#include "twinslice/sim/time.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace twinslice {

/**
 * Log-spaced delay histogram: 20 bins per decade over [1 us, 100 s), plus
 * an underflow bin below 1 us and an overflow bin at or above 100 s.
 * Count, sum, min, and max are tracked exactly alongside the bins.
 */
class DelayHistogram
{
public:
  static constexpr int kBinsPerDecade = 20;
  static constexpr int kDecades = 8;
  static constexpr std::size_t kRegularBins = kBinsPerDecade * kDecades;
  static constexpr std::size_t kBinCount = kRegularBins + 2; // underflow, regular..., overflow

  /// Lower edge of regular bin i+1 == upper edge of bin i; 161 values.
  static std::span<const std::uint64_t> edges();
  static std::size_t binOf(SimTime sample);
  /// Upper edge reported for a bin. The overflow bin has none (see percentile).
  static std::uint64_t upperEdge(std::size_t bin);
  /// Width of the bin containing `sample` (0 for overflow).
  static std::uint64_t binWidth(SimTime sample);

  void record(SimTime sample);
  void merge(const DelayHistogram& other);

  std::uint64_t count() const { return m_count; }
  bool empty() const { return m_count == 0; }
  SimTime min() const { return SimTime{m_min}; }
  SimTime max() const { return SimTime{m_max}; }
  double mean() const;
  long double sum() const { return static_cast<long double>(m_sum); }
  std::uint64_t binCount(std::size_t bin) const { return m_bins.empty() ? 0 : m_bins[bin]; }

  /// Nearest-rank percentile rounded up to the containing bin's upper edge,
  /// p in (0, 1]. Never below the true value; may exceed max() by less than
  /// one bin. The overflow bin reports the exact maximum.
  /// Throws EmptyHistogram.
  SimTime percentile(double p) const;

private:
  std::vector<std::uint64_t> m_bins; // allocated on first record
  std::uint64_t m_count = 0;
  unsigned __int128 m_sum = 0;
  std::uint64_t m_min = ~0ULL;
  std::uint64_t m_max = 0;
};

/// Nearest rank (1-based) of percentile p among n samples.
std::uint64_t nearestRank(double p, std::uint64_t n);

} // namespace twinslice
