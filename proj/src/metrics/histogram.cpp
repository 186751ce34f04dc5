#include "twinslice/metrics/histogram.hpp"
#include "twinslice/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twinslice {

namespace {

std::array<std::uint64_t, DelayHistogram::kRegularBins + 1>
makeEdges()
{
  std::array<std::uint64_t, DelayHistogram::kRegularBins + 1> e{};
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = static_cast<std::uint64_t>(
      std::llround(1000.0 * std::pow(10.0, static_cast<double>(i) / DelayHistogram::kBinsPerDecade)));
  return e;
}

const auto kEdges = makeEdges();

} // namespace

std::span<const std::uint64_t>
DelayHistogram::edges()
{
  return kEdges;
}

std::size_t
DelayHistogram::binOf(SimTime sample)
{
  if (sample.ticks < kEdges.front())
    return 0;
  if (sample.ticks >= kEdges.back())
    return kBinCount - 1;
  // First edge strictly greater than the sample closes its bin.
  auto it = std::upper_bound(kEdges.begin(), kEdges.end(), sample.ticks);
  return static_cast<std::size_t>(it - kEdges.begin());
}

std::uint64_t
DelayHistogram::upperEdge(std::size_t bin)
{
  if (bin >= kBinCount - 1)
    return kEdges.back();
  return kEdges[bin];
}

std::uint64_t
DelayHistogram::binWidth(SimTime sample)
{
  const auto bin = binOf(sample);
  if (bin == 0)
    return kEdges.front();
  if (bin == kBinCount - 1)
    return 0;
  return kEdges[bin] - kEdges[bin - 1];
}

void
DelayHistogram::record(SimTime sample)
{
  if (m_bins.empty())
    m_bins.assign(kBinCount, 0);
  ++m_bins[binOf(sample)];
  ++m_count;
  m_sum += sample.ticks;
  m_min = std::min(m_min, sample.ticks);
  m_max = std::max(m_max, sample.ticks);
}

void
DelayHistogram::merge(const DelayHistogram& other)
{
  if (other.m_count == 0)
    return;
  if (m_bins.empty())
    m_bins.assign(kBinCount, 0);
  for (std::size_t i = 0; i < kBinCount; ++i)
    m_bins[i] += other.m_bins[i];
  m_count += other.m_count;
  m_sum += other.m_sum;
  m_min = std::min(m_min, other.m_min);
  m_max = std::max(m_max, other.m_max);
}

double
DelayHistogram::mean() const
{
  if (m_count == 0)
    return 0.0;
  return static_cast<double>(static_cast<long double>(m_sum) / static_cast<long double>(m_count));
}

std::uint64_t
nearestRank(double p, std::uint64_t n)
{
  // Guard against p*n landing a hair above an integer (e.g. 0.29 * 100).
  const long double exact = static_cast<long double>(p) * static_cast<long double>(n);
  auto rank = static_cast<std::uint64_t>(std::ceil(exact - 1e-9L * static_cast<long double>(n)));
  return std::clamp<std::uint64_t>(rank, 1, n);
}

SimTime
DelayHistogram::percentile(double p) const
{
  if (m_count == 0)
    throw EmptyHistogram("percentile of an empty histogram");
  if (!(p > 0.0 && p <= 1.0))
    throw Error("percentile p must lie in (0, 1], got " + std::to_string(p));
  const auto rank = nearestRank(p, m_count);
  std::uint64_t cumulative = 0;
  for (std::size_t bin = 0; bin < kBinCount; ++bin) {
    cumulative += m_bins[bin];
    if (cumulative >= rank)
      return bin == kBinCount - 1 ? SimTime{m_max} : SimTime{upperEdge(bin)};
  }
  return SimTime{m_max};
}

} // namespace twinslice
