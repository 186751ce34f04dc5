#pragma once

#include "twinslice/metrics/histogram.hpp"
#include "twinslice/metrics/report.hpp"
#include "twinslice/net/frame.hpp"

#include <array>
#include <vector>

namespace twinslice {

/// Per-flow and per-slice counters and delay histograms for one run.
class MetricsCollector
{
public:
  explicit MetricsCollector(std::size_t flows = 0);

  void addFlow();
  std::size_t flowCount() const { return m_flowTraffic.size(); }

  void recordSent(const Frame& frame);
  /// Adds delivered_at - created_at to the flow and slice histograms.
  /// Throws NegativeDelay if the frame arrives before it was created.
  SimTime recordDelivery(const Frame& frame, SimTime deliveredAt);
  void recordDrop(const Frame& frame, DropCause cause);

  const TrafficCounters& flowTraffic(FlowId id) const { return m_flowTraffic.at(id); }
  const DelayHistogram& flowDelay(FlowId id) const { return m_flowDelay.at(id); }
  const TrafficCounters& sliceTraffic(SliceClass s) const { return m_sliceTraffic[index(s)]; }
  const DelayHistogram& sliceDelay(SliceClass s) const { return m_sliceDelay[index(s)]; }

private:
  std::vector<TrafficCounters> m_flowTraffic;
  std::vector<DelayHistogram> m_flowDelay;
  std::array<TrafficCounters, kSliceCount> m_sliceTraffic{};
  std::array<DelayHistogram, kSliceCount> m_sliceDelay;
};

} // namespace twinslice
