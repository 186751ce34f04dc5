#include "twinslice/metrics/collector.hpp"
#include "twinslice/error.hpp"

#include <string>

namespace twinslice {

MetricsCollector::MetricsCollector(std::size_t flows)
  : m_flowTraffic(flows)
  , m_flowDelay(flows)
{
}

void
MetricsCollector::addFlow()
{
  m_flowTraffic.emplace_back();
  m_flowDelay.emplace_back();
}

void
MetricsCollector::recordSent(const Frame& frame)
{
  ++m_flowTraffic.at(frame.flow).sent;
  ++m_sliceTraffic[index(frame.slice)].sent;
}

SimTime
MetricsCollector::recordDelivery(const Frame& frame, SimTime deliveredAt)
{
  if (deliveredAt < frame.createdAt)
    throw NegativeDelay("flow " + std::to_string(frame.flow) + " delivered at " +
                        std::to_string(deliveredAt.ticks) + " ns before creation at " +
                        std::to_string(frame.createdAt.ticks) + " ns");
  const SimTime delay = deliveredAt - frame.createdAt;
  auto& ft = m_flowTraffic.at(frame.flow);
  auto& st = m_sliceTraffic[index(frame.slice)];
  ++ft.delivered;
  ++st.delivered;
  ft.deliveredPayloadBytes += frame.payloadBytes;
  st.deliveredPayloadBytes += frame.payloadBytes;
  m_flowDelay[frame.flow].record(delay);
  m_sliceDelay[index(frame.slice)].record(delay);
  return delay;
}

void
MetricsCollector::recordDrop(const Frame& frame, DropCause cause)
{
  auto bump = [cause](TrafficCounters& t) {
    switch (cause) {
    case DropCause::Loss: ++t.droppedLoss; break;
    case DropCause::Queue: ++t.droppedQueue; break;
    case DropCause::Fault: ++t.droppedFault; break;
    }
  };
  bump(m_flowTraffic.at(frame.flow));
  bump(m_sliceTraffic[index(frame.slice)]);
}

} // namespace twinslice
