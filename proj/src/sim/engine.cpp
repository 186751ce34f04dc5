#include "twinslice/sim/engine.hpp"
#include "twinslice/error.hpp"

#include <string>
#include <utility>

namespace twinslice {

std::string_view
toString(EventKind kind)
{
  switch (kind) {
  case EventKind::TrafficArrival: return "TrafficArrival";
  case EventKind::FrameDeparture: return "FrameDeparture";
  case EventKind::FrameArrival: return "FrameArrival";
  case EventKind::SyncDue: return "SyncDue";
  case EventKind::AggregationDue: return "AggregationDue";
  case EventKind::FaultStart: return "FaultStart";
  case EventKind::FaultEnd: return "FaultEnd";
  case EventKind::Handover: return "Handover";
  case EventKind::MetricsFlush: return "MetricsFlush";
  }
  return "?";
}

void
Engine::on(EventKind kind, Handler handler)
{
  m_handlers[static_cast<std::size_t>(kind)] = std::move(handler);
}

std::uint64_t
Engine::schedule(SimTime at, EventKind kind, EventPayload payload)
{
  return schedule(Event{at, 0, kind, std::move(payload)});
}

std::uint64_t
Engine::schedule(Event event)
{
  if (event.fireAt < m_now)
    throw SchedulePast(std::string(toString(event.kind)) + " at " + std::to_string(event.fireAt.ticks) +
                       " ns is before now = " + std::to_string(m_now.ticks) + " ns");
  event.seq = m_nextSeq++;
  const auto seq = event.seq;
  m_queue.push(std::move(event));
  return seq;
}

SimTime
Engine::nextTime() const
{
  return m_queue.empty() ? SimTime::max() : m_queue.top().fireAt;
}

std::uint64_t
Engine::runUntil(SimTime tEnd)
{
  std::uint64_t count = 0;
  while (!m_queue.empty() && m_queue.top().fireAt <= tEnd) {
    Event event = m_queue.top();
    m_queue.pop();
    m_now = event.fireAt;
    ++count;
    ++m_processed;
    if (auto& handler = m_handlers[static_cast<std::size_t>(event.kind)])
      handler(event);
  }
  return count;
}

} // namespace twinslice
