#pragma once

#include "twinslice/sim/event.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace twinslice {

/**
 * Single-threaded discrete-event engine.
 *
 * Events are totally ordered by (fireAt, seq); seq is the insertion counter,
 * so simultaneous events fire in the order they were scheduled.
 */
class Engine
{
public:
  using Handler = std::function<void(const Event&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Registers the dispatch target for one event kind, replacing any previous one.
  void on(EventKind kind, Handler handler);

  /// Throws SchedulePast if at < now().
  std::uint64_t schedule(SimTime at, EventKind kind, EventPayload payload = {});

  /// Schedules a fully formed event; its seq field is overwritten.
  std::uint64_t schedule(Event event);

  /// Processes every event with fireAt <= tEnd. Returns the processed count.
  std::uint64_t runUntil(SimTime tEnd);

  SimTime now() const { return m_now; }
  bool empty() const { return m_queue.empty(); }
  std::size_t pending() const { return m_queue.size(); }
  std::uint64_t processed() const { return m_processed; }

  /// Fire time of the earliest pending event; SimTime::max() when empty.
  SimTime nextTime() const;

private:
  struct Later
  {
    bool operator()(const Event& a, const Event& b) const
    {
      if (a.fireAt != b.fireAt)
        return a.fireAt > b.fireAt;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> m_queue;
  std::array<Handler, kEventKindCount> m_handlers;
  SimTime m_now;
  std::uint64_t m_nextSeq = 0;
  std::uint64_t m_processed = 0;
};

} // namespace twinslice
