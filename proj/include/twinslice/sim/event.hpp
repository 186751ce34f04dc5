#pragma once

#include "twinslice/sim/time.hpp"

#include <cstdint>
#include <string_view>
#include <variant>

namespace twinslice {

enum class EventKind : std::uint8_t
{
  TrafficArrival,
  FrameDeparture,
  FrameArrival,
  SyncDue,
  AggregationDue,
  FaultStart,
  FaultEnd,
  Handover,
  MetricsFlush,
};

inline constexpr std::size_t kEventKindCount = 9;

std::string_view toString(EventKind kind);

inline constexpr std::uint32_t kNoIndex = 0xffffffffu;

// Kind-specific records. Indices refer into tables owned by whoever
// registered the handler for that kind.
struct TrafficArrivalRec { std::uint32_t source = 0; };
struct FrameDepartureRec { std::uint32_t direction = 0; std::uint64_t generation = 0; };
struct FrameArrivalRec
{
  std::uint32_t frame = 0;
  std::uint32_t node = 0;
  std::uint32_t direction = kNoIndex; // kNoIndex: injected at its source
  std::uint64_t generation = 0;
};
struct TwinRec { std::uint32_t twin = 0; };
struct FaultRec { std::uint32_t fault = 0; };
struct HandoverRec { std::uint32_t mobile = 0; bool attach = false; };
struct FlushRec {};

using EventPayload = std::variant<std::monostate, TrafficArrivalRec, FrameDepartureRec, FrameArrivalRec,
                                  TwinRec, FaultRec, HandoverRec, FlushRec>;

struct Event
{
  SimTime fireAt;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::MetricsFlush;
  EventPayload payload;

  template <typename Rec>
  const Rec& as() const { return std::get<Rec>(payload); }
};

} // namespace twinslice
