#pragma once

#include "twinslice/net/topology.hpp"
#include "twinslice/sim/time.hpp"
#include "twinslice/slices/slice.hpp"

#include <cstdint>
#include <memory>

namespace twinslice {

struct SyncMessage;

using FlowId = std::uint32_t;

enum class FrameKind : std::uint8_t
{
  Data,
  Sync,
  Alert,
  Command,
  Ack,
};

struct Frame
{
  FlowId flow = 0;
  SliceClass slice = SliceClass::umMTC;
  FrameKind kind = FrameKind::Data;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t payloadBytes = 0;
  std::uint64_t totalBytes = 0;
  SimTime createdAt;
  std::uint32_t hops = 0;
  std::uint64_t tag = 0; // kind-specific: target twin, originating command time, ...
  std::shared_ptr<const SyncMessage> sync;
};

enum class DropCause : std::uint8_t
{
  Loss,
  Queue,
  Fault,
};

} // namespace twinslice
