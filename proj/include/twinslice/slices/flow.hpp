#pragma once

#include "twinslice/net/frame.hpp"
#include "twinslice/net/topology.hpp"
#include "twinslice/slices/slice.hpp"

#include <string>
#include <vector>

namespace twinslice {

enum class FlowRole : std::uint8_t
{
  Application, // workload traffic
  Acknowledgment,
  TwinSync,
  Alert,
};

std::string_view toString(FlowRole role);

struct Flow
{
  FlowId id = 0;
  std::string name;
  SliceClass slice = SliceClass::umMTC;
  FlowRole role = FlowRole::Application;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t demandRateBps = 0;
  std::uint64_t payloadBytes = 0;
  std::uint64_t frameBytes = 0; // payload plus stack overhead
  SimTime start;
  SimTime end;
  SimTime setupLatency;
  SimTime unloadedDelay; // one-way, queues empty, excluding setup
  bool admitted = false;
};

} // namespace twinslice
