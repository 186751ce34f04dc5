#pragma once

#include "twinslice/net/topology.hpp"
#include "twinslice/sim/rng.hpp"
#include "twinslice/sim/time.hpp"
#include "twinslice/slices/slice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace twinslice {

/// High-definition video consultation (FeMBB).
struct TelemedicineStream
{
  std::string name;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t bitrateBps = 8'000'000;
  std::uint64_t frameBytes = 10'000;
  SimTime start;
  std::optional<SimTime> duration;
};

/// Teleoperation command loop with ERLLC acknowledgments.
struct SurgeryLoop
{
  std::string name;
  NodeId console = 0;
  NodeId robot = 0;
  std::uint64_t cmdRateHz = 1000;
  std::uint64_t cmdBytes = 200;
  std::uint64_t ackBytes = 200;
  SimTime rttBudget = milliseconds(2);
  SimTime start;
  std::optional<SimTime> duration;
};

/// Ambulance telemetry across a timed sequence of edge attachments (LDHMC).
struct AmbulanceRun
{
  std::string name;
  NodeId device = 0;
  double speedKmh = 120.0;
  double cellSpanM = 1000.0;
  std::vector<NodeId> edgeSequence;
  std::uint64_t telemetryRateHz = 10;
  std::uint64_t payloadBytes = 500;
  NodeId dst = 0;
  SimTime handoverGap = milliseconds(10);
  std::size_t bufferCap = 1024;
  SimTime start;
  std::optional<SimTime> duration;
};

/// Massive population of wearables reporting on a period (umMTC).
struct WearableFleet
{
  std::string name;
  std::vector<NodeId> devices;
  SimTime period = seconds(1);
  std::uint64_t payloadBytes = 100;
  NodeId dst = kNoNode; // kNoNode: each device's own edge
  bool poisson = false; // burst mode: exponential inter-arrivals
  SimTime start;
  std::optional<SimTime> duration;
};

/// Battery-limited implant beacon (ELPC).
struct ImplantBeacon
{
  std::string name;
  NodeId device = 0;
  SimTime period = seconds(60);
  std::uint64_t payloadBytes = 32;
  PicoJoules energyPerTx = 10'000'000; // 10 uJ
  PicoJoules battery = 1'000'000'000;  // 1 mJ
  NodeId dst = 0;
  SimTime start;
  std::optional<SimTime> duration;
};

using WorkloadSpec = std::variant<TelemedicineStream, SurgeryLoop, AmbulanceRun, WearableFleet, ImplantBeacon>;

SliceClass sliceOf(const WorkloadSpec& spec);
const std::string& nameOf(const WorkloadSpec& spec);
std::string_view typeName(const WorkloadSpec& spec);

/// Every node a workload references (for existence checks).
std::vector<NodeId> referencedNodes(const WorkloadSpec& spec);

/// Window [start, end) in which a workload emits, clipped to the horizon.
SimTime activeEnd(const WorkloadSpec& spec, SimTime horizon);
SimTime activeStart(const WorkloadSpec& spec);

/// Time between handovers: cell span divided by speed.
SimTime handoverInterval(double speedKmh, double cellSpanM);

/// Emission-time generator for one transmitting node of a workload.
class TrafficSource
{
public:
  enum class Law : std::uint8_t { Periodic, Poisson };

  /// Periodic with emission k at offset + floor(k * periodNum / periodDen).
  static TrafficSource periodic(NodeId node, SimTime first, SimTime end, std::uint64_t periodNum,
                                std::uint64_t periodDen, std::optional<std::uint64_t> maxEmissions = {});
  static TrafficSource poisson(NodeId node, SimTime start, SimTime end, SimTime meanGap, RngStream rng);

  /// Next emission time, or nullopt once the source is exhausted.
  std::optional<SimTime> next();

  NodeId node() const { return m_node; }
  std::uint64_t emitted() const { return m_emitted; }

  /// Sources for every transmitter of `spec`; per-source randomness is
  /// drawn from `rng`.
  static std::vector<TrafficSource> forWorkload(const WorkloadSpec& spec, RngStream& rng, SimTime horizon);

private:
  TrafficSource(NodeId node, Law law, SimTime first, SimTime end);

  NodeId m_node;
  Law m_law;
  SimTime m_first;
  SimTime m_end;
  std::uint64_t m_num = 0;
  std::uint64_t m_den = 1;
  std::optional<std::uint64_t> m_max;
  std::uint64_t m_emitted = 0;
  SimTime m_cursor;
  SimTime m_meanGap;
  std::optional<RngStream> m_rng;
};

struct Emission
{
  SimTime at;
  std::uint32_t source = 0; // index into forWorkload()'s result
  NodeId node = 0;

  auto operator<=>(const Emission&) const = default;
};

/// The full emission schedule of `spec` up to `horizon`, time ordered.
std::vector<Emission> generateEvents(const WorkloadSpec& spec, RngStream& rng, SimTime horizon);

/// Transmissions an implant can afford before its battery runs out.
std::uint64_t affordableTransmissions(const ImplantBeacon& beacon);

struct FaultSpec
{
  enum class Target : std::uint8_t { Node, Link };
  Target kind = Target::Link;
  std::uint32_t id = 0;
  std::string targetName;
  SimTime tFail;
  SimTime tRecover;
};

} // namespace twinslice
