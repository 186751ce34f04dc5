#pragma once

#include "twinslice/net/routing.hpp"
#include "twinslice/net/stack.hpp"
#include "twinslice/net/topology.hpp"
#include "twinslice/slices/flow.hpp"
#include "twinslice/slices/slice.hpp"

#include <string>
#include <vector>

namespace twinslice {

struct AdmissionConfig
{
  enum class Mode : std::uint8_t
  {
    Enforce, // rejected flows never send
    Observe, // decisions are recorded, every flow sends
  };
  Mode mode = Mode::Enforce;
  double utilizationCap = 0.9;
};

struct AdmissionDecision
{
  enum class Reason : std::uint8_t { None, Capacity, Delay };

  bool accepted = true;
  Reason reason = Reason::None;
  std::string detail;
  std::vector<LinkId> path;
  SimTime unloadedDelay;
  SimTime setupLatency;

  std::string describe() const;
};

/**
 * Capacity and delay admission over the flow's routed path. A flow is
 * accepted iff every traversed link direction keeps its admitted demand
 * within utilizationCap * rate, and the unloaded path delay plus setup
 * latency fits the slice's delay budget.
 */
class AdmissionController
{
public:
  AdmissionController(const Topology& topology, const StackProfile& profile, AdmissionConfig config);

  /// Throws Unreachable when no path exists.
  AdmissionDecision admit(const Flow& flow, const QosContract& contract);

  std::uint64_t admittedDemand(std::uint32_t direction) const { return m_demand.at(direction); }
  const AdmissionConfig& config() const { return m_config; }

private:
  const Topology* m_topology;
  RoutingTable m_routes;
  StackProfile m_profile;
  AdmissionConfig m_config;
  std::vector<std::uint64_t> m_demand; // per link direction
};

} // namespace twinslice
