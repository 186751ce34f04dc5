#pragma once

#include "twinslice/metrics/report.hpp"
#include "twinslice/net/network.hpp"
#include "twinslice/sim/engine.hpp"
#include "twinslice/workloads/workload.hpp"

#include <string>
#include <vector>

namespace twinslice {

/**
 * Timed edge-attachment sequences for mobile devices.
 *
 * A handover detaches the device, buffers its outgoing frames for the
 * handover gap, then attaches to the target edge and releases the buffer.
 * A target that is down is skipped in favour of the next edge in the
 * sequence, costing one more gap.
 *
 * Registers the Handover handler on the engine.
 */
class MobilityManager
{
public:
  struct Mobile
  {
    std::string workload;
    NodeId device = 0;
    std::vector<NodeId> sequence;
    SimTime gap;
    std::size_t current = 0;
    std::size_t target = 0;
    bool detached = false;
    SimTime detachedAt;
    std::uint64_t handovers = 0;
    std::uint64_t deferred = 0;
    SimTime maxGap;
    SimTime totalGap;
  };

  MobilityManager(Engine& engine, Network& network);
  MobilityManager(const MobilityManager&) = delete;
  MobilityManager& operator=(const MobilityManager&) = delete;

  /// Attaches the device to the first edge of its sequence and schedules
  /// one handover per cell crossing before `horizon`.
  std::uint32_t add(const AmbulanceRun& run, SimTime horizon);

  /// Starts a handover of `mobile` toward sequence position `targetIndex`.
  /// Returns false if the device is already mid-handover or the index is
  /// past the end of its sequence.
  bool handover(std::uint32_t mobile, std::size_t targetIndex);

  /// A node or link failed: mobiles that lost their attachment move on.
  void attachmentLost(NodeId edge);
  void linkLost(LinkId link);

  void setDraining(bool draining) { m_draining = draining; }

  const std::vector<Mobile>& mobiles() const { return m_mobiles; }
  std::vector<MobilityReport> report() const;

private:
  void onHandover(const Event& e);
  void tryAttach(std::uint32_t mobile);
  bool reachable(NodeId device, NodeId edge) const;

  Engine& m_engine;
  Network& m_network;
  std::vector<Mobile> m_mobiles;
  bool m_draining = false;
};

} // namespace twinslice
