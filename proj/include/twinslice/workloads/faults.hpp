#pragma once

#include "twinslice/metrics/report.hpp"
#include "twinslice/net/network.hpp"
#include "twinslice/sim/engine.hpp"
#include "twinslice/workloads/workload.hpp"

#include <functional>
#include <vector>

namespace twinslice {

/// Schedules availability faults on nodes and links and applies them to
/// the network. Registers the FaultStart and FaultEnd handlers.
class FaultInjector
{
public:
  /// Called after a fault is applied (failed = true) or cleared.
  using Listener = std::function<void(const FaultSpec&, bool failed)>;

  FaultInjector(Engine& engine, Network& network);
  FaultInjector(const FaultInjector&) = delete;
  FaultInjector& operator=(const FaultInjector&) = delete;

  /// Throws UnknownTarget for a missing node/link and Error when
  /// t_recover <= t_fail or t_fail is in the past.
  void inject(const FaultSpec& spec);

  void setListener(Listener listener) { m_listener = std::move(listener); }
  void setDraining(bool draining) { m_draining = draining; }

  std::vector<FaultRecord> timeline() const;

private:
  void onStart(const Event& e);
  void onEnd(const Event& e);

  Engine& m_engine;
  Network& m_network;
  Listener m_listener;
  std::vector<FaultSpec> m_faults;
  std::vector<bool> m_applied;
  bool m_draining = false;
};

} // namespace twinslice
