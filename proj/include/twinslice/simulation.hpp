#pragma once

#include "twinslice/metrics/collector.hpp"
#include "twinslice/metrics/report.hpp"
#include "twinslice/net/network.hpp"
#include "twinslice/scenario/scenario.hpp"
#include "twinslice/sim/engine.hpp"
#include "twinslice/slices/admission.hpp"
#include "twinslice/twin/entity.hpp"
#include "twinslice/twin/twin.hpp"
#include "twinslice/workloads/faults.hpp"
#include "twinslice/workloads/mobility.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace twinslice {

struct RunOverrides
{
  std::optional<std::uint64_t> seed;
  std::optional<SimTime> tEnd;
};

/**
 * One deterministic run of a validated scenario.
 *
 * run() processes every event up to t_end, then drains: generators stop,
 * in-flight frames are delivered or dropped, and a final bottom-up
 * aggregate/sync pass leaves the twin hierarchy quiescent. The report is
 * built from that quiescent state.
 */
class Simulation
{
public:
  explicit Simulation(const Scenario& scenario, RunOverrides overrides = {});
  ~Simulation();

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  RunReport run();

  const Scenario& scenario() const { return m_scenario; }
  SimTime horizon() const { return m_tEnd; }
  std::uint64_t seed() const { return m_seed; }
  const Engine& engine() const { return m_engine; }
  const Network& network() const { return *m_network; }
  const std::vector<Twin>& twins() const { return m_twins; }
  const std::vector<Flow>& flows() const { return m_flows; }
  const MetricsCollector& metrics() const { return m_metrics; }
  const AdmissionDecision& decision(FlowId id) const { return m_decisions.at(id); }

private:
  struct Source
  {
    TrafficSource generator;
    std::uint32_t workload = 0;
    FlowId flow = 0;
  };

  struct SurgeryState
  {
    std::uint32_t workload = 0;
    FlowId cmdFlow = 0;
    FlowId ackFlow = 0;
    DelayHistogram rtt;
    std::uint64_t acks = 0;
    std::uint64_t withinBudget = 0;
  };

  struct TwinRuntime
  {
    std::optional<PhysicalEntity> entity;
    std::optional<FlowId> syncFlow;
    std::optional<FlowId> alertFlow;
    StalenessStats staleness;
    std::uint64_t syncsApplied = 0;
    std::uint64_t aggregations = 0;
    std::uint64_t noChildren = 0;
    std::uint64_t alertsRaised = 0;
  };

  FlowId addFlow(Flow flow);
  void setUpWorkloads();
  void setUpTwins();
  void setUpFaults();

  void emit(FlowId flow, FrameKind kind, std::uint64_t payloadBytes, std::uint64_t tag,
            std::shared_ptr<const SyncMessage> sync = {});

  void onTrafficArrival(const Event& e);
  void onSyncDue(const Event& e);
  void onAggregationDue(const Event& e);
  void onMetricsFlush(const Event& e);
  void onDelivered(Frame&& frame);
  void onDropped(Frame&& frame, DropCause cause);

  void sendTwinSync(TwinId id);
  void aggregateTwin(TwinId id);
  void checkAlerts(TwinId id, const std::vector<std::string>& updated);
  void applySyncFrame(const Frame& frame);
  void quiesce();
  RunReport buildReport() const;

  Scenario m_scenario;
  std::uint64_t m_seed;
  SimTime m_tEnd;
  Engine m_engine;
  std::unique_ptr<Network> m_network;
  std::unique_ptr<MobilityManager> m_mobility;
  std::unique_ptr<FaultInjector> m_faults;
  std::unique_ptr<AdmissionController> m_admission;
  MetricsCollector m_metrics;

  std::vector<Flow> m_flows;
  std::vector<AdmissionDecision> m_decisions;
  std::vector<bool> m_sending;
  std::vector<Source> m_sources;
  std::vector<SurgeryState> m_surgery;
  std::vector<std::int32_t> m_surgeryByCmdFlow; // per flow, -1 if none
  std::vector<std::int32_t> m_surgeryByAckFlow;
  std::vector<Twin> m_twins;
  std::vector<TwinRuntime> m_twinRt;
  std::optional<TwinId> m_root;
  std::uint64_t m_alertsRaised = 0;
  std::uint64_t m_alertsDelivered = 0;
  std::uint64_t m_peakInFlight = 0;
  bool m_draining = false;
  bool m_ran = false;
};

} // namespace twinslice
