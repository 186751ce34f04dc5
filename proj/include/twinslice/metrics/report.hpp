#pragma once

#include "twinslice/metrics/histogram.hpp"
#include "twinslice/slices/flow.hpp"
#include "twinslice/slices/sla.hpp"
#include "twinslice/slices/slice.hpp"
#include "twinslice/twin/twin.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twinslice {

struct TrafficCounters
{
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t droppedLoss = 0;
  std::uint64_t droppedQueue = 0;
  std::uint64_t droppedFault = 0;
  std::uint64_t deliveredPayloadBytes = 0;

  std::uint64_t dropped() const { return droppedLoss + droppedQueue + droppedFault; }
  double reliability() const;
  void merge(const TrafficCounters& o);
};

struct DelaySummary
{
  std::uint64_t samples = 0;
  double meanNs = 0.0;
  std::uint64_t minNs = 0;
  std::uint64_t p50Ns = 0;
  std::uint64_t p99Ns = 0;
  std::uint64_t maxNs = 0;

  static DelaySummary of(const DelayHistogram& h);
};

struct SliceReport
{
  SliceClass slice = SliceClass::umMTC;
  bool present = false;
  TrafficCounters traffic;
  DelaySummary delay;
  double throughputBps = 0.0;
  std::uint32_t flowsAdmitted = 0;
  std::uint32_t flowsRejected = 0;
  SlaVerdict verdict;
};

struct FlowReport
{
  std::string name;
  SliceClass slice = SliceClass::umMTC;
  FlowRole role = FlowRole::Application;
  std::string src;
  std::string dst;
  std::string admission;
  bool sending = false;
  std::uint64_t setupLatencyNs = 0;
  std::uint64_t unloadedDelayNs = 0;
  TrafficCounters traffic;
  DelaySummary delay;
  double throughputBps = 0.0;
};

struct StalenessStats
{
  std::uint64_t samples = 0;
  std::uint64_t maxNs = 0;
  long double sumNs = 0.0L;

  void record(SimTime s);
  double meanNs() const { return samples ? static_cast<double>(sumNs / samples) : 0.0; }
};

struct TwinReport
{
  std::string name;
  TwinLevel level = TwinLevel::IndividualEdge;
  std::string host;
  TwinState state;
  StalenessStats staleness;
  std::uint64_t syncsApplied = 0;
  std::uint64_t aggregations = 0;
  std::uint64_t noChildren = 0;
  std::uint64_t alertsRaised = 0;
};

struct LevelStaleness
{
  TwinLevel level = TwinLevel::IndividualEdge;
  std::uint32_t twins = 0;
  StalenessStats staleness;
};

struct FaultRecord
{
  std::string target;
  std::string kind;
  std::uint64_t failedAtNs = 0;
  std::uint64_t recoveredAtNs = 0;
  bool applied = false;
};

struct MobilityReport
{
  std::string workload;
  std::string device;
  std::uint64_t handovers = 0;
  std::uint64_t deferred = 0;
  std::uint64_t framesBuffered = 0;
  std::uint64_t maxGapNs = 0;
  std::uint64_t totalGapNs = 0;
  std::string finalEdge;
};

struct SurgeryReport
{
  std::string workload;
  std::uint64_t commands = 0;
  std::uint64_t acks = 0;
  DelaySummary rtt;
  std::uint64_t rttBudgetNs = 0;
  std::uint64_t withinBudget = 0;
};

struct EnergyReport
{
  std::string workload;
  std::string device;
  std::uint64_t transmissions = 0;
  PicoJoules energyPerTxPj = 0;
  PicoJoules consumedPj = 0;
  PicoJoules batteryPj = 0;
  bool exhausted = false;
};

struct RunReport
{
  std::string scenario;
  std::string digest;
  std::uint64_t masterSeed = 0;
  std::uint64_t tEndNs = 0;
  std::uint64_t drainedAtNs = 0;
  std::uint64_t events = 0;
  std::uint64_t peakInFlight = 0; // largest in-flight count seen at a metrics flush
  std::optional<double> frequencyThz;
  std::optional<double> wavelengthUm;
  std::array<SliceReport, kSliceCount> slices;
  bool includeDetail = true;
  std::vector<FlowReport> flows;
  std::vector<TwinReport> twins;
  std::vector<LevelStaleness> staleness;
  std::vector<FaultRecord> faults;
  std::vector<MobilityReport> mobility;
  std::vector<SurgeryReport> surgery;
  std::vector<EnergyReport> energy;
  std::uint64_t alertsRaised = 0;
  std::uint64_t alertsDelivered = 0;
  std::optional<double> wallClockSeconds;

  /// Any slice violated its contract.
  bool anyViolation() const;
  /// 0 when every verdict is met or no-data, 1 otherwise.
  int exitCode() const { return anyViolation() ? 1 : 0; }
};

enum class ReportFormat : std::uint8_t
{
  Json,
  Csv,
};

/// Six significant digits, so identical runs serialize identically.
double roundSignificant(double v, int digits = 6);

std::string emitReport(const RunReport& report, ReportFormat format);
std::string emitJson(const RunReport& report);
std::string emitCsv(const RunReport& report);

/// Writes `bytes` to `path`; throws IoFailure.
void writeFile(const std::string& path, const std::string& bytes);

} // namespace twinslice
