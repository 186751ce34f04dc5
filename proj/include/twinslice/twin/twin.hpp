#pragma once

#include "twinslice/net/topology.hpp"
#include "twinslice/sim/time.hpp"
#include "twinslice/slices/slice.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twinslice {

using TwinId = std::uint32_t;

enum class TwinLevel : std::uint8_t
{
  IndividualEdge,
  GlobalEdge,
  GlobalCore,
};

std::string_view toString(TwinLevel level);
std::optional<TwinLevel> parseTwinLevel(std::string_view name);

/// Whether a twin of `level` may live on a node of `host`.
constexpr bool placementLegal(TwinLevel level, NodeKind host)
{
  return level == TwinLevel::GlobalCore ? host == NodeKind::CoreNode : host == NodeKind::EdgeNode;
}

struct MetricSample
{
  double value = 0.0;
  std::uint64_t version = 0;
  SimTime observedAt;
};

using TwinState = std::map<std::string, MetricSample, std::less<>>;

struct MetricDelta
{
  std::string name;
  double value = 0.0;
  std::uint64_t version = 0;
  SimTime observedAt;
};

struct SyncMessage
{
  TwinId source = 0; // sending twin, or the mirrored twin for entity samples
  std::vector<MetricDelta> deltas;
  SimTime emittedAt;
};

enum class ReducerKind : std::uint8_t
{
  Mean,
  Max,
  Min,
  Sum,
  CountOver,
};

struct Reducer
{
  ReducerKind kind = ReducerKind::Mean;
  double threshold = 0.0; // CountOver only

  /// Order-insensitive: values are sorted before any floating-point sum.
  double apply(std::vector<double> values) const;
  std::string describe() const;
};

/// Parses "mean", "max", "min", "sum", or "count_over(<threshold>)".
std::optional<Reducer> parseReducer(std::string_view text);

using AggregationPolicy = std::map<std::string, Reducer, std::less<>>;

struct AlertRule
{
  std::string metric;
  double threshold = 0.0;
};

struct AlertEvent
{
  TwinId twin = 0;
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  SimTime at;
};

/// Last-writer-wins by version. Returns the names actually updated.
/// Throws MessageInvalid on empty names, non-finite values, version 0,
/// or observations stamped after `arrivedAt`.
std::vector<std::string> applyDeltas(TwinState& state, const SyncMessage& msg, SimTime arrivedAt);

/**
 * Reduces the children's metrics into a new parent state. Each policy
 * metric bumps the parent's version by one and takes the oldest
 * contributing observation time. Metrics no child carries are left as they
 * were. Returns nullopt (NoChildren) when no child contributes at all.
 */
std::optional<TwinState> aggregateStates(const AggregationPolicy& policy, const TwinState& previous,
                                         std::span<const TwinState* const> children);

class Twin
{
public:
  Twin(TwinId id, std::string name, TwinLevel level, NodeId host);

  TwinId id() const { return m_id; }
  const std::string& name() const { return m_name; }
  TwinLevel level() const { return m_level; }
  NodeId host() const { return m_host; }
  const TwinState& state() const { return m_state; }

  SliceClass slice = SliceClass::umMTC;
  SimTime syncPeriod = milliseconds(100);
  SimTime aggregationPeriod = milliseconds(100);
  AggregationPolicy policy;
  std::vector<AlertRule> alerts;
  std::vector<TwinId> children;
  std::optional<TwinId> parent;

  std::vector<std::string> applySync(const SyncMessage& msg, SimTime arrivedAt);

  /// now - observedAt of the stored value. Throws UnknownMetric.
  SimTime staleness(std::string_view metric, SimTime now) const;

  /// Replaces state with the reduction of `children`; false on NoChildren.
  bool aggregate(std::span<const TwinState* const> childStates);

  /// Fires once per upward crossing of `threshold`; re-arms once the value
  /// drops back below it. Throws UnknownMetric.
  std::optional<AlertEvent> escalateAlert(std::string_view metric, double threshold, SimTime now);

  // Outgoing sync toward the parent: only versions newer than acknowledged.
  std::optional<SyncMessage> pendingSync(SimTime now) const;
  void acknowledge(const SyncMessage& msg);

  // Summaries received from children (GlobalCore keeps one per GlobalEdge).
  std::vector<std::string> applyChildSync(const SyncMessage& msg, SimTime arrivedAt);
  const std::map<TwinId, TwinState>& mirrors() const { return m_mirrors; }

private:
  TwinId m_id;
  std::string m_name;
  TwinLevel m_level;
  NodeId m_host;
  TwinState m_state;
  std::map<std::string, std::uint64_t, std::less<>> m_acked;
  std::map<std::pair<std::string, double>, bool> m_disarmed;
  std::map<TwinId, TwinState> m_mirrors;
};

} // namespace twinslice
