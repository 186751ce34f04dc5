#include "twinslice/twin/twin.hpp"
#include "twinslice/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace twinslice {

std::string_view
toString(TwinLevel level)
{
  switch (level) {
  case TwinLevel::IndividualEdge: return "individual";
  case TwinLevel::GlobalEdge: return "global_edge";
  case TwinLevel::GlobalCore: return "global_core";
  }
  return "?";
}

std::optional<TwinLevel>
parseTwinLevel(std::string_view name)
{
  if (name == "individual")
    return TwinLevel::IndividualEdge;
  if (name == "global_edge")
    return TwinLevel::GlobalEdge;
  if (name == "global_core")
    return TwinLevel::GlobalCore;
  return std::nullopt;
}

double
Reducer::apply(std::vector<double> values) const
{
  switch (kind) {
  case ReducerKind::Max:
    return *std::max_element(values.begin(), values.end());
  case ReducerKind::Min:
    return *std::min_element(values.begin(), values.end());
  case ReducerKind::CountOver:
    return static_cast<double>(std::count_if(values.begin(), values.end(), [&](double v) { return v > threshold; }));
  case ReducerKind::Sum:
  case ReducerKind::Mean: {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
      sum += v;
    return kind == ReducerKind::Sum ? sum : sum / static_cast<double>(values.size());
  }
  }
  return 0.0;
}

std::string
Reducer::describe() const
{
  switch (kind) {
  case ReducerKind::Mean: return "mean";
  case ReducerKind::Max: return "max";
  case ReducerKind::Min: return "min";
  case ReducerKind::Sum: return "sum";
  case ReducerKind::CountOver: {
    std::ostringstream os;
    os << "count_over(" << threshold << ")";
    return os.str();
  }
  }
  return "?";
}

std::optional<Reducer>
parseReducer(std::string_view text)
{
  if (text == "mean")
    return Reducer{ReducerKind::Mean};
  if (text == "max")
    return Reducer{ReducerKind::Max};
  if (text == "min")
    return Reducer{ReducerKind::Min};
  if (text == "sum")
    return Reducer{ReducerKind::Sum};
  constexpr std::string_view prefix = "count_over(";
  if (text.starts_with(prefix) && text.ends_with(")")) {
    auto arg = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    double th = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), th);
    if (ec == std::errc{} && ptr == arg.data() + arg.size() && std::isfinite(th))
      return Reducer{ReducerKind::CountOver, th};
  }
  return std::nullopt;
}

std::vector<std::string>
applyDeltas(TwinState& state, const SyncMessage& msg, SimTime arrivedAt)
{
  for (const auto& d : msg.deltas) {
    if (d.name.empty())
      throw MessageInvalid("delta with empty metric name");
    if (!std::isfinite(d.value))
      throw MessageInvalid("non-finite value for '" + d.name + "'");
    if (d.version == 0)
      throw MessageInvalid("version 0 for '" + d.name + "'");
    if (d.observedAt > arrivedAt)
      throw MessageInvalid("'" + d.name + "' observed after arrival");
  }
  std::vector<std::string> updated;
  for (const auto& d : msg.deltas) {
    auto it = state.find(d.name);
    if (it != state.end() && d.version <= it->second.version)
      continue;
    state[d.name] = MetricSample{d.value, d.version, d.observedAt};
    updated.push_back(d.name);
  }
  return updated;
}

std::optional<TwinState>
aggregateStates(const AggregationPolicy& policy, const TwinState& previous, std::span<const TwinState* const> children)
{
  TwinState next = previous;
  bool any = false;
  for (const auto& [metric, reducer] : policy) {
    std::vector<double> values;
    SimTime oldest = SimTime::max();
    for (const TwinState* child : children) {
      auto it = child->find(metric);
      if (it == child->end())
        continue;
      values.push_back(it->second.value);
      oldest = std::min(oldest, it->second.observedAt);
    }
    if (values.empty())
      continue;
    any = true;
    auto& slot = next[metric];
    slot.value = reducer.apply(std::move(values));
    slot.version += 1;
    slot.observedAt = oldest;
  }
  if (!any)
    return std::nullopt;
  return next;
}

Twin::Twin(TwinId id, std::string name, TwinLevel level, NodeId host)
  : m_id(id)
  , m_name(std::move(name))
  , m_level(level)
  , m_host(host)
{
}

std::vector<std::string>
Twin::applySync(const SyncMessage& msg, SimTime arrivedAt)
{
  return applyDeltas(m_state, msg, arrivedAt);
}

SimTime
Twin::staleness(std::string_view metric, SimTime now) const
{
  auto it = m_state.find(metric);
  if (it == m_state.end())
    throw UnknownMetric(m_name + "." + std::string(metric));
  return now - it->second.observedAt;
}

bool
Twin::aggregate(std::span<const TwinState* const> childStates)
{
  auto next = aggregateStates(policy, m_state, childStates);
  if (!next)
    return false;
  m_state = std::move(*next);
  return true;
}

std::optional<AlertEvent>
Twin::escalateAlert(std::string_view metric, double threshold, SimTime now)
{
  auto it = m_state.find(metric);
  if (it == m_state.end())
    throw UnknownMetric(m_name + "." + std::string(metric));
  const double value = it->second.value;
  bool& disarmed = m_disarmed[{std::string(metric), threshold}];
  if (value > threshold) {
    if (disarmed)
      return std::nullopt;
    disarmed = true;
    return AlertEvent{m_id, std::string(metric), value, threshold, now};
  }
  if (value < threshold)
    disarmed = false;
  return std::nullopt;
}

std::optional<SyncMessage>
Twin::pendingSync(SimTime now) const
{
  SyncMessage msg;
  msg.source = m_id;
  msg.emittedAt = now;
  for (const auto& [name, sample] : m_state) {
    auto it = m_acked.find(name);
    if (it != m_acked.end() && sample.version <= it->second)
      continue;
    msg.deltas.push_back(MetricDelta{name, sample.value, sample.version, sample.observedAt});
  }
  if (msg.deltas.empty())
    return std::nullopt;
  return msg;
}

void
Twin::acknowledge(const SyncMessage& msg)
{
  for (const auto& d : msg.deltas) {
    auto& acked = m_acked[d.name];
    acked = std::max(acked, d.version);
  }
}

std::vector<std::string>
Twin::applyChildSync(const SyncMessage& msg, SimTime arrivedAt)
{
  return applyDeltas(m_mirrors[msg.source], msg, arrivedAt);
}

} // namespace twinslice
