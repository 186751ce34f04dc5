#pragma once

#include "twinslice/sim/rng.hpp"
#include "twinslice/twin/twin.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twinslice {

/// Piecewise-constant override: from `at` on, report `value`
/// (or resume the base/jitter model when value is empty).
struct ScriptPoint
{
  SimTime at;
  std::optional<double> value;
};

struct MetricSource
{
  std::string name;
  double base = 0.0;
  double jitter = 0.0;
  std::vector<ScriptPoint> script; // sorted by `at`
};

/// The physical side of an individual twin: synthetic vitals sampled on
/// every sync period, each sample carrying a fresh version per metric.
class PhysicalEntity
{
public:
  PhysicalEntity(TwinId mirroredBy, std::vector<MetricSource> sources, RngStream rng);

  SyncMessage sample(SimTime now);

  const std::vector<MetricSource>& sources() const { return m_sources; }

private:
  TwinId m_twin;
  std::vector<MetricSource> m_sources;
  std::vector<std::uint64_t> m_versions;
  RngStream m_rng;
};

} // namespace twinslice
