#include "twinslice/twin/entity.hpp"

namespace twinslice {

PhysicalEntity::PhysicalEntity(TwinId mirroredBy, std::vector<MetricSource> sources, RngStream rng)
  : m_twin(mirroredBy)
  , m_sources(std::move(sources))
  , m_versions(m_sources.size(), 0)
  , m_rng(std::move(rng))
{
}

SyncMessage
PhysicalEntity::sample(SimTime now)
{
  SyncMessage msg;
  msg.source = m_twin;
  msg.emittedAt = now;
  msg.deltas.reserve(m_sources.size());
  for (std::size_t i = 0; i < m_sources.size(); ++i) {
    const auto& src = m_sources[i];
    // Draw unconditionally so scripted overrides never shift later samples.
    const double modelled = src.base + src.jitter * (2.0 * m_rng.uniform() - 1.0);
    double value = modelled;
    for (const auto& point : src.script) {
      if (point.at > now)
        break;
      value = point.value.value_or(modelled);
    }
    msg.deltas.push_back(MetricDelta{src.name, value, ++m_versions[i], now});
  }
  return msg;
}

} // namespace twinslice
