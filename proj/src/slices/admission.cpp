#include "twinslice/slices/admission.hpp"
#include "twinslice/net/network.hpp"
#include "twinslice/net/routing.hpp"

#include <sstream>

namespace twinslice {

std::string_view
toString(FlowRole role)
{
  switch (role) {
  case FlowRole::Application: return "application";
  case FlowRole::Acknowledgment: return "ack";
  case FlowRole::TwinSync: return "twin_sync";
  case FlowRole::Alert: return "alert";
  }
  return "?";
}

std::string
AdmissionDecision::describe() const
{
  if (accepted)
    return "accepted";
  return reason == Reason::Capacity ? "rejected(capacity)" : "rejected(delay)";
}

AdmissionController::AdmissionController(const Topology& topology, const StackProfile& profile,
                                         AdmissionConfig config)
  : m_topology(&topology)
  , m_routes(topology)
  , m_profile(profile)
  , m_config(config)
  , m_demand(topology.links().size() * 2, 0)
{
}

AdmissionDecision
AdmissionController::admit(const Flow& flow, const QosContract& contract)
{
  AdmissionDecision d;
  d.path = m_routes.path(flow.src, flow.dst);
  d.unloadedDelay = unloadedPathDelay(*m_topology, d.path, flow.frameBytes);
  d.setupLatency = m_profile.setupLatency(SimTime{2 * d.unloadedDelay.ticks});

  std::vector<std::uint32_t> directions;
  NodeId at = flow.src;
  for (LinkId id : d.path) {
    const auto& link = m_topology->link(id);
    directions.push_back(directionOf(link, at));
    at = link.other(at);
  }

  for (std::size_t i = 0; i < directions.size() && d.accepted; ++i) {
    const auto& link = m_topology->link(d.path[i]);
    const long double limit = static_cast<long double>(m_config.utilizationCap) * link.rateBps;
    const long double after = static_cast<long double>(m_demand[directions[i]]) + flow.demandRateBps;
    if (after > limit) {
      std::ostringstream os;
      os << "link '" << link.name << "' would carry " << static_cast<double>(after) << " bps > cap "
         << static_cast<double>(limit) << " bps";
      d.accepted = false;
      d.reason = AdmissionDecision::Reason::Capacity;
      d.detail = os.str();
    }
  }
  if (d.accepted) {
    const SimTime total = d.unloadedDelay + d.setupLatency;
    if (total > contract.maxE2eDelay) {
      std::ostringstream os;
      os << "unloaded delay " << total.ticks << " ns exceeds budget " << contract.maxE2eDelay.ticks << " ns";
      d.accepted = false;
      d.reason = AdmissionDecision::Reason::Delay;
      d.detail = os.str();
    }
  }

  if (d.accepted || m_config.mode == AdmissionConfig::Mode::Observe)
    for (auto dir : directions)
      m_demand[dir] += flow.demandRateBps;
  return d;
}

} // namespace twinslice
