#include "twinslice/workloads/faults.hpp"
#include "twinslice/error.hpp"

namespace twinslice {

FaultInjector::FaultInjector(Engine& engine, Network& network)
  : m_engine(engine)
  , m_network(network)
{
  m_engine.on(EventKind::FaultStart, [this](const Event& e) { onStart(e); });
  m_engine.on(EventKind::FaultEnd, [this](const Event& e) { onEnd(e); });
}

void
FaultInjector::inject(const FaultSpec& spec)
{
  const auto& topo = m_network.topology();
  const bool exists = spec.kind == FaultSpec::Target::Node ? spec.id < topo.nodes().size()
                                                           : spec.id < topo.links().size();
  if (!exists)
    throw UnknownTarget(spec.targetName);
  if (spec.tRecover <= spec.tFail)
    throw Error("fault on '" + spec.targetName + "': t_recover must be after t_fail");
  const auto id = static_cast<std::uint32_t>(m_faults.size());
  m_faults.push_back(spec);
  m_applied.push_back(false);
  m_engine.schedule(spec.tFail, EventKind::FaultStart, FaultRec{id});
  m_engine.schedule(spec.tRecover, EventKind::FaultEnd, FaultRec{id});
}

void
FaultInjector::onStart(const Event& e)
{
  const auto id = e.as<FaultRec>().fault;
  if (m_draining)
    return;
  const auto& f = m_faults[id];
  if (f.kind == FaultSpec::Target::Node)
    m_network.failNode(f.id);
  else
    m_network.failLink(f.id);
  m_applied[id] = true;
  if (m_listener)
    m_listener(f, true);
}

void
FaultInjector::onEnd(const Event& e)
{
  const auto id = e.as<FaultRec>().fault;
  if (!m_applied[id])
    return;
  const auto& f = m_faults[id];
  if (f.kind == FaultSpec::Target::Node)
    m_network.recoverNode(f.id);
  else
    m_network.recoverLink(f.id);
  if (m_listener)
    m_listener(f, false);
}

std::vector<FaultRecord>
FaultInjector::timeline() const
{
  std::vector<FaultRecord> out;
  for (std::size_t i = 0; i < m_faults.size(); ++i) {
    const auto& f = m_faults[i];
    out.push_back(FaultRecord{f.targetName, f.kind == FaultSpec::Target::Node ? "node" : "link", f.tFail.ticks,
                              f.tRecover.ticks, m_applied[i]});
  }
  return out;
}

} // namespace twinslice
