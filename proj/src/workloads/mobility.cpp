#include "twinslice/workloads/mobility.hpp"

#include <algorithm>

namespace twinslice {

MobilityManager::MobilityManager(Engine& engine, Network& network)
  : m_engine(engine)
  , m_network(network)
{
  m_engine.on(EventKind::Handover, [this](const Event& e) { onHandover(e); });
}

std::uint32_t
MobilityManager::add(const AmbulanceRun& run, SimTime horizon)
{
  const auto id = static_cast<std::uint32_t>(m_mobiles.size());
  Mobile m;
  m.workload = run.name;
  m.device = run.device;
  m.sequence = run.edgeSequence;
  m.gap = run.handoverGap;
  m_network.makeMobile(run.device, m.sequence.front(), run.bufferCap);

  const SimTime interval = handoverInterval(run.speedKmh, run.cellSpanM);
  const SimTime end = activeEnd(WorkloadSpec{run}, horizon);
  for (std::size_t j = 1; j < m.sequence.size() && interval.ticks > 0; ++j) {
    const SimTime at{run.start.ticks + j * interval.ticks};
    if (at >= end)
      break;
    m_engine.schedule(at, EventKind::Handover, HandoverRec{id, false});
  }
  m_mobiles.push_back(std::move(m));
  return id;
}

bool
MobilityManager::handover(std::uint32_t mobile, std::size_t targetIndex)
{
  auto& m = m_mobiles.at(mobile);
  if (m.detached || targetIndex >= m.sequence.size())
    return false;
  m.detached = true;
  m.detachedAt = m_engine.now();
  m.target = targetIndex;
  m_network.setAttachment(m.device, kNoNode);
  m_engine.schedule(m_engine.now() + m.gap, EventKind::Handover, HandoverRec{mobile, true});
  return true;
}

bool
MobilityManager::reachable(NodeId device, NodeId edge) const
{
  const auto& topo = m_network.topology();
  if (!topo.node(edge).up || !topo.node(device).up)
    return false;
  for (LinkId id : topo.adjacent(device)) {
    const auto& l = topo.link(id);
    if (l.up && l.other(device) == edge)
      return true;
  }
  return false;
}

void
MobilityManager::tryAttach(std::uint32_t mobile)
{
  auto& m = m_mobiles[mobile];
  const NodeId edge = m.sequence[m.target];
  if (reachable(m.device, edge)) {
    m.current = m.target;
    m.detached = false;
    ++m.handovers;
    const SimTime gap = m_engine.now() - m.detachedAt;
    m.maxGap = std::max(m.maxGap, gap);
    m.totalGap += gap;
    m_network.setAttachment(m.device, edge);
    return;
  }
  // Target down: move further along the corridor, or wait for this edge
  // to come back if it is the last one.
  ++m.deferred;
  if (m.target + 1 < m.sequence.size())
    ++m.target;
  m_engine.schedule(m_engine.now() + m.gap, EventKind::Handover, HandoverRec{mobile, true});
}

void
MobilityManager::onHandover(const Event& e)
{
  const auto& rec = e.as<HandoverRec>();
  if (rec.attach) {
    tryAttach(rec.mobile);
    return;
  }
  if (m_draining)
    return;
  const auto& m = m_mobiles[rec.mobile];
  handover(rec.mobile, m.current + 1);
}

void
MobilityManager::attachmentLost(NodeId edge)
{
  for (std::uint32_t i = 0; i < m_mobiles.size(); ++i) {
    const auto& m = m_mobiles[i];
    if (!m.detached && m.sequence[m.current] == edge)
      handover(i, m.current + 1);
  }
}

void
MobilityManager::linkLost(LinkId link)
{
  const auto& l = m_network.topology().link(link);
  for (std::uint32_t i = 0; i < m_mobiles.size(); ++i) {
    const auto& m = m_mobiles[i];
    if (m.detached || (l.a != m.device && l.b != m.device))
      continue;
    if (l.other(m.device) == m.sequence[m.current])
      handover(i, m.current + 1);
  }
}

std::vector<MobilityReport>
MobilityManager::report() const
{
  std::vector<MobilityReport> out;
  for (const auto& m : m_mobiles) {
    MobilityReport r;
    r.workload = m.workload;
    r.device = m_network.topology().node(m.device).name;
    r.handovers = m.handovers;
    r.deferred = m.deferred;
    r.framesBuffered = m_network.framesBuffered(m.device);
    r.maxGapNs = m.maxGap.ticks;
    r.totalGapNs = m.totalGap.ticks;
    r.finalEdge = m.detached ? "" : m_network.topology().node(m.sequence[m.current]).name;
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace twinslice
