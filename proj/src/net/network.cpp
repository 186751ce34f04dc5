#include "twinslice/net/network.hpp"
#include "twinslice/error.hpp"

namespace twinslice {

SimTime
transmissionTime(std::uint64_t bytes, std::uint64_t rateBps)
{
  const unsigned __int128 bitsNs = static_cast<unsigned __int128>(bytes) * 8u * 1'000'000'000u;
  return SimTime{static_cast<std::uint64_t>((bitsNs + rateBps - 1) / rateBps)};
}

SimTime
unloadedPathDelay(const Topology& topology, const std::vector<LinkId>& path, std::uint64_t totalBytes)
{
  SimTime total;
  for (LinkId id : path) {
    const auto& l = topology.link(id);
    total += transmissionTime(totalBytes, l.rateBps) + l.propDelay;
  }
  return total;
}

Network::Network(Engine& engine, Topology topology, RngStream lossRng)
  : m_engine(engine)
  , m_topology(std::move(topology))
  , m_routing(m_topology)
  , m_lossRng(std::move(lossRng))
  , m_dirs(m_topology.links().size() * 2)
{
  m_engine.on(EventKind::FrameDeparture, [this](const Event& e) { onDeparture(e); });
  m_engine.on(EventKind::FrameArrival, [this](const Event& e) { onArrival(e); });
}

std::uint32_t
Network::store(Frame frame)
{
  ++m_inFlight;
  if (!m_free.empty()) {
    auto id = m_free.back();
    m_free.pop_back();
    m_frames[id] = std::move(frame);
    return id;
  }
  m_frames.push_back(std::move(frame));
  return static_cast<std::uint32_t>(m_frames.size() - 1);
}

Frame
Network::release(std::uint32_t id)
{
  --m_inFlight;
  Frame f = std::move(m_frames[id]);
  m_frames[id].sync.reset();
  m_free.push_back(id);
  return f;
}

void
Network::inject(Frame frame, SimTime at)
{
  const NodeId src = frame.src;
  const auto id = store(std::move(frame));
  m_engine.schedule(at, EventKind::FrameArrival, FrameArrivalRec{id, src, kNoIndex, 0});
}

void
Network::transmit(std::uint32_t direction, Frame frame)
{
  const auto& link = m_topology.link(linkOfDirection(direction));
  if (!m_topology.usable(link))
    throw LinkDown(link.name);
  enqueue(direction, store(std::move(frame)));
}

void
Network::drop(std::uint32_t id, DropCause cause)
{
  Frame f = release(id);
  if (m_callbacks.dropped)
    m_callbacks.dropped(std::move(f), cause);
}

void
Network::deliver(std::uint32_t id)
{
  Frame f = release(id);
  if (m_callbacks.delivered)
    m_callbacks.delivered(std::move(f));
}

void
Network::onArrival(const Event& e)
{
  const auto& rec = e.as<FrameArrivalRec>();
  // A link that failed while the frame was on the wire loses it.
  if (rec.direction != kNoIndex && m_dirs[rec.direction].generation != rec.generation) {
    drop(rec.frame, DropCause::Fault);
    return;
  }
  forward(rec.frame, rec.node);
}

void
Network::forward(std::uint32_t id, NodeId at)
{
  const auto& node = m_topology.node(at);
  if (!node.up) {
    drop(id, DropCause::Fault);
    return;
  }
  Frame& f = m_frames[id];
  if (f.dst == at) {
    deliver(id);
    return;
  }
  if (++f.hops > kMaxHops) {
    drop(id, DropCause::Fault);
    return;
  }
  if (node.mobile && node.attachedTo == kNoNode) {
    auto& buffer = m_mobileBuffers.at(at);
    if (buffer.frames.size() >= buffer.cap) {
      drop(id, DropCause::Queue);
    } else {
      buffer.frames.push_back(id);
      ++buffer.total;
    }
    return;
  }
  const auto hop = m_routing.nextHop(at, f.dst);
  if (!hop) {
    drop(id, DropCause::Fault);
    return;
  }
  enqueue(directionOf(m_topology.link(*hop), at), id);
}

void
Network::enqueue(std::uint32_t direction, std::uint32_t id)
{
  auto& dir = m_dirs[direction];
  const auto& link = m_topology.link(linkOfDirection(direction));
  if (!m_topology.usable(link)) {
    drop(id, DropCause::Fault);
    return;
  }
  if (dir.queue.size() >= link.queueCap) {
    drop(id, DropCause::Queue);
    return;
  }
  const auto& f = m_frames[id];
  dir.queue.enqueue(QueuedFrame{id, static_cast<std::uint32_t>(f.totalBytes), f.slice});
  if (!dir.busy)
    startTransmission(direction);
}

void
Network::startTransmission(std::uint32_t direction)
{
  auto& dir = m_dirs[direction];
  auto next = dir.queue.dequeue();
  if (!next)
    return;
  dir.busy = true;
  dir.inService = next->frame;
  const auto& link = m_topology.link(linkOfDirection(direction));
  const auto& f = m_frames[next->frame];
  if (m_callbacks.transmitStarted)
    m_callbacks.transmitStarted(direction, f);
  m_engine.schedule(m_engine.now() + transmissionTime(f.totalBytes, link.rateBps), EventKind::FrameDeparture,
                    FrameDepartureRec{direction, dir.generation});
}

void
Network::onDeparture(const Event& e)
{
  const auto& rec = e.as<FrameDepartureRec>();
  auto& dir = m_dirs[rec.direction];
  if (rec.generation != dir.generation)
    return; // the link failed mid-serialization; purgeLink already dropped it
  const auto id = dir.inService;
  dir.busy = false;
  dir.inService = kNoIndex;

  const auto& link = m_topology.link(linkOfDirection(rec.direction));
  if (m_lossRng.bernoulli(link.lossProb)) {
    drop(id, DropCause::Loss);
  } else {
    const NodeId from = rec.direction % 2 == 0 ? link.a : link.b;
    m_engine.schedule(m_engine.now() + link.propDelay, EventKind::FrameArrival,
                      FrameArrivalRec{id, link.other(from), rec.direction, dir.generation});
  }
  startTransmission(rec.direction);
}

void
Network::purgeLink(LinkId id)
{
  for (std::uint32_t direction : {id * 2, id * 2 + 1}) {
    auto& dir = m_dirs[direction];
    ++dir.generation;
    if (dir.busy) {
      drop(dir.inService, DropCause::Fault);
      dir.busy = false;
      dir.inService = kNoIndex;
    }
    for (const auto& q : dir.queue.drainAll())
      drop(q.frame, DropCause::Fault);
  }
}

void
Network::failLink(LinkId id)
{
  m_topology.setLinkUp(id, false);
  purgeLink(id);
}

void
Network::recoverLink(LinkId id)
{
  m_topology.setLinkUp(id, true);
}

void
Network::failNode(NodeId id)
{
  m_topology.setNodeUp(id, false);
  for (LinkId l : m_topology.adjacent(id))
    purgeLink(l);
  if (auto it = m_mobileBuffers.find(id); it != m_mobileBuffers.end()) {
    auto pending = std::move(it->second.frames);
    it->second.frames.clear();
    for (auto f : pending)
      drop(f, DropCause::Fault);
  }
}

void
Network::recoverNode(NodeId id)
{
  m_topology.setNodeUp(id, true);
}

void
Network::makeMobile(NodeId device, NodeId edge, std::size_t bufferCap)
{
  m_topology.setMobile(device, edge);
  m_mobileBuffers[device] = MobileBuffer{{}, bufferCap, 0};
}

void
Network::setAttachment(NodeId device, NodeId edge)
{
  m_topology.setAttachment(device, edge);
  if (edge == kNoNode)
    return;
  auto& buffer = m_mobileBuffers.at(device).frames;
  auto pending = std::move(buffer);
  buffer.clear();
  for (auto id : pending) {
    --m_frames[id].hops; // counted once already when it was buffered
    forward(id, device);
  }
}

std::size_t
Network::buffered(NodeId device) const
{
  auto it = m_mobileBuffers.find(device);
  return it == m_mobileBuffers.end() ? 0 : it->second.frames.size();
}

std::uint64_t
Network::framesBuffered(NodeId device) const
{
  auto it = m_mobileBuffers.find(device);
  return it == m_mobileBuffers.end() ? 0 : it->second.total;
}

} // namespace twinslice
