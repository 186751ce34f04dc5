#pragma once

#include "twinslice/net/frame.hpp"
#include "twinslice/net/routing.hpp"
#include "twinslice/net/stack.hpp"
#include "twinslice/net/topology.hpp"
#include "twinslice/sim/engine.hpp"
#include "twinslice/sim/rng.hpp"
#include "twinslice/slices/scheduler.hpp"

#include <deque>
#include <functional>
#include <map>
#include <vector>

namespace twinslice {

/// ceil(bytes * 8 * 1e9 / rate) nanoseconds.
SimTime transmissionTime(std::uint64_t bytes, std::uint64_t rateBps);

/// Sum over `path` of transmission plus propagation for one frame of
/// `totalBytes`, with every queue empty.
SimTime unloadedPathDelay(const Topology& topology, const std::vector<LinkId>& path, std::uint64_t totalBytes);

/**
 * Packet-level forwarding plane.
 *
 * Each link is full duplex; each direction has a finite drop-tail queue
 * ordered by SliceScheduler and a single transmitter. Frames are forwarded
 * hop by hop using the current routing table, so link and node faults
 * reroute traffic that is still queued upstream of the failure.
 *
 * Registers the FrameDeparture and FrameArrival handlers on the engine.
 */
class Network
{
public:
  struct Callbacks
  {
    std::function<void(Frame&&)> delivered;
    std::function<void(Frame&&, DropCause)> dropped;
    /// Optional probe: a frame starts serializing on `direction`.
    std::function<void(std::uint32_t direction, const Frame&)> transmitStarted;
  };

  static constexpr std::uint32_t kMaxHops = 64;

  Network(Engine& engine, Topology topology, RngStream lossRng);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  void setCallbacks(Callbacks callbacks) { m_callbacks = std::move(callbacks); }

  Topology& topology() { return m_topology; }
  const Topology& topology() const { return m_topology; }

  /// Hands `frame` to its source node at time `at` (>= now).
  void inject(Frame frame, SimTime at);

  /// Enqueues on a link direction at the current time. Throws LinkDown if
  /// the link cannot carry traffic.
  void transmit(std::uint32_t direction, Frame frame);

  void failLink(LinkId id);
  void recoverLink(LinkId id);
  void failNode(NodeId id);
  void recoverNode(NodeId id);

  /// Mobile devices buffer outgoing frames while detached (edge == kNoNode).
  void makeMobile(NodeId device, NodeId edge, std::size_t bufferCap);
  void setAttachment(NodeId device, NodeId edge);
  std::size_t buffered(NodeId device) const;
  /// Frames that have entered the device's handover buffer so far.
  std::uint64_t framesBuffered(NodeId device) const;

  /// Frames currently held by the network (queued, serializing, propagating,
  /// buffered at a mobile device, or waiting to be injected).
  std::uint64_t inFlight() const { return m_inFlight; }

  std::size_t queueLength(std::uint32_t direction) const { return m_dirs.at(direction).queue.size(); }
  bool transmitting(std::uint32_t direction) const { return m_dirs.at(direction).busy; }

private:
  struct Direction
  {
    SliceScheduler queue;
    bool busy = false;
    std::uint32_t inService = kNoIndex;
    std::uint64_t generation = 0;
  };

  std::uint32_t store(Frame frame);
  Frame release(std::uint32_t id);

  void onDeparture(const Event& e);
  void onArrival(const Event& e);
  void forward(std::uint32_t id, NodeId at);
  void enqueue(std::uint32_t direction, std::uint32_t id);
  void startTransmission(std::uint32_t direction);
  void purgeLink(LinkId id);
  void drop(std::uint32_t id, DropCause cause);
  void deliver(std::uint32_t id);

  Engine& m_engine;
  Topology m_topology;
  RoutingTable m_routing;
  RngStream m_lossRng;
  Callbacks m_callbacks;

  std::vector<Frame> m_frames;
  std::vector<std::uint32_t> m_free;
  std::vector<Direction> m_dirs;
  struct MobileBuffer
  {
    std::deque<std::uint32_t> frames;
    std::size_t cap = 0;
    std::uint64_t total = 0;
  };

  std::map<NodeId, MobileBuffer> m_mobileBuffers;
  std::uint64_t m_inFlight = 0;
};

} // namespace twinslice
