#pragma once

#include "twinslice/net/topology.hpp"

#include <map>
#include <optional>
#include <vector>

namespace twinslice {

/// Hop-count shortest path over usable links; ties go to the lowest next
/// node id, then the lowest link id. Empty iff src == dst.
/// Throws Unreachable when either end is down or no usable path exists.
std::vector<LinkId> route(const Topology& topology, NodeId src, NodeId dst);

/// Hop distances to `dst` over usable links (kUnreachable where none).
std::vector<std::uint32_t> distancesTo(const Topology& topology, NodeId dst);

inline constexpr std::uint32_t kUnreachable = 0xffffffffu;

/// Next-hop lookups backed by per-destination distance vectors that are
/// rebuilt whenever the topology epoch changes.
class RoutingTable
{
public:
  explicit RoutingTable(const Topology& topology) : m_topology(&topology) {}

  /// Outgoing link from `at` toward `dst`, or nullopt if unreachable.
  std::optional<LinkId> nextHop(NodeId at, NodeId dst);

  /// Same result as route(), reusing the cached distance vectors.
  std::vector<LinkId> path(NodeId src, NodeId dst);

private:
  const std::vector<std::uint32_t>& distances(NodeId dst);

  const Topology* m_topology;
  std::uint64_t m_epoch = ~0ULL;
  std::map<NodeId, std::vector<std::uint32_t>> m_cache;
};

/// The chosen link out of `at`, given distances toward the destination.
std::optional<LinkId> pickNextHop(const Topology& topology, const std::vector<std::uint32_t>& dist, NodeId at);

} // namespace twinslice
