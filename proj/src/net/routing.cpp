#include "twinslice/net/routing.hpp"
#include "twinslice/error.hpp"

#include <deque>
#include <string>

namespace twinslice {

std::vector<std::uint32_t>
distancesTo(const Topology& topology, NodeId dst)
{
  std::vector<std::uint32_t> dist(topology.nodes().size(), kUnreachable);
  if (!topology.node(dst).up)
    return dist;
  dist[dst] = 0;
  std::deque<NodeId> q{dst};
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (LinkId lid : topology.adjacent(u)) {
      const auto& l = topology.link(lid);
      if (!topology.usable(l))
        continue;
      const NodeId v = l.other(u);
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

std::optional<LinkId>
pickNextHop(const Topology& topology, const std::vector<std::uint32_t>& dist, NodeId at)
{
  if (dist[at] == kUnreachable || dist[at] == 0)
    return std::nullopt;
  std::optional<LinkId> best;
  NodeId bestNode = kNoNode;
  for (LinkId lid : topology.adjacent(at)) {
    const auto& l = topology.link(lid);
    if (!topology.usable(l))
      continue;
    const NodeId v = l.other(at);
    if (dist[v] + 1 != dist[at])
      continue;
    if (!best || v < bestNode || (v == bestNode && lid < *best)) {
      best = lid;
      bestNode = v;
    }
  }
  return best;
}

namespace {

std::vector<LinkId>
walk(const Topology& topology, const std::vector<std::uint32_t>& dist, NodeId src, NodeId dst)
{
  std::vector<LinkId> path;
  if (dist[src] == kUnreachable)
    throw Unreachable(topology.node(src).name + " -> " + topology.node(dst).name);
  NodeId at = src;
  while (at != dst) {
    const auto hop = pickNextHop(topology, dist, at);
    path.push_back(*hop);
    at = topology.link(*hop).other(at);
  }
  return path;
}

void
requireUp(const Topology& topology, NodeId src, NodeId dst)
{
  if (!topology.node(src).up || !topology.node(dst).up)
    throw Unreachable(topology.node(src).name + " -> " + topology.node(dst).name + ": endpoint down");
}

} // namespace

std::vector<LinkId>
route(const Topology& topology, NodeId src, NodeId dst)
{
  requireUp(topology, src, dst);
  if (src == dst)
    return {};
  return walk(topology, distancesTo(topology, dst), src, dst);
}

std::vector<LinkId>
RoutingTable::path(NodeId src, NodeId dst)
{
  requireUp(*m_topology, src, dst);
  if (src == dst)
    return {};
  return walk(*m_topology, distances(dst), src, dst);
}

const std::vector<std::uint32_t>&
RoutingTable::distances(NodeId dst)
{
  if (m_epoch != m_topology->epoch()) {
    m_cache.clear();
    m_epoch = m_topology->epoch();
  }
  auto it = m_cache.find(dst);
  if (it == m_cache.end())
    it = m_cache.emplace(dst, distancesTo(*m_topology, dst)).first;
  return it->second;
}

std::optional<LinkId>
RoutingTable::nextHop(NodeId at, NodeId dst)
{
  return pickNextHop(*m_topology, distances(dst), at);
}

} // namespace twinslice
