#include "twinslice/net/topology.hpp"
#include "twinslice/error.hpp"

#include <queue>

namespace twinslice {

std::string_view
toString(NodeKind kind)
{
  switch (kind) {
  case NodeKind::Device: return "device";
  case NodeKind::EdgeNode: return "edge";
  case NodeKind::CoreNode: return "core";
  }
  return "?";
}

std::optional<NodeKind>
parseNodeKind(std::string_view name)
{
  if (name == "device")
    return NodeKind::Device;
  if (name == "edge")
    return NodeKind::EdgeNode;
  if (name == "core")
    return NodeKind::CoreNode;
  return std::nullopt;
}

std::vector<std::string>
Topology::validate(const TopologySpec& spec)
{
  std::vector<std::string> errors;
  const auto n = spec.nodes.size();

  std::size_t cores = 0;
  for (const auto& node : spec.nodes)
    if (node.kind == NodeKind::CoreNode)
      ++cores;
  if (cores == 0)
    errors.push_back("topology has no core node");
  else if (cores > 1)
    errors.push_back("topology has " + std::to_string(cores) + " core nodes; exactly one is allowed");

  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t i = 0; i < spec.links.size(); ++i) {
    const auto& l = spec.links[i];
    const std::string where = "link '" + l.name + "'";
    if (l.a >= n || l.b >= n) {
      errors.push_back(where + " references a node outside the topology");
      continue;
    }
    if (l.a == l.b)
      errors.push_back(where + " is a self-loop");
    if (l.rateBps == 0)
      errors.push_back(where + " has zero rate");
    if (!(l.lossProb >= 0.0 && l.lossProb <= 1.0))
      errors.push_back(where + " loss probability outside [0, 1]");

    const auto ka = spec.nodes[l.a].kind;
    const auto kb = spec.nodes[l.b].kind;
    const bool deviceA = ka == NodeKind::Device;
    const bool deviceB = kb == NodeKind::Device;
    if (deviceA && deviceB)
      errors.push_back(where + " wires two devices together");
    else if ((deviceA && kb == NodeKind::CoreNode) || (deviceB && ka == NodeKind::CoreNode))
      errors.push_back(where + " wires a device directly to the core");
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }

  if (n == 0)
    return errors;

  // Whole graph connected.
  std::vector<bool> seen(n, false);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
  }
  for (NodeId i = 0; i < n; ++i)
    if (!seen[i]) {
      errors.push_back("topology is disconnected: node '" + spec.nodes[i].name + "' is unreachable");
      break;
    }

  // Every edge node reaches the core without transiting a device.
  if (cores == 1) {
    NodeId core = 0;
    while (spec.nodes[core].kind != NodeKind::CoreNode)
      ++core;
    std::vector<bool> reach(n, false);
    reach[core] = true;
    q.push(core);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u])
        if (!reach[v] && spec.nodes[v].kind != NodeKind::Device) {
          reach[v] = true;
          q.push(v);
        }
    }
    for (NodeId i = 0; i < n; ++i) {
      if (spec.nodes[i].kind == NodeKind::EdgeNode && !reach[i])
        errors.push_back("edge node '" + spec.nodes[i].name + "' has no path to the core");
      if (spec.nodes[i].kind == NodeKind::Device && adj[i].empty())
        errors.push_back("device '" + spec.nodes[i].name + "' is not attached to any edge node");
    }
  }
  return errors;
}

Topology
Topology::build(const TopologySpec& spec)
{
  auto errors = validate(spec);
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors)
      msg += (msg.empty() ? "" : "; ") + e;
    throw TopologyInvalid(msg);
  }

  Topology t;
  t.m_nodes.reserve(spec.nodes.size());
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    Node node;
    node.id = static_cast<NodeId>(i);
    node.kind = spec.nodes[i].kind;
    node.name = spec.nodes[i].name;
    if (node.kind == NodeKind::CoreNode)
      t.m_core = node.id;
    t.m_nodes.push_back(std::move(node));
  }
  t.m_adj.resize(spec.nodes.size());
  for (std::size_t i = 0; i < spec.links.size(); ++i) {
    const auto& s = spec.links[i];
    Link l;
    l.id = static_cast<LinkId>(i);
    l.a = s.a;
    l.b = s.b;
    l.rateBps = s.rateBps;
    l.propDelay = s.propDelay;
    l.lossProb = s.lossProb;
    l.queueCap = s.queueCap;
    l.name = s.name;
    t.m_adj[l.a].push_back(l.id);
    t.m_adj[l.b].push_back(l.id);
    t.m_links.push_back(std::move(l));
  }
  return t;
}

std::optional<NodeId>
Topology::find(std::string_view name) const
{
  for (const auto& n : m_nodes)
    if (n.name == name)
      return n.id;
  return std::nullopt;
}

std::optional<LinkId>
Topology::findLink(std::string_view name) const
{
  for (const auto& l : m_links)
    if (l.name == name)
      return l.id;
  return std::nullopt;
}

bool
Topology::usable(const Link& link) const
{
  if (!link.up)
    return false;
  const auto& a = m_nodes[link.a];
  const auto& b = m_nodes[link.b];
  if (!a.up || !b.up)
    return false;
  if (a.mobile && a.attachedTo != link.b)
    return false;
  if (b.mobile && b.attachedTo != link.a)
    return false;
  return true;
}

void
Topology::setNodeUp(NodeId id, bool up)
{
  m_nodes.at(id).up = up;
  ++m_epoch;
}

void
Topology::setLinkUp(LinkId id, bool up)
{
  m_links.at(id).up = up;
  ++m_epoch;
}

void
Topology::setMobile(NodeId device, NodeId attachedTo)
{
  auto& n = m_nodes.at(device);
  n.mobile = true;
  n.attachedTo = attachedTo;
  ++m_epoch;
}

void
Topology::setAttachment(NodeId device, NodeId edge)
{
  m_nodes.at(device).attachedTo = edge;
  ++m_epoch;
}

} // namespace twinslice
