#pragma once

#include "twinslice/sim/time.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twinslice {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

inline constexpr NodeId kNoNode = 0xffffffffu;

enum class NodeKind : std::uint8_t
{
  Device,
  EdgeNode,
  CoreNode,
};

std::string_view toString(NodeKind kind);
std::optional<NodeKind> parseNodeKind(std::string_view name);

struct Node
{
  NodeId id = 0;
  NodeKind kind = NodeKind::Device;
  std::string name;
  bool up = true;
  bool mobile = false;
  NodeId attachedTo = kNoNode; // meaningful only for mobile devices
};

struct Link
{
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  std::uint64_t rateBps = 1'000'000'000;
  SimTime propDelay;
  double lossProb = 0.0;
  std::uint32_t queueCap = 1024;
  bool up = true;
  std::string name;

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

struct NodeSpec
{
  std::string name;
  NodeKind kind = NodeKind::Device;
};

struct LinkSpec
{
  std::string name;
  NodeId a = 0;
  NodeId b = 0;
  std::uint64_t rateBps = 1'000'000'000;
  SimTime propDelay;
  double lossProb = 0.0;
  std::uint32_t queueCap = 1024;
};

struct TopologySpec
{
  std::vector<NodeSpec> nodes; // ids are positions
  std::vector<LinkSpec> links;
};

/// Direction index of traversing `link` starting at `from` (two per link).
constexpr std::uint32_t directionOf(const Link& link, NodeId from)
{
  return link.id * 2 + (from == link.a ? 0u : 1u);
}
constexpr LinkId linkOfDirection(std::uint32_t direction) { return direction / 2; }

/**
 * Validated node/link graph plus the mutable up/down and attachment state
 * the routing layer reads. Exactly one core; devices hang off edge nodes.
 */
class Topology
{
public:
  /// Throws TopologyInvalid listing every violated placement rule.
  static Topology build(const TopologySpec& spec);

  /// Every rule violation in `spec`; empty when valid.
  static std::vector<std::string> validate(const TopologySpec& spec);

  const std::vector<Node>& nodes() const { return m_nodes; }
  const std::vector<Link>& links() const { return m_links; }
  const Node& node(NodeId id) const { return m_nodes.at(id); }
  const Link& link(LinkId id) const { return m_links.at(id); }
  std::span<const LinkId> adjacent(NodeId id) const { return m_adj.at(id); }
  NodeId core() const { return m_core; }
  std::optional<NodeId> find(std::string_view name) const;
  std::optional<LinkId> findLink(std::string_view name) const;

  /// Whether frames may cross `link` right now (link and endpoints up, and
  /// a mobile endpoint is attached through this link).
  bool usable(const Link& link) const;

  void setNodeUp(NodeId id, bool up);
  void setLinkUp(LinkId id, bool up);
  void setMobile(NodeId device, NodeId attachedTo);
  void setAttachment(NodeId device, NodeId edge);

  /// Bumped on every state change; routing caches key on it.
  std::uint64_t epoch() const { return m_epoch; }

private:
  std::vector<Node> m_nodes;
  std::vector<Link> m_links;
  std::vector<std::vector<LinkId>> m_adj;
  NodeId m_core = kNoNode;
  std::uint64_t m_epoch = 0;
};

} // namespace twinslice
