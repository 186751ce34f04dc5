#include "doctest.h"

#include "../support/harness.hpp"

#include "twinslice/error.hpp"
#include "twinslice/net/network.hpp"
#include "twinslice/net/routing.hpp"
#include "twinslice/net/stack.hpp"

#include <vector>

using namespace twinslice;
using twinslice::testing::treeSpec;

namespace {

struct Harness
{
  Engine engine;
  Network net;
  std::vector<std::pair<Frame, SimTime>> delivered;
  std::vector<std::pair<Frame, DropCause>> dropped;

  explicit Harness(const TopologySpec& spec, std::uint64_t seed = 1)
    : net(engine, Topology::build(spec), forkRng(seed, "network"))
  {
    net.setCallbacks({[this](Frame&& f) { delivered.emplace_back(std::move(f), engine.now()); },
                      [this](Frame&& f, DropCause c) { dropped.emplace_back(std::move(f), c); },
                      {}});
  }

  void send(NodeId src, NodeId dst, std::uint64_t bytes, SimTime at, SliceClass slice = SliceClass::umMTC)
  {
    Frame f;
    f.src = src;
    f.dst = dst;
    f.totalBytes = bytes;
    f.payloadBytes = bytes;
    f.slice = slice;
    f.createdAt = at;
    net.inject(std::move(f), at);
  }
};

} // namespace

TEST_CASE("topology validation")
{
  SUBCASE("tree of one core, two edges, four devices")
  {
    const auto spec = treeSpec(2, 4);
    CHECK(Topology::validate(spec).empty());
    const Topology t = Topology::build(spec);
    CHECK(t.nodes().size() == 7);
    CHECK(t.core() == 0);
  }
  SUBCASE("two cores")
  {
    auto spec = treeSpec(2, 4);
    spec.nodes[1].kind = NodeKind::CoreNode;
    CHECK_FALSE(Topology::validate(spec).empty());
    CHECK_THROWS_AS(Topology::build(spec), TopologyInvalid);
  }
  SUBCASE("no core")
  {
    auto spec = treeSpec(2, 4);
    spec.nodes[0].kind = NodeKind::EdgeNode;
    CHECK_THROWS_AS(Topology::build(spec), TopologyInvalid);
  }
  SUBCASE("device wired to the core")
  {
    auto spec = treeSpec(2, 4);
    spec.links.back().b = 0;
    CHECK_THROWS_AS(Topology::build(spec), TopologyInvalid);
  }
  SUBCASE("disconnected graph")
  {
    auto spec = treeSpec(2, 4);
    spec.links.pop_back();
    CHECK_THROWS_AS(Topology::build(spec), TopologyInvalid);
  }
}

TEST_CASE("stack overhead")
{
  const StackProfile def;
  CHECK(def.overheadBytes() == 136);
  CHECK(serializeOverhead(100, def) == 236);
  CHECK(serializeOverhead(0, StackProfile::zero()) == 0);
  StackProfile udp;
  udp.transport = Transport::Udp;
  CHECK(serializeOverhead(50, udp) == 167);
}

TEST_CASE("property: overhead strictly increasing in payload and in each layer")
{
  const StackProfile base;
  for (std::uint64_t p = 0; p < 2000; p += 7)
    CHECK(serializeOverhead(p + 1, base) > serializeOverhead(p, base));

  std::uint32_t StackProfile::*layers[] = {&StackProfile::alp, &StackProfile::mqtt, &StackProfile::tls,
                                           &StackProfile::quic, &StackProfile::ipv6, &StackProfile::phy};
  for (auto layer : layers) {
    StackProfile bigger = base;
    bigger.*layer += 1;
    CHECK(serializeOverhead(100, bigger) == serializeOverhead(100, base) + 1);
  }
  StackProfile udp;
  udp.transport = Transport::Udp;
  StackProfile udpBigger = udp;
  udpBigger.udp += 1;
  CHECK(serializeOverhead(100, udpBigger) > serializeOverhead(100, udp));
}

TEST_CASE("routing")
{
  const Topology t = Topology::build(treeSpec(2, 4));
  // dev0 is node 3, hanging off edge0 (node 1).
  const auto path = route(t, 3, 0);
  REQUIRE(path.size() == 2);
  CHECK(t.link(path[0]).name == "acc0");
  CHECK(t.link(path[1]).name == "up0");
  CHECK(route(t, 3, 3).empty());

  // dev0 -> dev1 crosses both edges through the core.
  CHECK(route(t, 3, 4).size() == 4);

  Topology down = t;
  down.setLinkUp(*down.findLink("acc0"), false);
  CHECK_THROWS_AS(route(down, 3, 0), Unreachable);

  RoutingTable table(t);
  CHECK(table.path(3, 4) == route(t, 3, 4));
}

TEST_CASE("routing ties go to the lowest next node")
{
  // dev (node 3) is wired to both edges; the path to the core leaves via edge0 (node 1).
  TopologySpec s = treeSpec(2, 1);
  LinkSpec extra;
  extra.name = "acc-alt";
  extra.a = 3;
  extra.b = 2;
  s.links.push_back(extra);
  const Topology t = Topology::build(s);
  const auto p = route(t, 3, 0);
  REQUIRE(p.size() == 2);
  CHECK(t.link(p[0]).other(3) == 1);
}

TEST_CASE("single frame timing")
{
  Harness h(treeSpec(2, 4));
  h.send(3, 1, 1000, SimTime{0});
  h.engine.runUntil(SimTime::max());
  REQUIRE(h.delivered.size() == 1);
  // 8000 bits at 1 Gb/s plus 5 us propagation
  CHECK(h.delivered[0].second == microseconds(13));
  CHECK(transmissionTime(1000, 1'000'000'000) == microseconds(8));
  CHECK(transmissionTime(1, 3) == SimTime{2'666'666'667});
}

TEST_CASE("certain loss drops without delivery")
{
  auto spec = treeSpec(2, 4);
  spec.links[2].lossProb = 1.0; // acc0
  Harness h(spec);
  for (int i = 0; i < 10; ++i)
    h.send(3, 1, 500, SimTime{static_cast<std::uint64_t>(i) * 1000});
  h.engine.runUntil(SimTime::max());
  CHECK(h.delivered.empty());
  REQUIRE(h.dropped.size() == 10);
  for (const auto& [f, cause] : h.dropped)
    CHECK(cause == DropCause::Loss);
  CHECK(h.net.inFlight() == 0);
}

TEST_CASE("drop-tail queue overflow")
{
  auto spec = treeSpec(2, 4);
  spec.links[2].queueCap = 2;
  Harness h(spec);
  for (int i = 0; i < 6; ++i)
    h.send(3, 1, 1000, SimTime{0});
  h.engine.runUntil(SimTime::max());
  std::size_t queueDrops = 0;
  for (const auto& [f, cause] : h.dropped)
    queueDrops += cause == DropCause::Queue;
  CHECK(queueDrops == h.dropped.size());
  CHECK(h.delivered.size() + queueDrops == 6);
  CHECK(queueDrops >= 3);
}

TEST_CASE("property: unloaded delay is exact")
{
  const auto spec = treeSpec(3, 9);
  const Topology topo = Topology::build(spec);
  auto rng = forkRng(5, "unloaded");
  for (int trial = 0; trial < 200; ++trial) {
    const NodeId src = static_cast<NodeId>(rng.below(spec.nodes.size()));
    NodeId dst = static_cast<NodeId>(rng.below(spec.nodes.size()));
    const std::uint64_t bytes = 1 + rng.below(9000);
    Harness h(spec);
    const SimTime t0 = SimTime{rng.below(1'000'000)};
    h.send(src, dst, bytes, t0);
    h.engine.runUntil(SimTime::max());
    REQUIRE(h.delivered.size() == 1);
    SimTime oracle;
    for (LinkId id : route(topo, src, dst)) {
      const Link& l = topo.link(id);
      const std::uint64_t bits = bytes * 8;
      oracle += SimTime{(bits * 1'000'000'000ULL + l.rateBps - 1) / l.rateBps} + l.propDelay;
    }
    CHECK(h.delivered[0].second - t0 == oracle);
  }
}

TEST_CASE("property: conservation with loss, overflow and faults")
{
  auto spec = treeSpec(2, 6);
  for (auto& l : spec.links) {
    l.lossProb = 0.05;
    l.queueCap = 8;
  }
  Harness h(spec, 77);
  auto rng = forkRng(77, "traffic");
  std::uint64_t injected = 0;
  for (int i = 0; i < 20000; ++i) {
    const NodeId src = 3 + static_cast<NodeId>(rng.below(6));
    const NodeId dst = static_cast<NodeId>(rng.below(9));
    h.send(src, dst, 100 + rng.below(1400), SimTime{rng.below(20'000'000)},
           kAllSlices[rng.below(kSliceCount)]);
    ++injected;
  }
  // Mid-run checks and a link outage.
  std::uint64_t checks = 0;
  h.engine.on(EventKind::MetricsFlush, [&](const Event&) {
    ++checks;
    CHECK(h.delivered.size() + h.dropped.size() + h.net.inFlight() == injected);
    for (std::uint32_t d = 0; d < h.net.topology().links().size() * 2; ++d)
      if (h.net.queueLength(d) > 0)
        CHECK(h.net.transmitting(d)); // work conservation
  });
  for (std::uint64_t t = 0; t < 25'000'000; t += 10'000)
    h.engine.schedule(SimTime{t}, EventKind::MetricsFlush);
  h.engine.on(EventKind::FaultStart, [&](const Event&) { h.net.failLink(0); });
  h.engine.on(EventKind::FaultEnd, [&](const Event&) { h.net.recoverLink(0); });
  h.engine.schedule(milliseconds(5), EventKind::FaultStart);
  h.engine.schedule(milliseconds(9), EventKind::FaultEnd);

  h.engine.runUntil(SimTime::max());
  CHECK(checks > 0);
  CHECK(h.net.inFlight() == 0);
  CHECK(h.delivered.size() + h.dropped.size() == injected);
  std::size_t byCause[3] = {0, 0, 0};
  for (const auto& [f, c] : h.dropped)
    ++byCause[static_cast<int>(c)];
  CHECK(byCause[0] > 0);
  CHECK(byCause[1] > 0);
  CHECK(byCause[2] > 0);
  for (const auto& [f, at] : h.delivered)
    CHECK(at >= f.createdAt);
}

TEST_CASE("failed link reroutes over a redundant path")
{
  // dev (node 3) reaches the core through edge0 (short) or edge1 (long uplink).
  TopologySpec s = treeSpec(2, 1);
  s.links[1].propDelay = microseconds(300);
  LinkSpec alt;
  alt.name = "acc-alt";
  alt.a = 3;
  alt.b = 2;
  alt.propDelay = microseconds(5);
  s.links.push_back(alt);
  Harness h(s);
  for (int i = 0; i < 20; ++i)
    h.send(3, 0, 200, milliseconds(static_cast<std::uint64_t>(i)));
  h.engine.on(EventKind::FaultStart, [&](const Event&) { h.net.failLink(0); }); // up0
  h.engine.schedule(microseconds(9500), EventKind::FaultStart);
  h.engine.runUntil(SimTime::max());
  CHECK(h.dropped.empty());
  REQUIRE(h.delivered.size() == 20);
  const SimTime before = h.delivered[0].second - h.delivered[0].first.createdAt;
  const SimTime after = h.delivered[19].second - h.delivered[19].first.createdAt;
  for (std::size_t i = 0; i < 20; ++i) {
    const SimTime d = h.delivered[i].second - h.delivered[i].first.createdAt;
    CHECK(d == (i < 10 ? before : after));
  }
  CHECK(after - before == microseconds(200));
}

TEST_CASE("single-link queue matches the M/M/1 sojourn at half load")
{
  // W = 1 / (mu - lambda) = 1 / 50k = 20 us
  const auto r = twinslice::testing::runSingleLinkQueue(50'000, 100'000, 1'000'000, 17);
  CHECK(r.dropped == 0);
  CHECK(r.delivered == 1'000'000);
  CHECK(r.meanSojournNs == doctest::Approx(20'000).epsilon(0.05));
}
