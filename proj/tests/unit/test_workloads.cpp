#include "doctest.h"

#include "../support/harness.hpp"

#include "twinslice/error.hpp"
#include "twinslice/scenario/scenario.hpp"
#include "twinslice/simulation.hpp"
#include "twinslice/workloads/faults.hpp"
#include "twinslice/workloads/mobility.hpp"
#include "twinslice/workloads/workload.hpp"

using namespace twinslice;
using twinslice::testing::scenarioPath;
using twinslice::testing::treeSpec;

TEST_CASE("telemedicine stream is periodic at bitrate / frame size")
{
  TelemedicineStream s;
  s.bitrateBps = 8'000'000;
  s.frameBytes = 10'000;
  auto rng = forkRng(1, "workload/video");
  const auto ev = generateEvents(s, rng, seconds(1));
  REQUIRE(ev.size() == 100);
  for (std::size_t i = 0; i < ev.size(); ++i)
    CHECK(ev[i].at == milliseconds(10 * i));
  CHECK((sliceOf(WorkloadSpec{s}) == SliceClass::FeMBB));
}

TEST_CASE("wearable fleet emits one frame per device per period")
{
  WearableFleet w;
  for (NodeId d = 0; d < 1000; ++d)
    w.devices.push_back(d);
  w.period = seconds(1);
  auto rng = forkRng(1, "workload/fleet");
  CHECK(generateEvents(w, rng, seconds(10)).size() == 10'000);
  CHECK((sliceOf(WorkloadSpec{w}) == SliceClass::umMTC));
}

TEST_CASE("implant stops when the battery is spent")
{
  ImplantBeacon b;
  b.period = seconds(1);
  b.energyPerTx = 10'000'000;  // 10 uJ
  b.battery = 1'000'000'000;   // 1 mJ
  CHECK(affordableTransmissions(b) == 100);
  auto rng = forkRng(1, "workload/implant");
  CHECK(generateEvents(b, rng, seconds(1000)).size() == 100);
  CHECK(generateEvents(b, rng, seconds(50)).size() == 50);
  CHECK((sliceOf(WorkloadSpec{b}) == SliceClass::ELPC));
}

TEST_CASE("surgery loop and ambulance map to their slices")
{
  CHECK((sliceOf(WorkloadSpec{SurgeryLoop{}}) == SliceClass::ERLLC));
  CHECK((sliceOf(WorkloadSpec{AmbulanceRun{}}) == SliceClass::LDHMC));
  SurgeryLoop s;
  s.cmdRateHz = 1000;
  auto rng = forkRng(1, "workload/surgery");
  CHECK(generateEvents(s, rng, seconds(2)).size() == 2000);
}

TEST_CASE("start and duration clip the emission window")
{
  TelemedicineStream s;
  s.start = seconds(2);
  s.duration = seconds(3);
  auto rng = forkRng(1, "w");
  const auto ev = generateEvents(s, rng, seconds(10));
  CHECK(ev.size() == 300);
  CHECK(ev.front().at == seconds(2));
  CHECK(ev.back().at < seconds(5));
}

TEST_CASE("property: generators are deterministic per seed")
{
  WearableFleet w;
  w.devices = {1, 2, 3, 4, 5};
  w.period = milliseconds(250);
  w.poisson = true;
  auto a = forkRng(5, "workload/burst");
  auto b = forkRng(5, "workload/burst");
  auto c = forkRng(6, "workload/burst");
  const auto ea = generateEvents(w, a, seconds(30));
  CHECK(ea == generateEvents(w, b, seconds(30)));
  CHECK(ea != generateEvents(w, c, seconds(30)));
  // Poisson mean gap: 5 devices at 4 Hz over 30 s.
  CHECK(static_cast<double>(ea.size()) == doctest::Approx(600).epsilon(0.15));
  CHECK(std::is_sorted(ea.begin(), ea.end()));
}

TEST_CASE("handover interval")
{
  CHECK(handoverInterval(120.0, 1000.0) == seconds(30));
  CHECK(handoverInterval(1000.0, 1000.0) == milliseconds(3600));
}

TEST_CASE("handover buffers frames during the gap")
{
  // dev (node 3) is wired to both edges and starts on edge0.
  TopologySpec s = treeSpec(2, 1);
  LinkSpec alt;
  alt.name = "acc-alt";
  alt.a = 3;
  alt.b = 2;
  s.links.push_back(alt);
  Engine engine;
  Network net(engine, Topology::build(s), forkRng(1, "network"));
  std::vector<SimTime> arrivals;
  net.setCallbacks({[&](Frame&&) { arrivals.push_back(engine.now()); }, [](Frame&&, DropCause) { FAIL("drop"); }, {}});
  MobilityManager mm(engine, net);
  AmbulanceRun run;
  run.device = 3;
  run.edgeSequence = {1, 2};
  run.speedKmh = 120;
  run.cellSpanM = 1000;
  run.handoverGap = milliseconds(10);
  const auto m = mm.add(run, seconds(60));

  // Telemetry every 100 ms, one emission at 30.005 s falls inside the gap.
  engine.on(EventKind::TrafficArrival, [&](const Event&) {
    Frame f;
    f.src = 3;
    f.dst = 0;
    f.totalBytes = 500;
    f.createdAt = engine.now();
    f.slice = SliceClass::LDHMC;
    net.inject(std::move(f), engine.now());
  });
  for (std::uint64_t t = 0; t < 60'000; t += 100)
    engine.schedule(milliseconds(t) + microseconds(5000), EventKind::TrafficArrival);
  engine.runUntil(SimTime::max());

  CHECK(arrivals.size() == 600);
  const auto& mob = mm.mobiles()[m];
  CHECK(mob.handovers == 1);
  CHECK(net.framesBuffered(3) == 1);
  CHECK(mob.current == 1);
  CHECK(net.topology().node(3).attachedTo == 2);
}

TEST_CASE("handover skips a failed target")
{
  TopologySpec s = treeSpec(3, 1);
  for (NodeId e : {2u, 3u}) {
    LinkSpec l;
    l.a = 4;
    l.b = e;
    l.name = "acc-e" + std::to_string(e);
    s.links.push_back(l);
  }
  Engine engine;
  Network net(engine, Topology::build(s), forkRng(1, "network"));
  MobilityManager mm(engine, net);
  AmbulanceRun run;
  run.device = 4;
  run.edgeSequence = {1, 2, 3};
  run.handoverGap = milliseconds(10);
  mm.add(run, seconds(100));
  net.failNode(2);
  engine.runUntil(seconds(31));
  const auto& mob = mm.mobiles()[0];
  CHECK(mob.deferred == 1);
  CHECK(net.topology().node(4).attachedTo == 3);
  CHECK(mob.maxGap == milliseconds(20));
}

TEST_CASE("fault injector validates its input")
{
  Engine engine;
  Network net(engine, Topology::build(treeSpec(2, 4)), forkRng(1, "network"));
  FaultInjector fi(engine, net);
  FaultSpec bad;
  bad.kind = FaultSpec::Target::Link;
  bad.id = 99;
  bad.tFail = seconds(1);
  bad.tRecover = seconds(2);
  CHECK_THROWS_AS(fi.inject(bad), UnknownTarget);
  FaultSpec backwards;
  backwards.id = 0;
  backwards.tFail = seconds(2);
  backwards.tRecover = seconds(2);
  CHECK_THROWS_AS(fi.inject(backwards), Error);

  FaultSpec ok;
  ok.id = 0;
  ok.targetName = "up0";
  ok.tFail = seconds(1);
  ok.tRecover = seconds(2);
  fi.inject(ok);
  engine.runUntil(milliseconds(1500));
  CHECK_FALSE(net.topology().link(0).up);
  engine.runUntil(seconds(3));
  CHECK(net.topology().link(0).up);
  const auto tl = fi.timeline();
  REQUIRE(tl.size() == 1);
  CHECK(tl[0].applied);
  CHECK(tl[0].failedAtNs == 1'000'000'000);
}

TEST_CASE("single-path outage drops about rate x outage frames")
{
  Simulation sim(loadScenario(scenarioPath("ambulance_single.scn")));
  const RunReport r = sim.run();
  bool found = false;
  for (const auto& f : r.flows) {
    if (f.name != "run")
      continue;
    found = true;
    // 10 Hz telemetry, 1 s outage.
    CHECK(f.traffic.droppedFault >= 9);
    CHECK(f.traffic.droppedFault <= 11);
    CHECK(f.traffic.droppedLoss == 0);
    CHECK(f.traffic.droppedQueue == 0);
    CHECK(f.traffic.sent == f.traffic.delivered + f.traffic.dropped());
  }
  CHECK(found);
}

TEST_CASE("handover with a failed target keeps every frame")
{
  Simulation sim(loadScenario(scenarioPath("ambulance.scn")));
  const RunReport r = sim.run();
  REQUIRE(r.mobility.size() == 1);
  const auto& m = r.mobility[0];
  // At most one 100 ms telemetry frame falls in each 10 ms gap.
  CHECK(m.framesBuffered <= m.handovers + m.deferred);
  CHECK(m.deferred == 1);
  for (const auto& f : r.flows)
    if (f.name == "run") {
      CHECK(f.traffic.sent == 1200);
      CHECK(f.traffic.delivered == 1200);
    }
}

TEST_CASE("property: energy ledger is exact")
{
  Simulation sim(loadScenario(scenarioPath("ward.scn")));
  const RunReport r = sim.run();
  REQUIRE_FALSE(r.energy.empty());
  for (const auto& e : r.energy) {
    CHECK(e.consumedPj == e.transmissions * e.energyPerTxPj);
    CHECK(e.consumedPj <= e.batteryPj);
  }
}
