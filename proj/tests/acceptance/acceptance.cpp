// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "../support/harness.hpp"

#include "twinslice/cli/cli.hpp"
#include "twinslice/metrics/report.hpp"
#include "twinslice/net/network.hpp"
#include "twinslice/scenario/scenario.hpp"
#include "twinslice/simulation.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace twinslice;
using twinslice::testing::scenarioPath;
using Json = nlohmann::json;

namespace {

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  // Records a failed expectation; the first few are reported.
  void expect(bool ok, const std::string& what)
  {
    if (ok)
      return;
    if (pass)
      detail << "failed: ";
    else
      detail << "; ";
    detail << what;
    pass = false;
  }
};

struct CliRun
{
  int code = 0;
  std::string out;
  std::string err;
  double seconds = 0.0;
};

CliRun runCli(std::vector<std::string> args)
{
  args.insert(args.begin(), "twinslice");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  CliRun r;
  r.code = cli::runCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.out = out.str();
  r.err = err.str();
  return r;
}

const Json& sliceJson(const Json& report, const std::string& name)
{
  for (const auto& s : report.at("slices"))
    if (s.at("slice") == name)
      return s;
  throw std::runtime_error("slice " + name + " missing from report");
}

const FlowReport* findFlow(const RunReport& r, const std::string& name)
{
  for (const auto& f : r.flows)
    if (f.name == name)
      return &f;
  return nullptr;
}

const LinkSpec& linkBetween(const Scenario& s, const std::string& a, const std::string& b)
{
  auto node = [&](const std::string& n) {
    for (NodeId i = 0; i < s.topology.nodes.size(); ++i)
      if (s.topology.nodes[i].name == n)
        return i;
    throw std::runtime_error("no node " + n);
  };
  const NodeId x = node(a), y = node(b);
  for (const auto& l : s.topology.links)
    if ((l.a == x && l.b == y) || (l.a == y && l.b == x))
      return l;
  throw std::runtime_error("no link " + a + " - " + b);
}

std::uint64_t ceilDiv(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

std::string conservationErrors(const RunReport& r)
{
  std::ostringstream os;
  for (const auto& s : r.slices) {
    const auto& t = s.traffic;
    if (t.sent != t.delivered + t.droppedLoss + t.droppedQueue + t.droppedFault)
      os << toString(s.slice) << " sent " << t.sent << " != " << t.delivered << "+" << t.droppedLoss << "+"
         << t.droppedQueue << "+" << t.droppedFault << " ";
  }
  for (const auto& f : r.flows) {
    const auto& t = f.traffic;
    if (t.sent != t.delivered + t.dropped())
      os << "flow " << f.name << " ";
  }
  return os.str();
}

// 1. Determinism of the ward scenario through the CLI, and its runtime.
Outcome determinism()
{
  Outcome o;
  const auto a = runCli({"run", scenarioPath("ward.scn"), "--seed", "42"});
  const auto b = runCli({"run", scenarioPath("ward.scn"), "--seed", "42"});
  o.expect(a.code == b.code, "exit codes differ");
  o.expect(!a.out.empty() && a.out == b.out, "reports differ");
  o.expect(a.seconds < 10.0 && b.seconds < 10.0, "runtime over 10 s");
  o.detail << (o.pass ? "" : " | ") << a.out.size() << " identical bytes, " << a.seconds << " s and " << b.seconds
           << " s";
  return o;
}

// 2. Per-command E2E delay equals the hand-computed unloaded value.
Outcome unloadedExactness()
{
  Outcome o;
  const Scenario sc = loadScenario(scenarioPath("surgery.scn"));
  const auto& loop = std::get<SurgeryLoop>(sc.workloads.at(0));

  // Header bytes per layer, QUIC transport.
  const StackProfile& st = sc.stack;
  o.expect(st.transport == Transport::Quic && !st.fixedSetupLatency, "surgery stack is not QUIC with derived setup");
  const std::uint64_t frame = loop.cmdBytes + st.alp + st.mqtt + st.tls + st.quic + st.ipv6 + st.phy;
  const std::pair<const char*, const char*> path[] = {
    {"console", "hub-edge"}, {"hub-edge", "cloud"}, {"cloud", "theatre-edge"}, {"theatre-edge", "robot"}};
  std::uint64_t oneWay = 0;
  for (const auto& [a, b] : path) {
    const LinkSpec& l = linkBetween(sc, a, b);
    o.expect(l.lossProb == 0.0, std::string("loss on ") + a + "-" + b);
    oneWay += ceilDiv(frame * 8 * 1'000'000'000ULL, l.rateBps) + l.propDelay.ticks;
  }
  const std::uint64_t setup = (st.tlsHandshakeRtts + st.quicHandshakeRtts) * 2 * oneWay;
  const std::uint64_t oracle = oneWay + setup;
  o.expect(oracle == 555'380, "oracle disagrees with the scenario's annotated 555380 ns");

  Simulation sim(sc);
  const RunReport r = sim.run();
  const FlowReport* cmd = findFlow(r, "laparoscopy/cmd");
  o.expect(cmd != nullptr, "command flow missing");
  if (cmd) {
    o.expect(cmd->traffic.sent == 500'000, "expected 500000 commands");
    o.expect(cmd->delay.samples == cmd->traffic.sent, "not every command delivered");
    o.expect(cmd->delay.minNs == oracle, "min delay " + std::to_string(cmd->delay.minNs));
    o.expect(cmd->delay.maxNs == oracle, "max delay " + std::to_string(cmd->delay.maxNs));
    o.detail << (o.pass ? "" : " | ") << cmd->delay.samples << " commands, each " << cmd->delay.minNs
             << " ns = oracle " << oracle << " ns";
  }
  return o;
}

// 3. Single-link M/M/1 mean sojourn against 1 / (mu - lambda).
Outcome queueingOracle()
{
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = testing::runSingleLinkQueue(80'000, 100'000, 1'000'000, 2024);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double w = 1e9 / (100'000.0 - 80'000.0);
  const double err = std::abs(r.meanSojournNs - w) / w;
  o.expect(r.delivered == 1'000'000, "not all frames delivered");
  o.expect(err <= 0.05, "relative error above 5%");
  o.expect(secs < 60.0, "runtime over 60 s");
  o.detail << (o.pass ? "" : " | ") << "mean sojourn " << r.meanSojournNs << " ns vs " << w << " ns (error "
           << err * 100 << "%) over " << r.delivered << " frames in " << secs << " s";
  return o;
}

// 4. ERLLC desk-scale contract and its forced violation.
Outcome erllcContract()
{
  Outcome o;
  const auto near = runCli({"run", scenarioPath("surgery.scn")});
  o.expect(near.code == 0, "surgery exit " + std::to_string(near.code));
  if (near.code == 0 || near.code == 1) {
    const Json j = Json::parse(near.out);
    const Json& e = sliceJson(j, "ERLLC");
    const auto p99 = e.at("delay").at("p99_ns").get<std::uint64_t>();
    const auto sent = e.at("traffic").at("sent").get<std::uint64_t>();
    const auto delivered = e.at("traffic").at("delivered").get<std::uint64_t>();
    o.expect(e.at("verdict").at("status") == "met", "verdict not met");
    o.expect(p99 <= 1'000'000, "p99 above 1 ms");
    o.expect(sent >= 1'000'000, "fewer than 1e6 ERLLC frames");
    o.expect(sent == delivered, "ERLLC frames lost");
    o.detail << (o.pass ? "" : " | ") << "surgery: p99 " << p99 << " ns, " << sent << " frames, loss "
             << (sent - delivered) << ", met, exit " << near.code;
  }
  const auto far = runCli({"run", scenarioPath("surgery_far.scn")});
  o.expect(far.code == 1, "surgery_far exit " + std::to_string(far.code));
  if (far.code == 0 || far.code == 1) {
    const Json j = Json::parse(far.out);
    const Json& e = sliceJson(j, "ERLLC");
    const auto verdict = e.at("verdict").at("status").get<std::string>();
    o.expect(verdict == "violated(delay)", "surgery_far verdict " + verdict);
    o.detail << "; surgery_far: p99 " << e.at("delay").at("p99_ns").get<std::uint64_t>() << " ns, " << verdict
             << ", exit " << far.code;
  }
  return o;
}

double referenceReduce(const Reducer& r, const std::vector<double>& v)
{
  switch (r.kind) {
  case ReducerKind::Max: return *std::max_element(v.begin(), v.end());
  case ReducerKind::Min: return *std::min_element(v.begin(), v.end());
  case ReducerKind::CountOver:
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x > r.threshold; }));
  case ReducerKind::Sum:
  case ReducerKind::Mean: {
    long double s = 0;
    for (double x : v)
      s += x;
    return static_cast<double>(r.kind == ReducerKind::Sum ? s : s / v.size());
  }
  }
  return 0;
}

// 5. Quiescent hierarchy consistency on the ward scenario.
Outcome hierarchyConsistency()
{
  Outcome o;
  Simulation sim(loadScenario(scenarioPath("ward.scn")));
  sim.run();
  const auto& twins = sim.twins();
  std::vector<TwinId> globalEdges;
  for (const auto& t : twins)
    if (t.level() == TwinLevel::GlobalEdge)
      globalEdges.push_back(t.id());

  std::size_t checked = 0;
  for (const auto& parent : twins) {
    if (parent.level() == TwinLevel::IndividualEdge)
      continue;
    if (parent.level() == TwinLevel::GlobalCore) {
      auto kids = parent.children;
      std::sort(kids.begin(), kids.end());
      o.expect(kids == globalEdges, parent.name() + " children are not exactly the global_edge twins");
    }
    for (const auto& [metric, reducer] : parent.policy) {
      std::vector<double> values;
      for (TwinId c : parent.children) {
        const auto& child = twins[c];
        if (parent.level() == TwinLevel::GlobalEdge) {
          o.expect(child.level() == TwinLevel::IndividualEdge && child.host() == parent.host(),
                   child.name() + " is not an individual twin on " + parent.name() + "'s host");
        }
        if (auto it = child.state().find(metric); it != child.state().end())
          values.push_back(it->second.value);
      }
      const auto it = parent.state().find(metric);
      if (values.empty()) {
        o.expect(it == parent.state().end(), parent.name() + "." + metric + " has a value but no contributors");
        continue;
      }
      if (it == parent.state().end()) {
        o.expect(false, parent.name() + "." + metric + " missing");
        continue;
      }
      const double expect = referenceReduce(reducer, values);
      const double got = it->second.value;
      const bool exactKind = reducer.kind != ReducerKind::Mean && reducer.kind != ReducerKind::Sum;
      const bool ok = exactKind ? got == expect
                                : std::abs(got - expect) <= 1e-12 * std::max(1.0, std::abs(expect));
      o.expect(ok, parent.name() + "." + metric + " = " + std::to_string(got) + ", reducer gives " +
                     std::to_string(expect));
      ++checked;
    }
  }
  o.expect(checked > 0, "nothing aggregated");
  o.detail << (o.pass ? "" : " | ") << checked << " aggregated metrics over " << twins.size()
           << " twins equal their reducers";
  return o;
}

// 6. Individual-twin staleness bound on the loss-free ward scenario.
Outcome stalenessBound()
{
  Outcome o;
  const Scenario sc = loadScenario(scenarioPath("ward.scn"));
  o.expect(sc.faults.empty(), "ward has faults");
  for (const auto& l : sc.topology.links)
    o.expect(l.lossProb == 0.0, "lossy link " + l.name);

  Simulation sim(sc);
  const RunReport r = sim.run();
  std::uint64_t period = 0, worst = 0, pathDelay = 0;
  std::size_t individuals = 0;
  for (const auto& d : sc.twins)
    if (d.level == TwinLevel::IndividualEdge) {
      period = std::max(period, d.syncPeriod.ticks);
      o.expect(d.syncPeriod == milliseconds(100), d.name + " does not sync every 100 ms");
    }
  for (const auto& t : r.twins) {
    if (t.level != TwinLevel::IndividualEdge)
      continue;
    ++individuals;
    o.expect(t.staleness.samples > 0, t.name + " has no staleness samples");
    worst = std::max(worst, t.staleness.maxNs);
    const FlowReport* f = findFlow(r, "sync/" + t.name);
    o.expect(f != nullptr, "no sync flow for " + t.name);
    if (f)
      pathDelay = std::max(pathDelay, f->delay.maxNs);
  }
  const std::uint64_t bound = period + pathDelay;
  o.expect(worst <= bound, "staleness exceeds bound");
  o.detail << (o.pass ? "" : " | ") << individuals << " individual twins, max staleness " << worst
           << " ns <= " << period << " + " << pathDelay << " = " << bound << " ns";
  return o;
}

// 7. Exact per-slice and per-flow conservation in every bundled scenario.
Outcome conservation()
{
  Outcome o;
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(TWINSLICE_SCENARIO_DIR))
    if (e.path().extension() == ".scn")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    Simulation sim(loadScenario(file));
    const RunReport r = sim.run();
    const std::string bad = conservationErrors(r);
    o.expect(bad.empty(), std::filesystem::path(file).filename().string() + ": " + bad);
    o.expect(sim.network().inFlight() == 0, file + " left frames in flight");
    std::uint64_t sent = 0;
    for (const auto& s : r.slices)
      sent += s.traffic.sent;
    o.detail << (o.pass ? "" : " | ") << std::filesystem::path(file).filename().string() << " " << sent << " frames; ";
  }
  return o;
}

// 8. Slice scheduler on a saturated link: 8:1 FeMBB:ELPC and ERLLC precedence.
Outcome schedulerFairness()
{
  Outcome o;
  TopologySpec spec;
  spec.nodes = {{"core", NodeKind::CoreNode}, {"edge", NodeKind::EdgeNode}, {"dev", NodeKind::Device}};
  LinkSpec up;
  up.a = 1;
  up.b = 0;
  LinkSpec access;
  access.a = 2;
  access.b = 1;
  access.rateBps = 1'000'000'000ULL;
  access.queueCap = 1'000'000;
  spec.links = {up, access};

  Engine engine;
  Network net(engine, Topology::build(spec), forkRng(1, "network"));
  constexpr std::uint64_t kBacklog = 100'000;
  constexpr std::uint64_t kCounted = 100'000;
  constexpr std::uint64_t kFrameBytes = 1000; // 8 us per frame
  std::map<SliceClass, std::uint64_t> served;
  std::uint64_t starts = 0;
  std::uint64_t erllcPending = 0, erllcInjected = 0, overtaken = 0;
  net.setCallbacks({[](Frame&&) {}, [&](Frame&&, DropCause) { o.expect(false, "drop on saturated link"); },
                    [&](std::uint32_t, const Frame& f) {
                      if (f.slice == SliceClass::ERLLC) {
                        --erllcPending;
                        return;
                      }
                      if (erllcPending > 0)
                        ++overtaken;
                      if (starts++ < kCounted)
                        ++served[f.slice];
                    }});
  auto frame = [&](SliceClass s) {
    Frame f;
    f.src = 2;
    f.dst = 1;
    f.slice = s;
    f.totalBytes = kFrameBytes;
    f.createdAt = engine.now();
    return f;
  };
  for (std::uint64_t i = 0; i < kBacklog; ++i) {
    net.inject(frame(SliceClass::FeMBB), SimTime{0});
    net.inject(frame(SliceClass::ELPC), SimTime{0});
  }
  // Bursts of ERLLC at instants that fall mid-transmission.
  engine.on(EventKind::TrafficArrival, [&](const Event&) {
    for (int k = 0; k < 5; ++k) {
      ++erllcPending;
      ++erllcInjected;
      net.inject(frame(SliceClass::ERLLC), engine.now());
    }
  });
  for (std::uint64_t b = 1; b <= 20; ++b)
    engine.schedule(SimTime{b * 40'000'000ULL + 3'000}, EventKind::TrafficArrival);
  engine.runUntil(SimTime::max());

  const double ratio = static_cast<double>(served[SliceClass::FeMBB]) / served[SliceClass::ELPC];
  o.expect(std::abs(ratio - 8.0) <= 0.8, "ratio " + std::to_string(ratio));
  o.expect(overtaken == 0, std::to_string(overtaken) + " frames started while ERLLC waited");
  o.expect(erllcPending == 0, "ERLLC frames never transmitted");
  o.detail << (o.pass ? "" : " | ") << "FeMBB " << served[SliceClass::FeMBB] << " : ELPC "
           << served[SliceClass::ELPC] << " = " << ratio << " over " << kCounted << " frames; " << erllcInjected
           << " mid-test ERLLC frames all served first";
  return o;
}

// 9. Ambulance corridor with a 1 s edge failure, plus the single-path variant.
Outcome faultResilience()
{
  Outcome o;
  const Scenario sc = loadScenario(scenarioPath("ambulance.scn"));
  const auto& amb = std::get<AmbulanceRun>(sc.workloads.at(0));
  const SimTime end = amb.duration ? std::min(sc.run.tEnd, amb.start + *amb.duration) : sc.run.tEnd;
  const std::uint64_t generated = (end - amb.start).ticks * amb.telemetryRateHz / 1'000'000'000ULL;

  Simulation sim(sc);
  const RunReport r = sim.run();
  const FlowReport* f = findFlow(r, amb.name);
  o.expect(f != nullptr, "telemetry flow missing");
  std::uint64_t faultDrops = 0;
  for (const auto& s : r.slices)
    faultDrops += s.traffic.droppedFault;
  o.expect(!r.faults.empty() && r.faults[0].applied, "fault not applied");
  o.expect(faultDrops == 0, "fault drops in the redundant scenario");
  if (f) {
    o.expect(f->traffic.sent == generated, "sent " + std::to_string(f->traffic.sent));
    o.expect(f->traffic.delivered == generated, "delivered " + std::to_string(f->traffic.delivered));
    const std::uint64_t unloaded = f->unloadedDelayNs + f->setupLatencyNs;
    o.expect(f->delay.maxNs > unloaded, "no added delay recorded");
    o.detail << (o.pass ? "" : " | ") << "telemetry " << f->traffic.delivered << "/" << generated
             << " delivered, max delay " << f->delay.maxNs << " ns vs unloaded " << unloaded << " ns";
  }
  o.expect(!r.mobility.empty() && r.mobility[0].deferred >= 1 && r.mobility[0].framesBuffered > 0,
           "no deferred handover with buffering");
  if (!r.mobility.empty())
    o.detail << ", " << r.mobility[0].deferred << " deferred handover, " << r.mobility[0].framesBuffered
             << " frames buffered";

  Simulation single(loadScenario(scenarioPath("ambulance_single.scn")));
  const RunReport rs = single.run();
  const FlowReport* fs = findFlow(rs, amb.name);
  o.expect(fs && fs->traffic.droppedFault > 0, "single-path variant shows no fault drops");
  if (fs)
    o.detail << "; single-path: " << fs->traffic.droppedFault << " dropped_fault";
  return o;
}

// 10. 10 000 wearable twins for 60 s: runtime, determinism, conservation.
Outcome scaleSmoke()
{
  Outcome o;
  const Scenario sc = loadScenario(scenarioPath("city_wearables.scn"));
  const auto individuals = std::count_if(sc.twins.begin(), sc.twins.end(),
                                         [](const TwinDef& t) { return t.level == TwinLevel::IndividualEdge; });
  o.expect(individuals == 10'000, "expected 10000 wearable twins, found " + std::to_string(individuals));
  o.expect(sc.run.tEnd == seconds(60), "horizon is not 60 s");

  const auto a = runCli({"run", scenarioPath("city_wearables.scn")});
  const auto b = runCli({"run", scenarioPath("city_wearables.scn")});
  o.expect(a.seconds < 120.0 && b.seconds < 120.0, "runtime over 120 s");
  o.expect(a.code == b.code && !a.out.empty() && a.out == b.out, "reruns differ");
  if (a.code == 0 || a.code == 1) {
    const Json j = Json::parse(a.out);
    for (const auto& s : j.at("slices")) {
      const auto& t = s.at("traffic");
      const auto sent = t.at("sent").get<std::uint64_t>();
      const auto accounted = t.at("delivered").get<std::uint64_t>() + t.at("dropped_loss").get<std::uint64_t>() +
                             t.at("dropped_queue").get<std::uint64_t>() + t.at("dropped_fault").get<std::uint64_t>();
      o.expect(sent == accounted, "conservation fails for " + s.at("slice").get<std::string>());
    }
    o.detail << (o.pass ? "" : " | ") << individuals << " twins, " << a.seconds << " s and " << b.seconds
             << " s, identical " << a.out.size() << "-byte reports, "
             << sliceJson(j, "umMTC").at("traffic").at("sent").get<std::uint64_t>() << " umMTC frames conserved";
  }
  return o;
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    {"determinism", determinism},
    {"unloaded-delay exactness", unloadedExactness},
    {"queueing-oracle agreement", queueingOracle},
    {"ERLLC desk-scale contract", erllcContract},
    {"hierarchy consistency", hierarchyConsistency},
    {"staleness bound", stalenessBound},
    {"conservation", conservation},
    {"scheduler fairness", schedulerFairness},
    {"fault resilience", faultResilience},
    {"scale smoke", scaleSmoke},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
