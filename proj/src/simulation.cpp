#include "twinslice/simulation.hpp"
#include "twinslice/error.hpp"

#include <algorithm>
#include <cmath>

namespace twinslice {

namespace {

constexpr std::uint64_t kNsPerSecond = 1'000'000'000ULL;

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Bits per second carried by `frameBytes` frames sent every `periodNs`.
std::uint64_t
periodicDemand(std::uint64_t frameBytes, std::uint64_t periodNum, std::uint64_t periodDen)
{
  if (periodNum == 0)
    return 0;
  const auto bits = static_cast<unsigned __int128>(frameBytes) * 8 * kNsPerSecond * periodDen;
  return static_cast<std::uint64_t>((bits + periodNum - 1) / periodNum);
}

NodeId
accessEdge(const Topology& topo, NodeId device)
{
  for (LinkId l : topo.adjacent(device)) {
    const NodeId peer = topo.link(l).other(device);
    if (topo.node(peer).kind == NodeKind::EdgeNode)
      return peer;
  }
  throw TopologyInvalid("device '" + topo.node(device).name + "' has no edge link");
}

double
seconds(SimTime t)
{
  return static_cast<double>(t.ticks) / static_cast<double>(kNsPerSecond);
}

} // namespace

Simulation::Simulation(const Scenario& scenario, RunOverrides overrides)
  : m_scenario(scenario)
  , m_seed(overrides.seed.value_or(scenario.run.masterSeed))
  , m_tEnd(overrides.tEnd.value_or(scenario.run.tEnd))
{
  m_network = std::make_unique<Network>(m_engine, Topology::build(m_scenario.topology), forkRng(m_seed, "network"));
  m_network->setCallbacks(Network::Callbacks{
    [this](Frame&& f) { onDelivered(std::move(f)); },
    [this](Frame&& f, DropCause c) { onDropped(std::move(f), c); },
    {},
  });
  m_mobility = std::make_unique<MobilityManager>(m_engine, *m_network);
  for (const auto& w : m_scenario.workloads)
    if (const auto* run = std::get_if<AmbulanceRun>(&w))
      m_mobility->add(*run, m_tEnd);

  m_admission = std::make_unique<AdmissionController>(m_network->topology(), m_scenario.stack, m_scenario.admission);

  m_engine.on(EventKind::TrafficArrival, [this](const Event& e) { onTrafficArrival(e); });
  m_engine.on(EventKind::SyncDue, [this](const Event& e) { onSyncDue(e); });
  m_engine.on(EventKind::AggregationDue, [this](const Event& e) { onAggregationDue(e); });
  m_engine.on(EventKind::MetricsFlush, [this](const Event& e) { onMetricsFlush(e); });

  setUpWorkloads();
  setUpTwins();
  setUpFaults();

  const SimTime flush = m_scenario.run.metricsPeriod;
  if (flush.ticks > 0)
    for (SimTime t = flush; t <= m_tEnd; t = t + flush)
      m_engine.schedule(t, EventKind::MetricsFlush, FlushRec{});
}

Simulation::~Simulation() = default;

FlowId
Simulation::addFlow(Flow flow)
{
  flow.id = static_cast<FlowId>(m_flows.size());
  flow.frameBytes = serializeOverhead(flow.payloadBytes, m_scenario.stack);
  auto decision = m_admission->admit(flow, m_scenario.contracts[index(flow.slice)]);
  flow.admitted = decision.accepted;
  flow.unloadedDelay = decision.unloadedDelay;
  flow.setupLatency = decision.setupLatency;
  const bool sending = decision.accepted || m_scenario.admission.mode == AdmissionConfig::Mode::Observe;
  m_flows.push_back(std::move(flow));
  m_decisions.push_back(std::move(decision));
  m_sending.push_back(sending);
  m_surgeryByCmdFlow.push_back(-1);
  m_surgeryByAckFlow.push_back(-1);
  m_metrics.addFlow();
  return m_flows.back().id;
}

void
Simulation::setUpWorkloads()
{
  const auto& topo = m_network->topology();
  for (std::uint32_t wi = 0; wi < m_scenario.workloads.size(); ++wi) {
    const auto& spec = m_scenario.workloads[wi];
    const SimTime start = activeStart(spec);
    const SimTime end = activeEnd(spec, m_tEnd);
    const SliceClass slice = sliceOf(spec);
    const std::string& name = nameOf(spec);

    auto base = [&](std::string flowName, NodeId src, NodeId dst, std::uint64_t payload) {
      Flow f;
      f.name = std::move(flowName);
      f.slice = slice;
      f.src = src;
      f.dst = dst;
      f.payloadBytes = payload;
      f.start = start;
      f.end = end;
      f.frameBytes = serializeOverhead(payload, m_scenario.stack);
      return f;
    };

    std::vector<FlowId> perSource;
    std::visit(Overloaded{
                 [&](const TelemedicineStream& w) {
                   Flow f = base(name, w.src, w.dst, w.frameBytes);
                   f.demandRateBps = periodicDemand(f.frameBytes, w.frameBytes * 8 * kNsPerSecond, w.bitrateBps);
                   perSource.push_back(addFlow(std::move(f)));
                 },
                 [&](const SurgeryLoop& w) {
                   Flow cmd = base(name + "/cmd", w.console, w.robot, w.cmdBytes);
                   cmd.demandRateBps = periodicDemand(cmd.frameBytes, kNsPerSecond, w.cmdRateHz);
                   Flow ack = base(name + "/ack", w.robot, w.console, w.ackBytes);
                   ack.role = FlowRole::Acknowledgment;
                   ack.demandRateBps = periodicDemand(ack.frameBytes, kNsPerSecond, w.cmdRateHz);
                   SurgeryState st;
                   st.workload = wi;
                   st.cmdFlow = addFlow(std::move(cmd));
                   st.ackFlow = addFlow(std::move(ack));
                   const auto idx = static_cast<std::int32_t>(m_surgery.size());
                   m_surgeryByCmdFlow[st.cmdFlow] = idx;
                   m_surgeryByAckFlow[st.ackFlow] = idx;
                   perSource.push_back(st.cmdFlow);
                   m_surgery.push_back(std::move(st));
                 },
                 [&](const AmbulanceRun& w) {
                   Flow f = base(name, w.device, w.dst, w.payloadBytes);
                   f.demandRateBps = periodicDemand(f.frameBytes, kNsPerSecond, w.telemetryRateHz);
                   perSource.push_back(addFlow(std::move(f)));
                 },
                 [&](const WearableFleet& w) {
                   for (NodeId d : w.devices) {
                     const NodeId dst = w.dst == kNoNode ? accessEdge(topo, d) : w.dst;
                     Flow f = base(name + "/" + topo.node(d).name, d, dst, w.payloadBytes);
                     f.demandRateBps = periodicDemand(f.frameBytes, w.period.ticks, 1);
                     perSource.push_back(addFlow(std::move(f)));
                   }
                 },
                 [&](const ImplantBeacon& w) {
                   Flow f = base(name, w.device, w.dst, w.payloadBytes);
                   f.demandRateBps = periodicDemand(f.frameBytes, w.period.ticks, 1);
                   perSource.push_back(addFlow(std::move(f)));
                 },
               },
               spec);

    RngStream rng = forkRng(m_seed, "workload/" + name);
    auto generators = TrafficSource::forWorkload(spec, rng, m_tEnd);
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const auto idx = static_cast<std::uint32_t>(m_sources.size());
      m_sources.push_back(Source{std::move(generators[i]), wi, perSource.at(i)});
      if (auto t = m_sources.back().generator.next())
        m_engine.schedule(*t, EventKind::TrafficArrival, TrafficArrivalRec{idx});
    }
  }
}

void
Simulation::setUpTwins()
{
  const auto& defs = m_scenario.twins;
  m_twins.reserve(defs.size());
  m_twinRt.resize(defs.size());
  for (TwinId id = 0; id < defs.size(); ++id) {
    const auto& d = defs[id];
    Twin t(id, d.name, d.level, d.host);
    t.slice = d.slice;
    t.syncPeriod = d.syncPeriod;
    t.aggregationPeriod = d.aggregationPeriod;
    t.policy = d.policy;
    t.alerts = d.alerts;
    t.children.assign(d.children.begin(), d.children.end());
    if (d.parent)
      t.parent = *d.parent;
    m_twins.push_back(std::move(t));
    if (d.level == TwinLevel::GlobalCore && !m_root)
      m_root = id;
  }

  auto syncFlow = [&](const Twin& t, NodeId src, NodeId dst, std::size_t metrics) {
    Flow f;
    f.name = "sync/" + t.name();
    f.slice = t.slice;
    f.role = FlowRole::TwinSync;
    f.src = src;
    f.dst = dst;
    f.payloadBytes = syncPayloadBytes(metrics);
    f.frameBytes = serializeOverhead(f.payloadBytes, m_scenario.stack);
    f.demandRateBps = periodicDemand(f.frameBytes, t.syncPeriod.ticks, 1);
    f.end = m_tEnd;
    return addFlow(std::move(f));
  };

  for (TwinId id = 0; id < defs.size(); ++id) {
    const auto& d = defs[id];
    const Twin& t = m_twins[id];
    if (d.level == TwinLevel::IndividualEdge)
      m_twinRt[id].syncFlow = syncFlow(t, d.entity, d.host, d.metrics.size());
    else if (d.level == TwinLevel::GlobalEdge && t.parent)
      m_twinRt[id].syncFlow = syncFlow(t, d.host, m_twins[*t.parent].host(), t.policy.size());
  }

  for (TwinId id = 0; id < defs.size(); ++id) {
    const Twin& t = m_twins[id];
    if (t.alerts.empty() || !m_root || t.host() == m_twins[*m_root].host())
      continue;
    Flow f;
    f.name = "alert/" + t.name();
    f.slice = defs[id].alertSlice;
    f.role = FlowRole::Alert;
    f.src = t.host();
    f.dst = m_twins[*m_root].host();
    f.payloadBytes = kAlertPayloadBytes;
    f.end = m_tEnd;
    m_twinRt[id].alertFlow = addFlow(std::move(f));
  }

  for (TwinId id = 0; id < defs.size(); ++id) {
    const auto& d = defs[id];
    const Twin& t = m_twins[id];
    if (d.level == TwinLevel::IndividualEdge) {
      RngStream rng = forkRng(m_seed, "twins/" + d.name);
      const SimTime phase{rng.below(std::max<std::uint64_t>(t.syncPeriod.ticks, 1))};
      m_twinRt[id].entity.emplace(id, d.metrics, std::move(rng));
      if (phase < m_tEnd)
        m_engine.schedule(phase, EventKind::SyncDue, TwinRec{id});
    } else {
      if (t.aggregationPeriod <= m_tEnd)
        m_engine.schedule(t.aggregationPeriod, EventKind::AggregationDue, TwinRec{id});
      if (m_twinRt[id].syncFlow && t.syncPeriod <= m_tEnd)
        m_engine.schedule(t.syncPeriod, EventKind::SyncDue, TwinRec{id});
    }
  }
}

void
Simulation::setUpFaults()
{
  m_faults = std::make_unique<FaultInjector>(m_engine, *m_network);
  m_faults->setListener([this](const FaultSpec& spec, bool failed) {
    if (!failed)
      return;
    if (spec.kind == FaultSpec::Target::Node)
      m_mobility->attachmentLost(spec.id);
    else
      m_mobility->linkLost(spec.id);
  });
  for (const auto& f : m_scenario.faults)
    m_faults->inject(f);
}

void
Simulation::emit(FlowId id, FrameKind kind, std::uint64_t payloadBytes, std::uint64_t tag,
                 std::shared_ptr<const SyncMessage> sync)
{
  if (!m_sending[id])
    return;
  const Flow& flow = m_flows[id];
  Frame f;
  f.flow = id;
  f.slice = flow.slice;
  f.kind = kind;
  f.src = flow.src;
  f.dst = flow.dst;
  f.payloadBytes = payloadBytes;
  f.totalBytes = serializeOverhead(payloadBytes, m_scenario.stack);
  f.createdAt = m_engine.now();
  f.tag = tag;
  f.sync = std::move(sync);
  m_metrics.recordSent(f);
  m_network->inject(std::move(f), m_engine.now() + flow.setupLatency);
}

void
Simulation::onTrafficArrival(const Event& e)
{
  if (m_draining)
    return;
  const auto idx = e.as<TrafficArrivalRec>().source;
  auto& src = m_sources[idx];
  const Flow& flow = m_flows[src.flow];
  const bool command = m_surgeryByCmdFlow[src.flow] >= 0;
  emit(src.flow, command ? FrameKind::Command : FrameKind::Data, flow.payloadBytes, 0);
  if (auto t = src.generator.next())
    m_engine.schedule(*t, EventKind::TrafficArrival, TrafficArrivalRec{idx});
}

void
Simulation::sendTwinSync(TwinId id)
{
  const Twin& t = m_twins[id];
  auto& rt = m_twinRt[id];
  if (!rt.syncFlow)
    return;
  std::optional<SyncMessage> msg;
  if (rt.entity)
    msg = rt.entity->sample(m_engine.now());
  else
    msg = t.pendingSync(m_engine.now());
  if (!msg || msg->deltas.empty())
    return;
  const std::uint64_t target = rt.entity ? id : *t.parent;
  const auto payload = syncPayloadBytes(msg->deltas.size());
  emit(*rt.syncFlow, FrameKind::Sync, payload, target, std::make_shared<const SyncMessage>(std::move(*msg)));
}

void
Simulation::onSyncDue(const Event& e)
{
  if (m_draining)
    return;
  const TwinId id = e.as<TwinRec>().twin;
  sendTwinSync(id);
  const SimTime next = m_engine.now() + m_twins[id].syncPeriod;
  if (next < m_tEnd)
    m_engine.schedule(next, EventKind::SyncDue, TwinRec{id});
}

void
Simulation::aggregateTwin(TwinId id)
{
  Twin& t = m_twins[id];
  auto& rt = m_twinRt[id];
  if (!m_network->topology().node(t.host()).up)
    return;
  std::vector<const TwinState*> states;
  if (t.level() == TwinLevel::GlobalCore) {
    for (const auto& [child, state] : t.mirrors())
      states.push_back(&state);
  } else {
    for (TwinId c : t.children)
      states.push_back(&m_twins[c].state());
  }
  if (!t.aggregate(states)) {
    ++rt.noChildren;
    return;
  }
  ++rt.aggregations;
  std::vector<std::string> updated;
  for (const auto& [name, sample] : t.state()) {
    rt.staleness.record(m_engine.now() - sample.observedAt);
    updated.push_back(name);
  }
  checkAlerts(id, updated);
}

void
Simulation::onAggregationDue(const Event& e)
{
  if (m_draining)
    return;
  const TwinId id = e.as<TwinRec>().twin;
  aggregateTwin(id);
  const SimTime next = m_engine.now() + m_twins[id].aggregationPeriod;
  if (next < m_tEnd)
    m_engine.schedule(next, EventKind::AggregationDue, TwinRec{id});
}

void
Simulation::onMetricsFlush(const Event&)
{
  if (m_draining)
    return;
  m_peakInFlight = std::max(m_peakInFlight, m_network->inFlight());
}

void
Simulation::checkAlerts(TwinId id, const std::vector<std::string>& updated)
{
  Twin& t = m_twins[id];
  auto& rt = m_twinRt[id];
  for (const auto& rule : t.alerts) {
    if (std::find(updated.begin(), updated.end(), rule.metric) == updated.end())
      continue;
    if (!t.escalateAlert(rule.metric, rule.threshold, m_engine.now()))
      continue;
    ++rt.alertsRaised;
    ++m_alertsRaised;
    if (rt.alertFlow)
      emit(*rt.alertFlow, FrameKind::Alert, kAlertPayloadBytes, id);
    else
      ++m_alertsDelivered; // raised on the core itself, or no core twin to notify
  }
}

void
Simulation::applySyncFrame(const Frame& frame)
{
  const auto& msg = *frame.sync;
  const TwinId target = static_cast<TwinId>(frame.tag);
  Twin& t = m_twins.at(target);
  auto& rt = m_twinRt[target];
  const SimTime now = m_engine.now();
  if (t.level() == TwinLevel::GlobalCore) {
    t.applyChildSync(msg, now);
    m_twins.at(msg.source).acknowledge(msg);
    ++rt.syncsApplied;
    return;
  }
  for (const auto& d : msg.deltas)
    if (t.state().contains(d.name))
      rt.staleness.record(t.staleness(d.name, now));
  const auto updated = t.applySync(msg, now);
  ++rt.syncsApplied;
  checkAlerts(target, updated);
}

void
Simulation::onDelivered(Frame&& frame)
{
  const SimTime now = m_engine.now();
  m_metrics.recordDelivery(frame, now);
  switch (frame.kind) {
  case FrameKind::Command: {
    auto& st = m_surgery[m_surgeryByCmdFlow[frame.flow]];
    emit(st.ackFlow, FrameKind::Ack, m_flows[st.ackFlow].payloadBytes, frame.createdAt.ticks);
    break;
  }
  case FrameKind::Ack: {
    auto& st = m_surgery[m_surgeryByAckFlow[frame.flow]];
    const SimTime rtt = now - SimTime{frame.tag};
    st.rtt.record(rtt);
    ++st.acks;
    const auto& loop = std::get<SurgeryLoop>(m_scenario.workloads[st.workload]);
    if (rtt <= loop.rttBudget)
      ++st.withinBudget;
    break;
  }
  case FrameKind::Sync:
    applySyncFrame(frame);
    break;
  case FrameKind::Alert:
    ++m_alertsDelivered;
    break;
  case FrameKind::Data:
    break;
  }
}

void
Simulation::onDropped(Frame&& frame, DropCause cause)
{
  m_metrics.recordDrop(frame, cause);
}

void
Simulation::quiesce()
{
  m_draining = true;
  m_mobility->setDraining(true);
  m_faults->setDraining(true);
  m_engine.runUntil(SimTime::max());

  for (TwinId id = 0; id < m_twins.size(); ++id)
    if (m_twins[id].level() == TwinLevel::GlobalEdge) {
      aggregateTwin(id);
      sendTwinSync(id);
    }
  m_engine.runUntil(SimTime::max());

  for (TwinId id = 0; id < m_twins.size(); ++id)
    if (m_twins[id].level() == TwinLevel::GlobalCore)
      aggregateTwin(id);
  m_engine.runUntil(SimTime::max());
}

RunReport
Simulation::run()
{
  if (m_ran)
    throw Error("Simulation::run called twice");
  m_ran = true;
  m_engine.runUntil(m_tEnd);
  quiesce();
  return buildReport();
}

RunReport
Simulation::buildReport() const
{
  const auto& topo = m_network->topology();
  RunReport r;
  r.scenario = m_scenario.name;
  r.digest = m_scenario.digest;
  r.masterSeed = m_seed;
  r.tEndNs = m_tEnd.ticks;
  r.drainedAtNs = std::max(m_engine.now(), m_tEnd).ticks;
  r.events = m_engine.processed();
  r.peakInFlight = m_peakInFlight;
  r.frequencyThz = m_scenario.frequencyThz;
  r.wavelengthUm = m_scenario.wavelengthUm;
  r.includeDetail = m_scenario.run.detail;
  r.alertsRaised = m_alertsRaised;
  r.alertsDelivered = m_alertsDelivered;

  auto flowThroughput = [&](const Flow& f) {
    const SimTime span = f.end > f.start ? f.end - f.start : SimTime{};
    if (span.ticks == 0)
      return 0.0;
    return static_cast<double>(m_metrics.flowTraffic(f.id).deliveredPayloadBytes) * 8.0 / seconds(span);
  };

  for (SliceClass s : kAllSlices) {
    auto& sr = r.slices[index(s)];
    sr.slice = s;
    sr.traffic = m_metrics.sliceTraffic(s);
    sr.delay = DelaySummary::of(m_metrics.sliceDelay(s));
    if (m_tEnd.ticks > 0)
      sr.throughputBps = static_cast<double>(sr.traffic.deliveredPayloadBytes) * 8.0 / seconds(m_tEnd);

    SlaInputs in;
    in.sent = sr.traffic.sent;
    in.delivered = sr.traffic.delivered;
    if (sr.delay.samples > 0)
      in.p99Delay = SimTime{sr.delay.p99Ns};
    std::vector<SlaDimension> rejected;
    for (const Flow& f : m_flows) {
      if (f.slice != s)
        continue;
      sr.present = true;
      if (f.admitted)
        ++sr.flowsAdmitted;
      else
        ++sr.flowsRejected;
      if (!f.admitted && m_scenario.admission.mode == AdmissionConfig::Mode::Enforce)
        rejected.push_back(m_decisions[f.id].reason == AdmissionDecision::Reason::Delay ? SlaDimension::Delay
                                                                                         : SlaDimension::Rate);
      if (isStreaming(s) && f.role == FlowRole::Application && m_sending[f.id]) {
        const double tp = flowThroughput(f);
        in.throughputBps = in.throughputBps ? std::min(*in.throughputBps, tp) : tp;
      }
    }
    for (const auto& w : m_scenario.workloads) {
      if (sliceOf(w) != s)
        continue;
      if (const auto* b = std::get_if<ImplantBeacon>(&w))
        in.energyPerMsg = std::max(in.energyPerMsg.value_or(0), b->energyPerTx);
      if (const auto* a = std::get_if<AmbulanceRun>(&w))
        in.speedKmh = std::max(in.speedKmh.value_or(0.0), a->speedKmh);
    }
    sr.verdict = checkSla(in, m_scenario.contracts[index(s)]);
    for (auto d : rejected)
      sr.verdict.add(d);
  }

  for (const Flow& f : m_flows) {
    FlowReport fr;
    fr.name = f.name;
    fr.slice = f.slice;
    fr.role = f.role;
    fr.src = topo.node(f.src).name;
    fr.dst = topo.node(f.dst).name;
    fr.admission = m_decisions[f.id].describe();
    fr.sending = m_sending[f.id];
    fr.setupLatencyNs = f.setupLatency.ticks;
    fr.unloadedDelayNs = f.unloadedDelay.ticks;
    fr.traffic = m_metrics.flowTraffic(f.id);
    fr.delay = DelaySummary::of(m_metrics.flowDelay(f.id));
    fr.throughputBps = flowThroughput(f);
    r.flows.push_back(std::move(fr));
  }

  for (TwinId id = 0; id < m_twins.size(); ++id) {
    const Twin& t = m_twins[id];
    const auto& rt = m_twinRt[id];
    TwinReport tr;
    tr.name = t.name();
    tr.level = t.level();
    tr.host = topo.node(t.host()).name;
    tr.state = t.state();
    tr.staleness = rt.staleness;
    tr.syncsApplied = rt.syncsApplied;
    tr.aggregations = rt.aggregations;
    tr.noChildren = rt.noChildren;
    tr.alertsRaised = rt.alertsRaised;
    r.twins.push_back(std::move(tr));

    auto it = std::find_if(r.staleness.begin(), r.staleness.end(),
                           [&](const LevelStaleness& l) { return l.level == t.level(); });
    if (it == r.staleness.end()) {
      r.staleness.push_back(LevelStaleness{t.level(), 0, {}});
      it = std::prev(r.staleness.end());
    }
    ++it->twins;
    it->staleness.samples += rt.staleness.samples;
    it->staleness.maxNs = std::max(it->staleness.maxNs, rt.staleness.maxNs);
    it->staleness.sumNs += rt.staleness.sumNs;
  }
  std::sort(r.staleness.begin(), r.staleness.end(),
            [](const LevelStaleness& a, const LevelStaleness& b) { return a.level < b.level; });

  r.faults = m_faults->timeline();
  r.mobility = m_mobility->report();

  for (const auto& st : m_surgery) {
    const auto& loop = std::get<SurgeryLoop>(m_scenario.workloads[st.workload]);
    SurgeryReport sr;
    sr.workload = loop.name;
    sr.commands = m_metrics.flowTraffic(st.cmdFlow).sent;
    sr.acks = st.acks;
    sr.rtt = DelaySummary::of(st.rtt);
    sr.rttBudgetNs = loop.rttBudget.ticks;
    sr.withinBudget = st.withinBudget;
    r.surgery.push_back(std::move(sr));
  }

  for (const auto& src : m_sources) {
    const auto* b = std::get_if<ImplantBeacon>(&m_scenario.workloads[src.workload]);
    if (!b)
      continue;
    EnergyReport er;
    er.workload = b->name;
    er.device = topo.node(b->device).name;
    er.transmissions = m_sending[src.flow] ? src.generator.emitted() : 0;
    er.energyPerTxPj = b->energyPerTx;
    er.consumedPj = er.transmissions * b->energyPerTx;
    er.batteryPj = b->battery;
    er.exhausted = b->battery - er.consumedPj < b->energyPerTx;
    r.energy.push_back(std::move(er));
  }
  return r;
}

} // namespace twinslice
