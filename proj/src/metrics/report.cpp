#include "twinslice/metrics/report.hpp"
#include "twinslice/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace twinslice {

using Json = nlohmann::ordered_json;

double
TrafficCounters::reliability() const
{
  if (sent == 0)
    return 1.0;
  return static_cast<double>(delivered) / static_cast<double>(sent);
}

void
TrafficCounters::merge(const TrafficCounters& o)
{
  sent += o.sent;
  delivered += o.delivered;
  droppedLoss += o.droppedLoss;
  droppedQueue += o.droppedQueue;
  droppedFault += o.droppedFault;
  deliveredPayloadBytes += o.deliveredPayloadBytes;
}

DelaySummary
DelaySummary::of(const DelayHistogram& h)
{
  DelaySummary s;
  if (h.empty())
    return s;
  s.samples = h.count();
  s.meanNs = h.mean();
  s.minNs = h.min().ticks;
  s.p50Ns = h.percentile(0.5).ticks;
  s.p99Ns = h.percentile(0.99).ticks;
  s.maxNs = h.max().ticks;
  return s;
}

void
StalenessStats::record(SimTime s)
{
  ++samples;
  maxNs = std::max(maxNs, s.ticks);
  sumNs += s.ticks;
}

bool
RunReport::anyViolation() const
{
  for (const auto& s : slices)
    if (s.verdict.status == SlaVerdict::Status::Violated)
      return true;
  return false;
}

double
roundSignificant(double v, int digits)
{
  if (v == 0.0 || !std::isfinite(v))
    return v == 0.0 ? 0.0 : v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

namespace {

std::string
formatSignificant(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Json
toJson(const TrafficCounters& t)
{
  Json j;
  j["sent"] = t.sent;
  j["delivered"] = t.delivered;
  j["dropped_loss"] = t.droppedLoss;
  j["dropped_queue"] = t.droppedQueue;
  j["dropped_fault"] = t.droppedFault;
  j["delivered_payload_bytes"] = t.deliveredPayloadBytes;
  return j;
}

Json
toJson(const DelaySummary& d)
{
  Json j;
  j["samples"] = d.samples;
  j["mean_ns"] = roundSignificant(d.meanNs);
  j["min_ns"] = d.minNs;
  j["p50_ns"] = d.p50Ns;
  j["p99_ns"] = d.p99Ns;
  j["max_ns"] = d.maxNs;
  return j;
}

Json
toJson(const StalenessStats& s)
{
  Json j;
  j["samples"] = s.samples;
  j["max_ns"] = s.maxNs;
  j["mean_ns"] = roundSignificant(s.meanNs());
  return j;
}

Json
toJson(const SlaVerdict& v)
{
  Json j;
  j["status"] = v.describe();
  Json dims = Json::array();
  for (auto d : v.violated)
    dims.push_back(std::string(toString(d)));
  j["violated"] = dims;
  return j;
}

} // namespace

std::string
emitJson(const RunReport& r)
{
  Json root;
  root["scenario"] = r.scenario;
  root["digest"] = r.digest;
  root["master_seed"] = r.masterSeed;
  root["t_end_ns"] = r.tEndNs;
  root["drained_at_ns"] = r.drainedAtNs;
  root["events"] = r.events;
  root["peak_in_flight"] = r.peakInFlight;
  if (r.frequencyThz || r.wavelengthUm) {
    Json spectrum;
    if (r.frequencyThz)
      spectrum["frequency_thz"] = roundSignificant(*r.frequencyThz);
    if (r.wavelengthUm)
      spectrum["wavelength_um"] = roundSignificant(*r.wavelengthUm);
    root["declared_spectrum"] = spectrum;
  }

  Json slices = Json::array();
  for (const auto& s : r.slices) {
    Json j;
    j["slice"] = std::string(toString(s.slice));
    j["present"] = s.present;
    j["traffic"] = toJson(s.traffic);
    j["delay"] = toJson(s.delay);
    j["throughput_bps"] = roundSignificant(s.throughputBps);
    j["reliability"] = roundSignificant(s.traffic.reliability());
    j["flows_admitted"] = s.flowsAdmitted;
    j["flows_rejected"] = s.flowsRejected;
    j["verdict"] = toJson(s.verdict);
    slices.push_back(std::move(j));
  }
  root["slices"] = std::move(slices);

  Json alerts;
  alerts["raised"] = r.alertsRaised;
  alerts["delivered"] = r.alertsDelivered;
  root["alerts"] = alerts;

  Json levels = Json::array();
  for (const auto& l : r.staleness) {
    Json j;
    j["level"] = std::string(toString(l.level));
    j["twins"] = l.twins;
    j["staleness"] = toJson(l.staleness);
    levels.push_back(std::move(j));
  }
  root["twin_staleness"] = std::move(levels);

  Json faults = Json::array();
  for (const auto& f : r.faults) {
    Json j;
    j["target"] = f.target;
    j["kind"] = f.kind;
    j["failed_at_ns"] = f.failedAtNs;
    j["recovered_at_ns"] = f.recoveredAtNs;
    j["applied"] = f.applied;
    faults.push_back(std::move(j));
  }
  root["faults"] = std::move(faults);

  Json mobility = Json::array();
  for (const auto& m : r.mobility) {
    Json j;
    j["workload"] = m.workload;
    j["device"] = m.device;
    j["handovers"] = m.handovers;
    j["deferred"] = m.deferred;
    j["frames_buffered"] = m.framesBuffered;
    j["max_gap_ns"] = m.maxGapNs;
    j["total_gap_ns"] = m.totalGapNs;
    j["final_edge"] = m.finalEdge;
    mobility.push_back(std::move(j));
  }
  root["mobility"] = std::move(mobility);

  Json surgery = Json::array();
  for (const auto& s : r.surgery) {
    Json j;
    j["workload"] = s.workload;
    j["commands"] = s.commands;
    j["acks"] = s.acks;
    j["rtt"] = toJson(s.rtt);
    j["rtt_budget_ns"] = s.rttBudgetNs;
    j["within_budget"] = s.withinBudget;
    surgery.push_back(std::move(j));
  }
  root["surgery"] = std::move(surgery);

  Json energy = Json::array();
  for (const auto& e : r.energy) {
    Json j;
    j["workload"] = e.workload;
    j["device"] = e.device;
    j["transmissions"] = e.transmissions;
    j["energy_per_tx_pj"] = e.energyPerTxPj;
    j["consumed_pj"] = e.consumedPj;
    j["battery_pj"] = e.batteryPj;
    j["exhausted"] = e.exhausted;
    energy.push_back(std::move(j));
  }
  root["energy"] = std::move(energy);

  if (r.includeDetail) {
    Json flows = Json::array();
    for (const auto& f : r.flows) {
      Json j;
      j["name"] = f.name;
      j["slice"] = std::string(toString(f.slice));
      j["role"] = std::string(toString(f.role));
      j["src"] = f.src;
      j["dst"] = f.dst;
      j["admission"] = f.admission;
      j["sending"] = f.sending;
      j["setup_latency_ns"] = f.setupLatencyNs;
      j["unloaded_delay_ns"] = f.unloadedDelayNs;
      j["traffic"] = toJson(f.traffic);
      j["delay"] = toJson(f.delay);
      j["throughput_bps"] = roundSignificant(f.throughputBps);
      flows.push_back(std::move(j));
    }
    root["flows"] = std::move(flows);

    Json twins = Json::array();
    for (const auto& t : r.twins) {
      Json j;
      j["name"] = t.name;
      j["level"] = std::string(toString(t.level));
      j["host"] = t.host;
      Json metrics;
      for (const auto& [name, sample] : t.state) {
        Json m;
        m["value"] = roundSignificant(sample.value);
        m["version"] = sample.version;
        m["observed_at_ns"] = sample.observedAt.ticks;
        metrics[name] = std::move(m);
      }
      j["metrics"] = metrics.is_null() ? Json::object() : std::move(metrics);
      j["staleness"] = toJson(t.staleness);
      j["syncs_applied"] = t.syncsApplied;
      j["aggregations"] = t.aggregations;
      j["no_children"] = t.noChildren;
      j["alerts_raised"] = t.alertsRaised;
      twins.push_back(std::move(j));
    }
    root["twins"] = std::move(twins);
  }

  if (r.wallClockSeconds)
    root["wall_clock_s"] = roundSignificant(*r.wallClockSeconds);

  return root.dump(2) + "\n";
}

std::string
emitCsv(const RunReport& r)
{
  std::ostringstream os;
  os << "slice,sent,delivered,dropped_loss,dropped_queue,dropped_fault,mean_delay_ns,p50_ns,p99_ns,max_ns,"
        "throughput_bps,reliability,verdict\n";
  for (const auto& s : r.slices) {
    if (!s.present)
      continue;
    os << toString(s.slice) << ',' << s.traffic.sent << ',' << s.traffic.delivered << ',' << s.traffic.droppedLoss
       << ',' << s.traffic.droppedQueue << ',' << s.traffic.droppedFault << ',' << formatSignificant(s.delay.meanNs)
       << ',' << s.delay.p50Ns << ',' << s.delay.p99Ns << ',' << s.delay.maxNs << ','
       << formatSignificant(s.throughputBps) << ',' << formatSignificant(s.traffic.reliability()) << ','
       << s.verdict.describe() << '\n';
  }
  return os.str();
}

std::string
emitReport(const RunReport& report, ReportFormat format)
{
  return format == ReportFormat::Json ? emitJson(report) : emitCsv(report);
}

void
writeFile(const std::string& path, const std::string& bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoFailure("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoFailure("write to '" + path + "' failed");
}

} // namespace twinslice
