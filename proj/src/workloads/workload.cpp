#include "twinslice/workloads/workload.hpp"

#include <algorithm>
#include <cmath>

namespace twinslice {

namespace {

template <typename... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::uint64_t kNsPerSecond = 1'000'000'000ULL;

} // namespace

SliceClass
sliceOf(const WorkloadSpec& spec)
{
  return std::visit(Overloaded{
                      [](const TelemedicineStream&) { return SliceClass::FeMBB; },
                      [](const SurgeryLoop&) { return SliceClass::ERLLC; },
                      [](const AmbulanceRun&) { return SliceClass::LDHMC; },
                      [](const WearableFleet&) { return SliceClass::umMTC; },
                      [](const ImplantBeacon&) { return SliceClass::ELPC; },
                    },
                    spec);
}

const std::string&
nameOf(const WorkloadSpec& spec)
{
  return std::visit([](const auto& w) -> const std::string& { return w.name; }, spec);
}

std::string_view
typeName(const WorkloadSpec& spec)
{
  return std::visit(Overloaded{
                      [](const TelemedicineStream&) { return std::string_view{"telemedicine"}; },
                      [](const SurgeryLoop&) { return std::string_view{"surgery"}; },
                      [](const AmbulanceRun&) { return std::string_view{"ambulance"}; },
                      [](const WearableFleet&) { return std::string_view{"wearables"}; },
                      [](const ImplantBeacon&) { return std::string_view{"implant"}; },
                    },
                    spec);
}

std::vector<NodeId>
referencedNodes(const WorkloadSpec& spec)
{
  return std::visit(Overloaded{
                      [](const TelemedicineStream& w) { return std::vector<NodeId>{w.src, w.dst}; },
                      [](const SurgeryLoop& w) { return std::vector<NodeId>{w.console, w.robot}; },
                      [](const AmbulanceRun& w) {
                        auto v = w.edgeSequence;
                        v.push_back(w.device);
                        v.push_back(w.dst);
                        return v;
                      },
                      [](const WearableFleet& w) {
                        auto v = w.devices;
                        if (w.dst != kNoNode)
                          v.push_back(w.dst);
                        return v;
                      },
                      [](const ImplantBeacon& w) { return std::vector<NodeId>{w.device, w.dst}; },
                    },
                    spec);
}

SimTime
activeStart(const WorkloadSpec& spec)
{
  return std::visit([](const auto& w) { return w.start; }, spec);
}

SimTime
activeEnd(const WorkloadSpec& spec, SimTime horizon)
{
  return std::visit(
    [&](const auto& w) {
      if (!w.duration)
        return horizon;
      return std::min(horizon, w.start + *w.duration);
    },
    spec);
}

SimTime
handoverInterval(double speedKmh, double cellSpanM)
{
  // metres / (km/h / 3.6) seconds
  return SimTime{static_cast<std::uint64_t>(std::llround(cellSpanM * 3.6e9 / speedKmh))};
}

std::uint64_t
affordableTransmissions(const ImplantBeacon& beacon)
{
  if (beacon.energyPerTx == 0)
    return ~0ULL;
  return beacon.battery / beacon.energyPerTx;
}

TrafficSource::TrafficSource(NodeId node, Law law, SimTime first, SimTime end)
  : m_node(node)
  , m_law(law)
  , m_first(first)
  , m_end(end)
  , m_cursor(first)
{
}

TrafficSource
TrafficSource::periodic(NodeId node, SimTime first, SimTime end, std::uint64_t periodNum, std::uint64_t periodDen,
                        std::optional<std::uint64_t> maxEmissions)
{
  TrafficSource s(node, Law::Periodic, first, end);
  s.m_num = periodNum;
  s.m_den = periodDen == 0 ? 1 : periodDen;
  s.m_max = maxEmissions;
  return s;
}

TrafficSource
TrafficSource::poisson(NodeId node, SimTime start, SimTime end, SimTime meanGap, RngStream rng)
{
  TrafficSource s(node, Law::Poisson, start, end);
  s.m_meanGap = meanGap;
  s.m_rng.emplace(std::move(rng));
  return s;
}

std::optional<SimTime>
TrafficSource::next()
{
  if (m_max && m_emitted >= *m_max)
    return std::nullopt;
  SimTime at;
  if (m_law == Law::Periodic) {
    const auto offset = static_cast<unsigned __int128>(m_emitted) * m_num / m_den;
    at = m_first + SimTime{static_cast<std::uint64_t>(offset)};
  } else {
    const double gap = m_rng->exponential(1.0 / static_cast<double>(m_meanGap.ticks));
    m_cursor += SimTime{static_cast<std::uint64_t>(std::llround(gap))};
    at = m_cursor;
  }
  if (at >= m_end)
    return std::nullopt;
  ++m_emitted;
  return at;
}

std::vector<TrafficSource>
TrafficSource::forWorkload(const WorkloadSpec& spec, RngStream& rng, SimTime horizon)
{
  const SimTime start = activeStart(spec);
  const SimTime end = activeEnd(spec, horizon);
  std::vector<TrafficSource> out;
  std::visit(Overloaded{
               [&](const TelemedicineStream& w) {
                 out.push_back(periodic(w.src, start, end, w.frameBytes * 8 * kNsPerSecond, w.bitrateBps));
               },
               [&](const SurgeryLoop& w) { out.push_back(periodic(w.console, start, end, kNsPerSecond, w.cmdRateHz)); },
               [&](const AmbulanceRun& w) {
                 out.push_back(periodic(w.device, start, end, kNsPerSecond, w.telemetryRateHz));
               },
               [&](const WearableFleet& w) {
                 out.reserve(w.devices.size());
                 for (std::size_t i = 0; i < w.devices.size(); ++i) {
                   if (w.poisson) {
                     RngStream sub(rng.next(), rng.label() + "/" + std::to_string(i));
                     out.push_back(poisson(w.devices[i], start, end, w.period, std::move(sub)));
                   } else {
                     const SimTime phase{rng.below(std::max<std::uint64_t>(w.period.ticks, 1))};
                     out.push_back(periodic(w.devices[i], start + phase, end, w.period.ticks, 1));
                   }
                 }
               },
               [&](const ImplantBeacon& w) {
                 out.push_back(periodic(w.device, start, end, w.period.ticks, 1, affordableTransmissions(w)));
               },
             },
             spec);
  return out;
}

std::vector<Emission>
generateEvents(const WorkloadSpec& spec, RngStream& rng, SimTime horizon)
{
  auto sources = TrafficSource::forWorkload(spec, rng, horizon);
  std::vector<Emission> out;
  for (std::uint32_t i = 0; i < sources.size(); ++i)
    while (auto t = sources[i].next())
      out.push_back(Emission{*t, i, sources[i].node()});
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace twinslice
