#include "twinslice/slices/sla.hpp"

#include <algorithm>

namespace twinslice {

std::string_view
toString(SlaDimension d)
{
  switch (d) {
  case SlaDimension::Delay: return "delay";
  case SlaDimension::Loss: return "loss";
  case SlaDimension::Rate: return "rate";
  case SlaDimension::Energy: return "energy";
  case SlaDimension::Mobility: return "mobility";
  }
  return "?";
}

void
SlaVerdict::add(SlaDimension d)
{
  status = Status::Violated;
  if (std::find(violated.begin(), violated.end(), d) == violated.end()) {
    violated.push_back(d);
    std::sort(violated.begin(), violated.end());
  }
}

std::string
SlaVerdict::describe() const
{
  switch (status) {
  case Status::Met: return "met";
  case Status::NoData: return "no-data";
  case Status::Violated: break;
  }
  std::string out = "violated(";
  for (std::size_t i = 0; i < violated.size(); ++i) {
    if (i)
      out += ';';
    out += toString(violated[i]);
  }
  return out + ")";
}

SlaVerdict
checkSla(const SlaInputs& m, const QosContract& c)
{
  SlaVerdict v;
  if (m.sent == 0)
    return v;
  v.status = SlaVerdict::Status::Met;
  if (m.p99Delay && *m.p99Delay > c.maxE2eDelay)
    v.add(SlaDimension::Delay);
  const double loss = 1.0 - static_cast<double>(m.delivered) / static_cast<double>(m.sent);
  if (loss > c.maxLoss)
    v.add(SlaDimension::Loss);
  if (m.throughputBps && *m.throughputBps < static_cast<double>(c.minRateBps))
    v.add(SlaDimension::Rate);
  if (m.energyPerMsg && *m.energyPerMsg > c.maxEnergyPerMsg)
    v.add(SlaDimension::Energy);
  if (m.speedKmh && c.mobilityKmh > 0.0 && *m.speedKmh > c.mobilityKmh)
    v.add(SlaDimension::Mobility);
  return v;
}

} // namespace twinslice
