#pragma once

#include "twinslice/sim/time.hpp"
#include "twinslice/slices/slice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twinslice {

enum class SlaDimension : std::uint8_t
{
  Delay,
  Loss,
  Rate,
  Energy,
  Mobility,
};

std::string_view toString(SlaDimension d);

struct SlaInputs
{
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::optional<SimTime> p99Delay;
  std::optional<double> throughputBps; // streaming slices only
  std::optional<PicoJoules> energyPerMsg;
  std::optional<double> speedKmh;
};

struct SlaVerdict
{
  enum class Status : std::uint8_t { Met, Violated, NoData };

  Status status = Status::NoData;
  std::vector<SlaDimension> violated;

  void add(SlaDimension d);
  /// "met", "no-data", or "violated(delay;loss)".
  std::string describe() const;

  bool operator==(const SlaVerdict&) const = default;
};

/// Pure comparison of measured metrics against a contract. Zero sent
/// frames yields NoData.
SlaVerdict checkSla(const SlaInputs& metrics, const QosContract& contract);

} // namespace twinslice
