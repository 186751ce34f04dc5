#pragma once

#include "twinslice/sim/time.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace twinslice {

enum class SliceClass : std::uint8_t
{
  FeMBB,
  ERLLC,
  LDHMC,
  umMTC,
  ELPC,
};

inline constexpr std::size_t kSliceCount = 5;
inline constexpr std::array<SliceClass, kSliceCount> kAllSlices = {
  SliceClass::FeMBB, SliceClass::ERLLC, SliceClass::LDHMC, SliceClass::umMTC, SliceClass::ELPC};

std::string_view toString(SliceClass slice);
std::optional<SliceClass> parseSliceClass(std::string_view name);

constexpr std::size_t index(SliceClass s) { return static_cast<std::size_t>(s); }

/// Energy in integer picojoules.
using PicoJoules = std::uint64_t;
inline constexpr PicoJoules kUnboundedEnergy = std::numeric_limits<PicoJoules>::max();

struct QosContract
{
  std::uint64_t minRateBps = 0;
  SimTime maxE2eDelay = SimTime::max();
  double maxLoss = 1.0;
  double mobilityKmh = 0.0;
  PicoJoules maxEnergyPerMsg = kUnboundedEnergy;
};

/// Contract used for a slice the scenario does not override.
QosContract defaultContract(SliceClass slice);

/// Slices whose rate dimension is checked against minRateBps.
constexpr bool isStreaming(SliceClass s) { return s == SliceClass::FeMBB; }

using ContractTable = std::array<QosContract, kSliceCount>;
ContractTable defaultContracts();

} // namespace twinslice
