#pragma once

#include "twinslice/sim/time.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace twinslice::units {

// Exact decimal parsing: "1.5ms" -> 1500000 ns. Results that are not whole
// multiples of the base unit (e.g. "0.5ns") are rejected.

/// Suffixes ns, us, ms, s. A bare integer is nanoseconds.
std::optional<SimTime> parseDuration(std::string_view text);

/// Suffixes bps, kbps, mbps, gbps, tbps (case-insensitive). Bare integer is bps.
std::optional<std::uint64_t> parseRate(std::string_view text);

/// Suffixes pJ, nJ, uJ, mJ, J. Result in picojoules.
std::optional<std::uint64_t> parseEnergy(std::string_view text);

} // namespace twinslice::units
