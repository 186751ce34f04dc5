#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace twinslice {

/// Virtual time in integer nanoseconds since run start.
struct SimTime
{
  std::uint64_t ticks = 0;

  constexpr SimTime() = default;
  constexpr explicit SimTime(std::uint64_t t) : ticks(t) {}

  static constexpr SimTime max() { return SimTime{std::numeric_limits<std::uint64_t>::max()}; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime{ticks + o.ticks}; }
  constexpr SimTime operator-(SimTime o) const { return SimTime{ticks - o.ticks}; }
  constexpr SimTime& operator+=(SimTime o) { ticks += o.ticks; return *this; }

  constexpr double seconds() const { return static_cast<double>(ticks) * 1e-9; }
};

constexpr SimTime nanoseconds(std::uint64_t v) { return SimTime{v}; }
constexpr SimTime microseconds(std::uint64_t v) { return SimTime{v * 1000ULL}; }
constexpr SimTime milliseconds(std::uint64_t v) { return SimTime{v * 1000000ULL}; }
constexpr SimTime seconds(std::uint64_t v) { return SimTime{v * 1000000000ULL}; }

} // namespace twinslice
