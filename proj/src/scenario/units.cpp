#include "twinslice/scenario/units.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>

namespace twinslice::units {

namespace {

using u128 = unsigned __int128;

/// Splits "<decimal><suffix>", returning value * multiplier if integral.
std::optional<std::uint64_t>
scaled(std::string_view text, std::string_view suffix, std::uint64_t multiplier)
{
  if (!text.ends_with(suffix))
    return std::nullopt;
  auto number = text.substr(0, text.size() - suffix.size());
  while (!number.empty() && number.back() == ' ')
    number.remove_suffix(1);
  if (number.empty())
    return std::nullopt;

  u128 mantissa = 0;
  u128 divisor = 1;
  bool dot = false;
  bool digits = false;
  for (char c : number) {
    if (c == '.') {
      if (dot)
        return std::nullopt;
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
    digits = true;
    mantissa = mantissa * 10 + static_cast<unsigned>(c - '0');
    if (dot)
      divisor *= 10;
    if (mantissa > (u128{1} << 100) || divisor > (u128{1} << 60))
      return std::nullopt;
  }
  if (!digits)
    return std::nullopt;
  const u128 total = mantissa * multiplier;
  if (total % divisor != 0)
    return std::nullopt;
  const u128 value = total / divisor;
  if (value > u128{~0ULL})
    return std::nullopt;
  return static_cast<std::uint64_t>(value);
}

std::optional<std::uint64_t>
parseWithTable(std::string_view text, std::initializer_list<std::pair<std::string_view, std::uint64_t>> table,
               bool bareAllowed)
{
  // Longest suffix first so "ms" is not read as "s".
  std::optional<std::uint64_t> best;
  std::size_t bestLen = 0;
  for (const auto& [suffix, mult] : table) {
    if (suffix.size() > bestLen && text.ends_with(suffix)) {
      if (auto v = scaled(text, suffix, mult)) {
        best = v;
        bestLen = suffix.size();
      }
    }
  }
  if (best)
    return best;
  if (bareAllowed)
    return scaled(text, "", 1);
  return std::nullopt;
}

std::string
lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

} // namespace

std::optional<SimTime>
parseDuration(std::string_view text)
{
  auto v = parseWithTable(text,
                          {{"ns", 1ULL}, {"us", 1'000ULL}, {"ms", 1'000'000ULL}, {"s", 1'000'000'000ULL}},
                          true);
  if (!v)
    return std::nullopt;
  return SimTime{*v};
}

std::optional<std::uint64_t>
parseRate(std::string_view text)
{
  const auto l = lower(text);
  return parseWithTable(l,
                        {{"bps", 1ULL},
                         {"kbps", 1'000ULL},
                         {"mbps", 1'000'000ULL},
                         {"gbps", 1'000'000'000ULL},
                         {"tbps", 1'000'000'000'000ULL}},
                        true);
}

std::optional<std::uint64_t>
parseEnergy(std::string_view text)
{
  return parseWithTable(text,
                        {{"pJ", 1ULL},
                         {"nJ", 1'000ULL},
                         {"uJ", 1'000'000ULL},
                         {"mJ", 1'000'000'000ULL},
                         {"J", 1'000'000'000'000ULL}},
                        false);
}

} // namespace twinslice::units
