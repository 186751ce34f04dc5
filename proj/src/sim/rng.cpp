#include "twinslice/sim/rng.hpp"

#include <bit>
#include <cmath>

namespace twinslice {

std::uint64_t
fnv1a64(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t
splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t masterSeed, std::string label)
  : m_label(std::move(label))
{
  std::uint64_t sm = masterSeed;
  std::uint64_t mixed = splitmix64(sm) ^ fnv1a64(m_label);
  for (auto& word : m_s)
    word = splitmix64(mixed);
}

std::uint64_t
RngStream::next()
{
  const std::uint64_t result = std::rotl(m_s[1] * 5, 7) * 9;
  const std::uint64_t t = m_s[1] << 17;
  m_s[2] ^= m_s[0];
  m_s[3] ^= m_s[1];
  m_s[1] ^= m_s[2];
  m_s[0] ^= m_s[3];
  m_s[2] ^= t;
  m_s[3] = std::rotl(m_s[3], 45);
  return result;
}

double
RngStream::uniform()
{
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double
RngStream::exponential(double rate)
{
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-uniform()) / rate;
}

bool
RngStream::bernoulli(double p)
{
  if (p <= 0.0)
    return false;
  if (p >= 1.0)
    return true;
  return uniform() < p;
}

std::uint64_t
RngStream::below(std::uint64_t bound)
{
  // Lemire's multiply-shift; bias is negligible for simulation use.
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
}

RngStream
forkRng(std::uint64_t masterSeed, std::string_view label)
{
  return RngStream(masterSeed, std::string(label));
}

} // namespace twinslice
