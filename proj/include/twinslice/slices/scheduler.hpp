#pragma once

#include "twinslice/slices/slice.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>

namespace twinslice {

struct QueuedFrame
{
  std::uint32_t frame = 0;
  std::uint32_t bytes = 0;
  SliceClass slice = SliceClass::umMTC;
};

/**
 * Per-link slice-aware queue.
 *
 * ERLLC is served with strict priority. The other four classes share the
 * remainder by deficit round robin with quanta proportional to
 * FeMBB 8 : LDHMC 4 : umMTC 2 : ELPC 1. Within a class service is FIFO.
 */
class SliceScheduler
{
public:
  static constexpr std::uint32_t kDefaultQuantumBytes = 1500;

  explicit SliceScheduler(std::uint32_t baseQuantumBytes = kDefaultQuantumBytes);

  void enqueue(const QueuedFrame& f);
  std::optional<QueuedFrame> dequeue();

  /// Removes everything, returning the frames in no particular order.
  std::deque<QueuedFrame> drainAll();

  std::size_t size() const { return m_size; }
  bool empty() const { return m_size == 0; }
  std::size_t size(SliceClass s) const { return m_queues[index(s)].size(); }

  static std::uint32_t weight(SliceClass s);

private:
  // Round-robin order over the weighted classes.
  static constexpr std::array<SliceClass, 4> kRound = {
    SliceClass::FeMBB, SliceClass::LDHMC, SliceClass::umMTC, SliceClass::ELPC};

  std::array<std::deque<QueuedFrame>, kSliceCount> m_queues;
  std::array<std::uint64_t, kSliceCount> m_deficit{};
  std::uint32_t m_baseQuantum;
  std::size_t m_cursor = 0;
  bool m_freshVisit = true;
  std::size_t m_size = 0;
};

} // namespace twinslice
