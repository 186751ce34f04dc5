#include "twinslice/slices/scheduler.hpp"

namespace twinslice {

SliceScheduler::SliceScheduler(std::uint32_t baseQuantumBytes)
  : m_baseQuantum(baseQuantumBytes == 0 ? 1 : baseQuantumBytes)
{
}

std::uint32_t
SliceScheduler::weight(SliceClass s)
{
  switch (s) {
  case SliceClass::FeMBB: return 8;
  case SliceClass::LDHMC: return 4;
  case SliceClass::umMTC: return 2;
  case SliceClass::ELPC: return 1;
  case SliceClass::ERLLC: return 0;
  }
  return 0;
}

void
SliceScheduler::enqueue(const QueuedFrame& f)
{
  m_queues[index(f.slice)].push_back(f);
  ++m_size;
}

std::optional<QueuedFrame>
SliceScheduler::dequeue()
{
  if (m_size == 0)
    return std::nullopt;

  auto& urgent = m_queues[index(SliceClass::ERLLC)];
  if (!urgent.empty()) {
    auto f = urgent.front();
    urgent.pop_front();
    --m_size;
    return f;
  }

  // At least one weighted class is backlogged, so this terminates: every
  // fresh visit to a backlogged class grows its deficit by a positive quantum.
  for (;;) {
    const SliceClass cls = kRound[m_cursor];
    auto& q = m_queues[index(cls)];
    auto& deficit = m_deficit[index(cls)];
    if (q.empty()) {
      deficit = 0;
      m_cursor = (m_cursor + 1) % kRound.size();
      m_freshVisit = true;
      continue;
    }
    if (m_freshVisit) {
      deficit += static_cast<std::uint64_t>(weight(cls)) * m_baseQuantum;
      m_freshVisit = false;
    }
    if (q.front().bytes <= deficit) {
      auto f = q.front();
      q.pop_front();
      --m_size;
      deficit -= f.bytes;
      if (q.empty()) {
        deficit = 0;
        m_cursor = (m_cursor + 1) % kRound.size();
        m_freshVisit = true;
      }
      return f;
    }
    m_cursor = (m_cursor + 1) % kRound.size();
    m_freshVisit = true;
  }
}

std::deque<QueuedFrame>
SliceScheduler::drainAll()
{
  std::deque<QueuedFrame> out;
  for (auto& q : m_queues) {
    for (auto& f : q)
      out.push_back(f);
    q.clear();
  }
  m_deficit.fill(0);
  m_cursor = 0;
  m_freshVisit = true;
  m_size = 0;
  return out;
}

} // namespace twinslice
