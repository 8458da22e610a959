#include "coex/event_queue.hpp"

#include <algorithm>
#include <stdexcept>

namespace coex::sim {

EventId EventQueue::schedule(double at_s, Handler handler)
{
  if (at_s < m_now) {
    throw std::logic_error("event scheduled in the past");
  }
  const EventId id = m_next_seq++;
  m_heap.push_back(Entry{at_s, id, std::move(handler)});
  std::push_heap(m_heap.begin(), m_heap.end(), Later{});
  return id;
}

void EventQueue::cancel(EventId id)
{
  if (id >= m_next_seq) {
    return;
  }
  const bool live = std::any_of(m_heap.begin(), m_heap.end(), [id](const Entry& e) { return e.seq == id; });
  if (live) {
    m_cancelled.insert(id);
  }
}

bool EventQueue::step()
{
  while (!m_heap.empty()) {
    std::pop_heap(m_heap.begin(), m_heap.end(), Later{});
    Entry next = std::move(m_heap.back());
    m_heap.pop_back();
    if (m_cancelled.erase(next.seq) > 0) {
      continue;
    }
    if (next.time < m_now) {
      throw std::logic_error("event queue dispatched out of time order");
    }
    m_now = next.time;
    ++m_dispatched;
    next.handler();
    return true;
  }
  return false;
}

} // namespace coex::sim
