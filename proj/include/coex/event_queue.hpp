#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

namespace coex::sim {

using EventId = std::uint64_t;

/// Future-event list keyed by (time, insertion sequence).
///
/// Events at equal timestamps are dispatched in the order they were
/// scheduled. Scheduling into the past throws std::logic_error.
class EventQueue
{
public:
  using Handler = std::function<void()>;

  EventId schedule(double at_s, Handler handler);

  /// Cancelling an already dispatched or unknown id is a no-op.
  void cancel(EventId id);

  /// Dispatches the next live event. Returns false when nothing is pending.
  bool step();

  double now() const { return m_now; }
  std::size_t pending() const { return m_heap.size() - m_cancelled.size(); }
  bool empty() const { return pending() == 0; }
  std::uint64_t dispatched() const { return m_dispatched; }

private:
  struct Entry
  {
    double time;
    EventId seq;
    Handler handler;
  };
  struct Later
  {
    bool operator()(const Entry& a, const Entry& b) const
    {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::vector<Entry> m_heap;
  std::unordered_set<EventId> m_cancelled;
  double m_now = 0.0;
  EventId m_next_seq = 0;
  std::uint64_t m_dispatched = 0;
};

} // namespace coex::sim
