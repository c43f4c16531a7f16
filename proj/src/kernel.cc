#include "tsnsim/kernel.h"

#include <algorithm>
#include <stdexcept>

namespace tsnsim {

EventId Simulator::schedule(SimTime at, EventPayload payload) {
  if (at < now_)
    throw std::logic_error("event scheduled in the past: " + at.str() +
                           " < now " + now_.str());
  EventId id = next_index_++;
  heap_.push_back(Event{std::move(at), id, std::move(payload)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return id;
}

bool Simulator::cancel(EventId id) {
  if (cancelled_.contains(id)) return false;
  // Linear scan: cancellation is rare and the queue is short.
  bool queued = std::any_of(heap_.begin(), heap_.end(), [id](const Event& e) {
    return e.insertion_index == id;
  });
  if (!queued) return false;
  cancelled_.insert(id);
  return true;
}

std::uint64_t Simulator::run(SimTime until, const Handler& handler) {
  std::uint64_t count = 0;
  while (!heap_.empty() && heap_.front().fire_time <= until) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event event = std::move(heap_.back());
    heap_.pop_back();
    if (!cancelled_.empty() && cancelled_.erase(event.insertion_index))
      continue;
    now_ = event.fire_time;
    ++count;
    ++dispatched_;
    handler(event);
  }
  if (!heap_.empty() && now_ < until) now_ = until;
  return count;
}

}  // namespace tsnsim
