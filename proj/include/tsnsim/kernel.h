// Deterministic discrete-event engine.
//
// Events are totally ordered by (fire_time, insertion_index); ties in time
// are dispatched in the order they were scheduled.

#ifndef TSNSIM_KERNEL_H_
#define TSNSIM_KERNEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <variant>
#include <vector>

#include "tsnsim/frame.h"
#include "tsnsim/units.h"

namespace tsnsim {

// A frame has been completely received on `port` of `node`.
struct FrameArrival {
  NodeId node;
  PortId port;
  Frame frame;
};

// The transmitter of `port` on `node` has finished serializing a frame.
struct TransmissionComplete {
  NodeId node;
  PortId port;
};

// The next frame of traffic source `source` is due.
struct EmissionDue {
  std::size_t source;
};

// The head of an eligibility-ordered queue on `port` becomes eligible.
struct EligibilityTimer {
  NodeId node;
  PortId port;
};

using EventPayload =
    std::variant<FrameArrival, TransmissionComplete, EmissionDue,
                 EligibilityTimer>;

using EventId = std::uint64_t;

struct Event {
  SimTime fire_time;
  EventId insertion_index = 0;
  EventPayload payload;
};

class Simulator {
 public:
  using Handler = std::function<void(Event&)>;

  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }

  // Throws std::logic_error when `at` lies before now().
  EventId schedule(SimTime at, EventPayload payload);

  // Returns false when the event already fired, was cancelled, or is unknown.
  bool cancel(EventId id);

  // Number of queued, non-cancelled events.
  std::size_t pending() const { return heap_.size() - cancelled_.size(); }

  // Dispatches every event with fire_time <= until in total order.  The
  // handler may schedule further events.  Returns the number dispatched.
  std::uint64_t run(SimTime until, const Handler& handler);

  std::uint64_t dispatched() const { return dispatched_; }

  // Visits queued, non-cancelled events in unspecified order.
  template <class F>
  void for_each_pending(F&& f) const {
    for (const Event& e : heap_)
      if (!cancelled_.contains(e.insertion_index)) f(e);
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.insertion_index > b.insertion_index;
    }
  };

  std::vector<Event> heap_;
  std::unordered_set<EventId> cancelled_;
  SimTime now_;
  EventId next_index_ = 0;
  std::uint64_t dispatched_ = 0;
};

}  // namespace tsnsim

#endif  // TSNSIM_KERNEL_H_
