// Stream descriptions and frame emission.

#ifndef TSNSIM_TRAFFIC_H_
#define TSNSIM_TRAFFIC_H_

#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tsnsim/frame.h"
#include "tsnsim/units.h"

namespace tsnsim {

// A periodic stream.  Frame n of period k is produced at
//   phase + k * period + offsets[n] + U(0, jitter_bound).
struct StreamSpec {
  std::string id;
  std::int64_t frame_size_bits = 0;
  int priority = 0;  // higher is more urgent
  SimTime period;
  SimTime phase;
  std::vector<SimTime> offsets;
  SimTime jitter_bound;
  std::string source;
  std::string destination;
  bool frer_enabled = false;

  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

// Throws std::invalid_argument naming the violated invariant.
void validate(const StreamSpec& spec);

// Three streams producing two frames each, `spacing` apart, per period.
struct AdversarialSpec {
  SimTime spacing;  // I
  SimTime period;   // T, must satisfy T < 3I
  SimTime blue_start;
  SimTime red_offset_after_blue;
  SimTime orange_offset_after_red2;
  std::int64_t frame_size_bits = 1000;
  int priority = 0;
};

struct AdversarialStreams {
  StreamSpec blue;
  StreamSpec red;
  StreamSpec orange;
};

// Throws std::invalid_argument when T >= 3I or an offset falls outside the
// period.  Source/destination are left empty for the caller to fill.
AdversarialStreams expand_adversarial(const AdversarialSpec& spec);

using Rng = std::mt19937_64;

// Uniform integer in [0, bound], independent of the standard library's
// distribution implementation.
std::uint64_t uniform_below_inclusive(Rng& rng, std::uint64_t bound);

// Frames of one period, in offset order.  Jitter is drawn with nanosecond
// resolution.  Sequence numbers are period_index * offsets.size() + j.
std::vector<std::pair<SimTime, Frame>> emit(const StreamSpec& spec,
                                            std::uint64_t period_index,
                                            Rng& rng,
                                            StreamIndex stream_index = -1);

// Highest-priority periodic traffic occupying a link for `slot_length` per
// period.  A zero slot yields a spec without offsets, which emits nothing.
StreamSpec tdma_blocker(const std::string& id, SimTime period,
                        SimTime slot_length, const BitRate& link_rate,
                        const std::string& source,
                        const std::string& destination, int priority = 7);

// Runtime producer for one stream.  Production times are strictly
// increasing: a jittered frame that would not come after its predecessor is
// produced 1 ns after it.
class TrafficSource {
 public:
  TrafficSource(StreamSpec spec, StreamIndex index, std::uint64_t seed);

  const StreamSpec& spec() const { return spec_; }
  StreamIndex index() const { return index_; }

  bool exhausted() const { return spec_.offsets.empty(); }

  // Production time of the next frame.
  const SimTime& peek_time();
  Frame pop();

 private:
  void refill();

  StreamSpec spec_;
  StreamIndex index_;
  Rng rng_;
  std::uint64_t next_period_ = 0;
  std::deque<std::pair<SimTime, Frame>> buffered_;
  std::optional<SimTime> last_time_;
};

}  // namespace tsnsim

#endif  // TSNSIM_TRAFFIC_H_
