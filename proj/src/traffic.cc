#include "tsnsim/traffic.h"

#include <limits>
#include <stdexcept>

namespace tsnsim {

void validate(const StreamSpec& spec) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("stream '" + spec.id + "': " + what);
  };
  if (spec.id.empty()) throw std::invalid_argument("stream without id");
  if (spec.offsets.empty()) return;
  if (spec.frame_size_bits <= 0) fail("frame size must be positive");
  if (!(spec.period > SimTime())) fail("period must be positive");
  if (spec.phase.is_negative()) fail("phase must not be negative");
  if (spec.jitter_bound.is_negative()) fail("jitter bound must not be negative");
  for (std::size_t i = 0; i < spec.offsets.size(); ++i) {
    if (spec.offsets[i].is_negative()) fail("negative emission offset");
    if (!(spec.offsets[i] < spec.period))
      fail("emission offset " + spec.offsets[i].str() +
           " not below the period " + spec.period.str());
    if (i > 0 && !(spec.offsets[i - 1] < spec.offsets[i]))
      fail("emission offsets must be strictly increasing");
  }
}

AdversarialStreams expand_adversarial(const AdversarialSpec& spec) {
  const SimTime& i = spec.spacing;
  if (!(spec.period < i * 3))
    throw std::invalid_argument(
        "adversarial sequence needs T < 3I (T=" + spec.period.str() +
        ", I=" + i.str() + ")");
  const SimTime red1 = spec.red_offset_after_blue;
  const SimTime orange1 = red1 + i + spec.orange_offset_after_red2;

  auto make = [&](const std::string& id, const SimTime& first) {
    StreamSpec s;
    s.id = id;
    s.frame_size_bits = spec.frame_size_bits;
    s.priority = spec.priority;
    s.period = spec.period;
    s.phase = spec.blue_start;
    s.offsets = {first, first + i};
    validate(s);
    return s;
  };
  return {make("blue", SimTime()), make("red", red1),
          make("orange", orange1)};
}

std::uint64_t uniform_below_inclusive(Rng& rng, std::uint64_t bound) {
  if (bound == std::numeric_limits<std::uint64_t>::max()) return rng();
  const std::uint64_t range = bound + 1;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % range;
}

std::vector<std::pair<SimTime, Frame>> emit(const StreamSpec& spec,
                                            std::uint64_t period_index,
                                            Rng& rng,
                                            StreamIndex stream_index) {
  std::vector<std::pair<SimTime, Frame>> out;
  out.reserve(spec.offsets.size());
  const SimTime base =
      spec.phase + spec.period * Rational(static_cast<std::int64_t>(period_index));
  const std::int64_t jitter_ns = spec.jitter_bound.in_ns().floor();
  for (std::size_t j = 0; j < spec.offsets.size(); ++j) {
    SimTime t = base + spec.offsets[j];
    if (jitter_ns > 0)
      t += SimTime::ns(static_cast<std::int64_t>(
          uniform_below_inclusive(rng, static_cast<std::uint64_t>(jitter_ns))));
    Frame f;
    f.stream = stream_index;
    f.seq = period_index * spec.offsets.size() + j;
    f.size_bits = spec.frame_size_bits;
    f.priority = spec.priority;
    f.produced = t;
    out.emplace_back(t, std::move(f));
  }
  return out;
}

StreamSpec tdma_blocker(const std::string& id, SimTime period,
                        SimTime slot_length, const BitRate& link_rate,
                        const std::string& source,
                        const std::string& destination, int priority) {
  StreamSpec s;
  s.id = id;
  s.priority = priority;
  s.period = period;
  s.source = source;
  s.destination = destination;
  if (slot_length.is_zero()) return s;
  if (!(slot_length < period))
    throw std::invalid_argument("TDMA slot must be shorter than its period");
  Rational bits = bits_over(link_rate, slot_length);
  if (!bits.is_integer())
    throw std::invalid_argument("TDMA slot " + slot_length.str() +
                                " is not a whole number of bits at " +
                                link_rate.str());
  s.frame_size_bits = bits.num();
  s.offsets = {SimTime()};
  return s;
}

TrafficSource::TrafficSource(StreamSpec spec, StreamIndex index,
                             std::uint64_t seed)
    : spec_(std::move(spec)), index_(index), rng_(seed) {}

void TrafficSource::refill() {
  while (buffered_.empty()) {
    auto frames = emit(spec_, next_period_++, rng_, index_);
    for (auto& entry : frames) {
      if (last_time_ && !(*last_time_ < entry.first)) {
        entry.first = *last_time_ + SimTime::ns(1);
        entry.second.produced = entry.first;
      }
      last_time_ = entry.first;
      buffered_.push_back(std::move(entry));
    }
  }
}

const SimTime& TrafficSource::peek_time() {
  refill();
  return buffered_.front().first;
}

Frame TrafficSource::pop() {
  refill();
  Frame f = std::move(buffered_.front().second);
  buffered_.pop_front();
  return f;
}

}  // namespace tsnsim
