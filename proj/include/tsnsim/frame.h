#ifndef TSNSIM_FRAME_H_
#define TSNSIM_FRAME_H_

#include <cstdint>
#include <vector>

#include "tsnsim/units.h"

namespace tsnsim {

using StreamIndex = int;
using NodeId = int;
using PortId = int;

// Ingress "port" of frames produced by the node itself.
inline constexpr PortId kLocalPort = -1;

struct HopRecord {
  NodeId node = -1;
  PortId ingress = kLocalPort;
  SimTime arrival;
  SimTime eligibility;
  SimTime departure;
};

// One copy of a frame in flight.  All FRER replicas of one produced frame
// share (stream, seq).
struct Frame {
  StreamIndex stream = -1;
  std::uint64_t seq = 0;
  std::int64_t size_bits = 0;
  int priority = 0;
  SimTime produced;
  // Sum of the serialization times of all hops taken so far; a lower bound
  // for the end-to-end latency.
  SimTime wire_time;
  std::vector<HopRecord> trace;  // only filled when tracing is enabled
};

}  // namespace tsnsim

#endif  // TSNSIM_FRAME_H_
