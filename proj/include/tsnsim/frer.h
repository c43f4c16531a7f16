// Frame replication and elimination: splitting tagged frames over member
// paths, first-seen-wins recovery, and the deterministic every-second-frame
// loss filter.

#ifndef TSNSIM_FRER_H_
#define TSNSIM_FRER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsnsim/frame.h"

namespace tsnsim {

// One copy of `frame` per member port; copies keep stream and sequence
// number.  Throws std::invalid_argument for an empty member list.
std::vector<std::pair<PortId, Frame>> split(const Frame& frame,
                                            const std::vector<PortId>& members);

enum class RecoveryVerdict { kForward, kDiscardDuplicate, kDiscardOutOfWindow };

// Per-stream history of accepted sequence numbers.  Numbers more than
// `window` behind the highest one seen are discarded without lookup.
class RecoveryState {
 public:
  static constexpr std::size_t kDefaultWindow = 64;

  explicit RecoveryState(std::size_t window = kDefaultWindow);

  RecoveryVerdict recover(std::uint64_t seq);

  std::size_t window() const { return window_; }
  std::uint64_t forwarded() const { return forwarded_; }
  std::uint64_t discarded() const { return discarded_; }

 private:
  char& slot(std::uint64_t seq) { return seen_[seq % window_]; }

  std::size_t window_;
  std::vector<char> seen_;
  bool any_ = false;
  std::uint64_t highest_ = 0;
  std::uint64_t forwarded_ = 0;
  std::uint64_t discarded_ = 0;
};

enum class LossPhase { kDropFirst, kPassFirst };

std::string to_string(LossPhase phase);
LossPhase parse_loss_phase(const std::string& text);

// Drops every second frame it sees, starting per `phase`.
class LossFilter {
 public:
  explicit LossFilter(LossPhase phase = LossPhase::kDropFirst,
                      bool enabled = true)
      : phase_(phase), enabled_(enabled) {}

  // True when the frame passes.
  bool pass();

  std::uint64_t seen() const { return seen_; }

 private:
  LossPhase phase_;
  bool enabled_;
  std::uint64_t seen_ = 0;
};

}  // namespace tsnsim

#endif  // TSNSIM_FRER_H_
