#include "tsnsim/frer.h"

#include <stdexcept>

namespace tsnsim {

std::vector<std::pair<PortId, Frame>> split(
    const Frame& frame, const std::vector<PortId>& members) {
  if (members.empty())
    throw std::invalid_argument("FRER split without member ports");
  std::vector<std::pair<PortId, Frame>> copies;
  copies.reserve(members.size());
  for (PortId port : members) copies.emplace_back(port, frame);
  return copies;
}

RecoveryState::RecoveryState(std::size_t window)
    : window_(window), seen_(window, 0) {
  if (window == 0)
    throw std::invalid_argument("recovery history window must be positive");
}

RecoveryVerdict RecoveryState::recover(std::uint64_t seq) {
  if (!any_ || seq > highest_) {
    // Slots between the old and the new highest number leave the window.
    std::uint64_t first = any_ ? highest_ + 1 : seq;
    if (seq - first >= window_) first = seq - window_ + 1;
    for (std::uint64_t s = first; s < seq; ++s) slot(s) = 0;
    any_ = true;
    highest_ = seq;
    slot(seq) = 1;
    ++forwarded_;
    return RecoveryVerdict::kForward;
  }
  if (highest_ - seq >= window_) {
    ++discarded_;
    return RecoveryVerdict::kDiscardOutOfWindow;
  }
  if (slot(seq)) {
    ++discarded_;
    return RecoveryVerdict::kDiscardDuplicate;
  }
  slot(seq) = 1;
  ++forwarded_;
  return RecoveryVerdict::kForward;
}

std::string to_string(LossPhase phase) {
  return phase == LossPhase::kDropFirst ? "drop-first" : "pass-first";
}

LossPhase parse_loss_phase(const std::string& text) {
  if (text == "drop-first") return LossPhase::kDropFirst;
  if (text == "pass-first") return LossPhase::kPassFirst;
  throw std::invalid_argument("unknown loss filter phase '" + text + "'");
}

bool LossFilter::pass() {
  if (!enabled_) return true;
  const bool even = seen_++ % 2 == 0;
  return phase_ == LossPhase::kDropFirst ? !even : even;
}

}  // namespace tsnsim
