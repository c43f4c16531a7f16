#include "tsnsim/ats.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tsnsim {

AtsScheduler::AtsScheduler(AtsSchedulerConfig config)
    : config_(std::move(config)) {
  if (config_.cbs_bits <= 0)
    throw std::invalid_argument("ATS cbs must be positive");
  if (!(config_.cir.bits_per_second() > Rational(0)))
    throw std::invalid_argument("ATS cir must be positive");
  bucket_empty_time_ =
      SimTime() - time_for_bits(Rational(config_.cbs_bits), config_.cir);
}

Rational AtsScheduler::token_level(const SimTime& t) const {
  return min(Rational(config_.cbs_bits),
             bits_over(config_.cir, t - bucket_empty_time_));
}

SimTime AtsScheduler::ready_time(std::int64_t size_bits) const {
  return bucket_empty_time_ + time_for_bits(Rational(size_bits), config_.cir);
}

void AtsScheduler::consume(const SimTime& at, std::int64_t size_bits) {
  Rational remaining = token_level(at) - Rational(size_bits);
  bucket_empty_time_ = at - time_for_bits(remaining, config_.cir);
}

EligibilityDecision assign_eligibility(AtsScheduler& scheduler,
                                       SchedulerGroup& group,
                                       const SimTime& arrival,
                                       std::int64_t frame_size_bits) {
  if (frame_size_bits > scheduler.config().cbs_bits)
    throw std::logic_error("frame of " + std::to_string(frame_size_bits) +
                           " bits exceeds cbs of " +
                           std::to_string(scheduler.config().cbs_bits));
  SimTime candidate = std::max(arrival, scheduler.ready_time(frame_size_bits));
  if (group.eligibility_time() && candidate < *group.eligibility_time())
    candidate = *group.eligibility_time();
  if (group.mrt() && candidate - arrival > *group.mrt())
    return EligibilityDecision::dropped();
  scheduler.consume(candidate, frame_size_bits);
  group.set_eligibility_time(candidate);
  return EligibilityDecision::eligible_at(candidate);
}

}  // namespace tsnsim
