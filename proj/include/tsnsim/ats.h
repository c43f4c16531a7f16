// Asynchronous Traffic Shaper: per-stream token buckets that assign
// eligibility times, grouped into scheduler groups sharing a group
// eligibility time and a maximum residence time.

#ifndef TSNSIM_ATS_H_
#define TSNSIM_ATS_H_

#include <cstdint>
#include <optional>

#include "tsnsim/units.h"

namespace tsnsim {

struct AtsSchedulerConfig {
  BitRate cir;                  // committed information rate
  std::int64_t cbs_bits = 0;    // committed burst size

  friend bool operator==(const AtsSchedulerConfig&,
                         const AtsSchedulerConfig&) = default;
};

// Token state is kept as the instant at which the bucket was (or will be)
// empty, so that level(t) = min(cbs, cir * (t - bucket_empty_time)) is exact
// at any rational t.  A new scheduler starts with a full bucket.
class AtsScheduler {
 public:
  explicit AtsScheduler(AtsSchedulerConfig config);

  const AtsSchedulerConfig& config() const { return config_; }
  const SimTime& bucket_empty_time() const { return bucket_empty_time_; }

  // Token level in bits at `t`; pure observation.
  Rational token_level(const SimTime& t) const;

  // Earliest instant at which the level reaches `size_bits`.
  SimTime ready_time(std::int64_t size_bits) const;

  // Deducts `size_bits` tokens effective at `at`.
  void consume(const SimTime& at, std::int64_t size_bits);

 private:
  AtsSchedulerConfig config_;
  SimTime bucket_empty_time_;
};

class SchedulerGroup {
 public:
  explicit SchedulerGroup(OptionalTime mrt = std::nullopt) : mrt_(mrt) {}

  const OptionalTime& mrt() const { return mrt_; }
  // Most recent eligibility time assigned in this group, if any.
  const std::optional<SimTime>& eligibility_time() const {
    return eligibility_time_;
  }
  void set_eligibility_time(const SimTime& t) { eligibility_time_ = t; }

 private:
  OptionalTime mrt_;
  std::optional<SimTime> eligibility_time_;
};

struct EligibilityDecision {
  bool eligible = false;
  SimTime eligibility_time;  // meaningful only when eligible

  static EligibilityDecision eligible_at(const SimTime& t) { return {true, t}; }
  static EligibilityDecision dropped() { return {false, SimTime()}; }
};

// Candidate = max(arrival, token ready time, group eligibility time).  A
// candidate more than mrt after arrival drops the frame and leaves all state
// untouched; otherwise the tokens are deducted at the candidate instant and
// the group eligibility time advances to it.
//
// Throws std::logic_error when frame_size_bits exceeds the scheduler's cbs.
EligibilityDecision assign_eligibility(AtsScheduler& scheduler,
                                       SchedulerGroup& group,
                                       const SimTime& arrival,
                                       std::int64_t frame_size_bits);

}  // namespace tsnsim

#endif  // TSNSIM_ATS_H_
