// Reference shaper on a 1 ns grid and a randomized comparison against
// assign_eligibility.  Tokens are accumulated step by step in millibits, so
// every oracle quantity stays an integer.

#ifndef TSNSIM_TESTS_ATS_ORACLE_H_
#define TSNSIM_TESTS_ATS_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tsnsim/ats.h"

namespace tsnsim::oracle {

struct Bucket {
  std::int64_t cir_mbps;
  std::int64_t cbs_mbits;
  std::int64_t level_mbits;
  std::int64_t at_ns = 0;

  void advance_to(std::int64_t t) {
    for (; at_ns < t; ++at_ns) {
      if (level_mbits == cbs_mbits) {
        at_ns = t;
        break;
      }
      level_mbits = std::min(cbs_mbits, level_mbits + cir_mbps);
    }
  }
};

// Eligibility in ns, or nullopt for a drop.
inline std::optional<std::int64_t> assign(Bucket& b,
                                          std::optional<std::int64_t>& group,
                                          std::optional<std::int64_t> mrt_ns,
                                          std::int64_t arrival,
                                          std::int64_t size) {
  Bucket probe = b;
  std::int64_t t = std::max({arrival, group.value_or(arrival), probe.at_ns});
  probe.advance_to(t);
  while (probe.level_mbits < size * 1000) probe.advance_to(++t);
  if (mrt_ns && t - arrival > *mrt_ns) return std::nullopt;
  probe.level_mbits -= size * 1000;
  b = probe;
  group = t;
  return t;
}

struct Report {
  std::size_t sequences = 0;
  std::size_t frames = 0;
  std::size_t drops = 0;
  std::size_t mismatches = 0;
  std::size_t level_violations = 0;
  std::size_t group_regressions = 0;
  std::size_t rate_violations = 0;
  std::string first_problem;

  bool ok() const {
    return mismatches == 0 && level_violations == 0 &&
           group_regressions == 0 && rate_violations == 0;
  }
};

// Random groups of one to three schedulers sharing a group and an optional
// mrt, each fed `frames` arrivals.
inline Report compare(std::size_t sequences, std::size_t frames,
                      std::uint64_t seed) {
  // cir values for which cir * 1 ns divides one bit.
  const std::int64_t rates[] = {100, 125, 200, 250, 500, 1000};
  std::mt19937_64 rng(seed);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Report rep;
  auto problem = [&](std::size_t& counter, const std::string& what) {
    if (counter++ == 0 && rep.first_problem.empty()) rep.first_problem = what;
  };
  for (std::size_t run = 0; run < sequences; ++run) {
    ++rep.sequences;
    const int n = static_cast<int>(pick(1, 3));
    std::vector<AtsScheduler> sched;
    std::vector<Bucket> ref;
    for (int k = 0; k < n; ++k) {
      const std::int64_t cir = rates[pick(0, 5)];
      const std::int64_t cbs = pick(500, 3000);
      sched.emplace_back(AtsSchedulerConfig{BitRate::mbps(cir), cbs});
      ref.push_back({cir, cbs * 1000, cbs * 1000});
    }
    std::optional<std::int64_t> mrt_ns;
    if (pick(0, 1)) mrt_ns = pick(0, 20000);
    SchedulerGroup group(mrt_ns ? OptionalTime(SimTime::ns(*mrt_ns))
                                : std::nullopt);
    std::optional<std::int64_t> ref_group;
    std::optional<SimTime> last_group;

    struct Released {
      SimTime at;
      std::int64_t bits;
    };
    std::vector<std::vector<Released>> released(n);
    std::int64_t arrival = pick(0, 5000);
    for (std::size_t f = 0; f < frames; ++f) {
      ++rep.frames;
      arrival += pick(0, 8000);
      const int k = static_cast<int>(pick(0, n - 1));
      const std::int64_t size = pick(64, sched[k].config().cbs_bits);
      const auto got =
          assign_eligibility(sched[k], group, SimTime::ns(arrival), size);
      const auto want = assign(ref[k], ref_group, mrt_ns, arrival, size);
      if (got.eligible != want.has_value() ||
          (want && got.eligibility_time != SimTime::ns(*want))) {
        std::ostringstream msg;
        msg << "sequence " << run << " frame " << f << ": shaper "
            << (got.eligible ? got.eligibility_time.str() : "drop")
            << ", oracle " << (want ? std::to_string(*want) + "ns" : "drop");
        problem(rep.mismatches, msg.str());
        break;
      }
      if (!got.eligible) {
        ++rep.drops;
        continue;
      }
      const Rational level = sched[k].token_level(got.eligibility_time);
      if (level > Rational(sched[k].config().cbs_bits) || level.is_negative())
        problem(rep.level_violations,
                "token level " + level.str() + " outside [0, cbs]");
      if (last_group && *group.eligibility_time() < *last_group)
        problem(rep.group_regressions, "group eligibility time went back");
      last_group = group.eligibility_time();
      released[k].push_back({got.eligibility_time, size});
    }
    for (int k = 0; k < n; ++k) {
      const auto& e = released[k];
      for (std::size_t i = 0; i < e.size(); ++i) {
        Rational bits(0);
        for (std::size_t j = i; j < e.size(); ++j) {
          bits += Rational(e[j].bits);
          const Rational bound =
              Rational(sched[k].config().cbs_bits) +
              bits_over(sched[k].config().cir, e[j].at - e[i].at);
          if (bits > bound)
            problem(rep.rate_violations,
                    "released " + bits.str() + " bits over a window allowing " +
                        bound.str());
        }
      }
    }
  }
  return rep;
}

}  // namespace tsnsim::oracle

#endif  // TSNSIM_TESTS_ATS_ORACLE_H_
