#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsnsim/frer.h"

using namespace tsnsim;

namespace {

// Feeds (seq, path) arrivals through recovery and returns forwarded numbers.
std::vector<std::uint64_t> forwarded(
    RecoveryState& r, const std::vector<std::pair<std::uint64_t, char>>& in) {
  std::vector<std::uint64_t> out;
  for (const auto& [seq, path] : in)
    if (r.recover(seq) == RecoveryVerdict::kForward) out.push_back(seq);
  return out;
}

}  // namespace

TEST_SUITE("frer") {

TEST_CASE("split copies keep stream and sequence number") {
  Frame f;
  f.stream = 2;
  f.seq = 41;
  const auto copies = split(f, {3, 5});
  REQUIRE(copies.size() == 2);
  CHECK(copies[0].first == 3);
  CHECK(copies[1].first == 5);
  for (const auto& [port, c] : copies) {
    CHECK(c.stream == 2);
    CHECK(c.seq == 41);
  }
  CHECK(split(f, {7}).size() == 1);
  CHECK_THROWS_AS(split(f, {}), std::invalid_argument);
}

TEST_CASE("lost long-path copy reorders to 2, 1, 3") {
  RecoveryState r;
  // 1_l is lost; the rest arrive as 2_l, 1_h, 2_h, 3_l, 3_h.
  const auto out =
      forwarded(r, {{2, 'l'}, {1, 'h'}, {2, 'h'}, {3, 'l'}, {3, 'h'}});
  CHECK(out == std::vector<std::uint64_t>{2, 1, 3});
  CHECK(r.forwarded() == 3);
  CHECK(r.discarded() == 2);
}

TEST_CASE("simultaneous duplicates keep the first one") {
  RecoveryState r;
  CHECK(r.recover(0) == RecoveryVerdict::kForward);
  CHECK(r.recover(0) == RecoveryVerdict::kDiscardDuplicate);
}

TEST_CASE("distinct numbers from both paths are all forwarded") {
  RecoveryState r;
  CHECK(forwarded(r, {{1, 'l'}, {2, 's'}}) == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("recovery window") {
  RecoveryState r(4);
  CHECK(r.recover(10) == RecoveryVerdict::kForward);
  CHECK(r.recover(6) == RecoveryVerdict::kDiscardOutOfWindow);
  CHECK(r.recover(7) == RecoveryVerdict::kForward);
  CHECK(r.recover(7) == RecoveryVerdict::kDiscardDuplicate);
  // Jumping ahead clears the slots that left the window.
  CHECK(r.recover(13) == RecoveryVerdict::kForward);
  CHECK(r.recover(11) == RecoveryVerdict::kForward);
  CHECK(r.recover(10) == RecoveryVerdict::kDiscardDuplicate);
  CHECK(r.recover(200) == RecoveryVerdict::kForward);
  CHECK(r.recover(197) == RecoveryVerdict::kForward);
  CHECK(r.recover(196) == RecoveryVerdict::kDiscardOutOfWindow);
  CHECK_THROWS_AS(RecoveryState(0), std::invalid_argument);
}

TEST_CASE("recovery window matches a set-based model") {
  for (std::size_t window : {1u, 3u, 8u, 64u}) {
    RecoveryState r(window);
    std::vector<std::uint64_t> accepted;
    std::uint64_t highest = 0;
    bool any = false;
    std::uint64_t state = 12345;
    for (int i = 0; i < 5000; ++i) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      const std::uint64_t seq = (state >> 33) % 200 + i / 10;
      RecoveryVerdict want;
      if (!any || seq > highest)
        want = RecoveryVerdict::kForward;
      else if (highest - seq >= window)
        want = RecoveryVerdict::kDiscardOutOfWindow;
      else if (std::find(accepted.begin(), accepted.end(), seq) !=
               accepted.end())
        want = RecoveryVerdict::kDiscardDuplicate;
      else
        want = RecoveryVerdict::kForward;
      if (want == RecoveryVerdict::kForward) {
        accepted.push_back(seq);
        if (!any || seq > highest) highest = seq;
        any = true;
      }
      REQUIRE(r.recover(seq) == want);
    }
  }
}

TEST_CASE("loss filter drops every second frame") {
  LossFilter drop_first(LossPhase::kDropFirst);
  CHECK_FALSE(drop_first.pass());
  CHECK(drop_first.pass());
  CHECK_FALSE(drop_first.pass());
  CHECK(drop_first.pass());
  LossFilter pass_first(LossPhase::kPassFirst);
  CHECK(pass_first.pass());
  CHECK_FALSE(pass_first.pass());
  LossFilter off(LossPhase::kDropFirst, false);
  for (int i = 0; i < 4; ++i) CHECK(off.pass());
  CHECK(parse_loss_phase(to_string(LossPhase::kPassFirst)) ==
        LossPhase::kPassFirst);
  CHECK_THROWS_AS(parse_loss_phase("sometimes"), std::invalid_argument);
}

}  // TEST_SUITE
