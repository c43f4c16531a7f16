#include <doctest.h>

#include <sstream>

#include "tsnsim/metrics.h"

using namespace tsnsim;

namespace {

Frame frame(std::uint64_t seq, const SimTime& produced) {
  Frame f;
  f.stream = 0;
  f.seq = seq;
  f.produced = produced;
  return f;
}

std::vector<LatencyRecord> series(double slope, int n) {
  std::vector<LatencyRecord> out;
  for (int i = 0; i < n; ++i) {
    LatencyRecord r;
    r.produced = SimTime::us(10 * i);
    const SimTime base = SimTime::us(80);
    r.delivered = r.produced + base +
                  SimTime::ns(static_cast<std::int64_t>(slope * 10000 * i));
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("delivery records the latency") {
  Recorder rec({"s"});
  rec.on_produced(frame(0, SimTime()));
  rec.on_delivered(0, frame(0, SimTime()), SimTime::us(80));
  REQUIRE(rec.records().size() == 1);
  CHECK(rec.records()[0].latency() == SimTime::us(80));
  const StreamSummary s = rec.summarize(0);
  CHECK(*s.min_latency == SimTime::us(80));
  CHECK(s.counters.delivered == 1);
}

TEST_CASE("shaper drops produce a record without latency") {
  Recorder rec({"s"});
  rec.on_produced(frame(0, SimTime()));
  rec.on_dropped(0, frame(0, SimTime()), DropCause::kShaperMrt, SimTime::us(5));
  REQUIRE(rec.records().size() == 1);
  CHECK_FALSE(rec.records()[0].is_delivered());
  CHECK(*rec.records()[0].drop == DropCause::kShaperMrt);
  const StreamSummary s = rec.summarize(0);
  CHECK_FALSE(s.min_latency);
  CHECK_FALSE(s.max_latency);
  CHECK(s.counters.dropped(DropCause::kShaperMrt) == 1);
}

TEST_CASE("eliminated duplicates are counted but not recorded") {
  Recorder rec({"s"});
  rec.on_dropped(3, frame(0, SimTime()), DropCause::kDuplicateEliminated,
                 SimTime::us(5));
  CHECK(rec.records().empty());
  CHECK(rec.counters(0).dropped(DropCause::kDuplicateEliminated) == 1);
}

TEST_CASE("a second delivery of the same frame is a logic error") {
  Recorder rec({"s"});
  rec.on_delivered(0, frame(4, SimTime()), SimTime::us(1));
  CHECK_THROWS_AS(rec.on_delivered(0, frame(4, SimTime()), SimTime::us(2)),
                  std::logic_error);
}

TEST_CASE("order inversions are counted at the sink") {
  Recorder rec({"s"});
  for (std::uint64_t seq : {2, 1, 3, 0})
    rec.on_delivered(0, frame(seq, SimTime()), SimTime::us(1));
  CHECK(rec.counters(0).order_inversions == 2);
}

TEST_CASE("constant series is bounded with zero slope") {
  const auto v = boundedness(series(0, 1000), SimTime::ms(10));
  CHECK(v.verdict == Verdict::kBounded);
  CHECK(v.slope == doctest::Approx(0).epsilon(1e-12));
  CHECK(v.fitted == 500);
}

TEST_CASE("growing series is unbounded with the fitted slope") {
  const auto v = boundedness(series(10.0 / 140, 1000), SimTime::ms(10));
  CHECK(v.verdict == Verdict::kUnbounded);
  CHECK(v.slope == doctest::Approx(10.0 / 140).epsilon(1e-3));
}

TEST_CASE("slopes between the thresholds are ambiguous") {
  const auto v = boundedness(series(1e-3, 1000), SimTime::ms(10));
  CHECK(v.verdict == Verdict::kAmbiguous);
}

TEST_CASE("too few records are inconclusive") {
  const auto v = boundedness(series(0, 50), SimTime::us(500));
  CHECK(v.verdict == Verdict::kInconclusive);
}

TEST_CASE("verdict names round-trip") {
  for (Verdict v : {Verdict::kBounded, Verdict::kUnbounded,
                    Verdict::kInconclusive, Verdict::kAmbiguous})
    CHECK(parse_verdict(to_string(v)) == v);
  CHECK_THROWS(parse_verdict("maybe"));
}

TEST_CASE("empty run exports a header-only CSV") {
  Recorder rec({"s"});
  std::ostringstream out;
  write_csv(out, rec);
  CHECK(out.str() == std::string(kCsvHeader) + "\n");
}

TEST_CASE("CSV rows carry exact decimal times") {
  Recorder rec({"video"});
  const SimTime p = SimTime::us(Rational(750, 11));
  rec.on_delivered(0, frame(1, p), p + SimTime::us(48));
  rec.on_dropped(0, frame(2, p * Rational(2)), DropCause::kShaperMrt, p);
  std::ostringstream out;
  write_csv(out, rec);
  CHECK(out.str() == std::string(kCsvHeader) +
                         "\nvideo,1,68181.(81),116181.(81),48000,"
                         "\nvideo,2,136363.(63),,,shaper-mrt\n");
}

}  // TEST_SUITE
