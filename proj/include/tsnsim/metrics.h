// Latency records, drop accounting, boundedness detection and CSV export.

#ifndef TSNSIM_METRICS_H_
#define TSNSIM_METRICS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsnsim/frame.h"
#include "tsnsim/switch_node.h"
#include "tsnsim/units.h"

namespace tsnsim {

inline constexpr std::size_t kDropCauseCount = 5;

struct LatencyRecord {
  StreamIndex stream = -1;
  std::uint64_t seq = 0;
  SimTime produced;
  std::optional<SimTime> delivered;  // absent for drops
  std::optional<DropCause> drop;
  SimTime wire_time;  // serialization time along the path taken

  bool is_delivered() const { return delivered.has_value(); }
  SimTime latency() const { return *delivered - produced; }
};

struct ArrivalRecord {
  StreamIndex stream;
  std::uint64_t seq;
  PortId port;
  SimTime time;
};

struct AtsDecisionRecord {
  StreamIndex stream;
  std::uint64_t seq;
  PortId port;
  SimTime arrival;
  bool eligible;
  SimTime eligibility;
};

struct DeliveredTrace {
  StreamIndex stream;
  std::uint64_t seq;
  std::vector<HopRecord> hops;
};

enum class Verdict { kBounded, kUnbounded, kInconclusive, kAmbiguous };

std::string to_string(Verdict verdict);
Verdict parse_verdict(const std::string& text);

struct BoundednessThresholds {
  double bounded_slope = 1e-4;    // seconds of latency per second of run
  double unbounded_slope = 1e-2;
  std::size_t min_records = 100;

  friend bool operator==(const BoundednessThresholds&,
                         const BoundednessThresholds&) = default;
};

struct BoundednessVerdict {
  Verdict verdict = Verdict::kInconclusive;
  double slope = 0;  // least-squares latency slope, s/s
  std::size_t fitted = 0;
  std::optional<SimTime> min_latency;
  std::optional<SimTime> max_latency;
};

// Fits latency against production time over delivered records produced in
// [horizon / 2, horizon].  Ambiguous means the slope fell between the two
// thresholds.
BoundednessVerdict boundedness(const std::vector<LatencyRecord>& series,
                               const SimTime& horizon,
                               const BoundednessThresholds& thresholds = {});

struct StreamCounters {
  std::uint64_t produced = 0;
  std::uint64_t replicated = 0;  // extra copies created by splits
  std::uint64_t delivered = 0;
  std::uint64_t order_inversions = 0;
  std::array<std::uint64_t, kDropCauseCount> drops{};

  std::uint64_t dropped(DropCause cause) const {
    return drops[static_cast<std::size_t>(cause)];
  }
};

struct StreamSummary {
  std::string stream;
  StreamCounters counters;
  std::optional<SimTime> min_latency;
  std::optional<SimTime> max_latency;
  std::size_t distinct_latencies = 0;
};

// Observer collecting everything the run report needs.
class Recorder : public NetworkObserver {
 public:
  explicit Recorder(std::vector<std::string> stream_names);

  // Arrivals and ATS decisions are kept only for watched nodes.
  void watch(NodeId node);
  void keep_hop_traces(bool on) { keep_hops_ = on; }

  void on_produced(const Frame& frame);

  void on_arrival(NodeId node, PortId port, const Frame& frame,
                  const SimTime& t) override;
  void on_ats_decision(NodeId node, PortId port, const Frame& frame,
                       const SimTime& arrival,
                       const EligibilityDecision& decision) override;
  void on_delivered(NodeId node, const Frame& frame,
                    const SimTime& t) override;
  void on_dropped(NodeId node, const Frame& frame, DropCause cause,
                  const SimTime& t) override;
  void on_replicated(NodeId node, const Frame& frame,
                     std::size_t extra) override;

  const std::vector<std::string>& stream_names() const { return names_; }
  // Delivery and non-elimination drop records in event order.
  const std::vector<LatencyRecord>& records() const { return records_; }
  const StreamCounters& counters(StreamIndex s) const { return counters_[s]; }
  const std::vector<ArrivalRecord>& arrivals(NodeId node) const;
  const std::vector<AtsDecisionRecord>& decisions(NodeId node) const;
  bool watching(NodeId node) const;
  const std::vector<DeliveredTrace>& hop_traces() const { return hops_; }

  // Records of one stream, in event order.
  std::vector<LatencyRecord> series(StreamIndex s) const;
  StreamSummary summarize(StreamIndex s) const;

 private:
  struct Watched {
    std::vector<ArrivalRecord> arrivals;
    std::vector<AtsDecisionRecord> decisions;
  };
  Watched* watched(NodeId node);

  std::vector<std::string> names_;
  std::vector<StreamCounters> counters_;
  std::vector<std::vector<char>> delivered_seq_;
  std::vector<std::optional<std::uint64_t>> highest_delivered_;
  std::vector<LatencyRecord> records_;
  std::vector<std::pair<NodeId, Watched>> watched_;
  bool keep_hops_ = false;
  std::vector<DeliveredTrace> hops_;
};

// Integer nanoseconds when exact, else an exact decimal, else "n/d" ns.
std::string format_ns(const SimTime& t);

inline constexpr const char* kCsvHeader =
    "stream_id,seq,produced_ns,delivered_ns,latency_ns,drop_cause";

void write_csv(std::ostream& out, const Recorder& recorder);
// Throws std::runtime_error when the file cannot be written.
void export_csv(const Recorder& recorder, const std::string& path);

}  // namespace tsnsim

#endif  // TSNSIM_METRICS_H_
