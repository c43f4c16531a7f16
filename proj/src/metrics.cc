#include "tsnsim/metrics.h"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tsnsim {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kBounded: return "bounded";
    case Verdict::kUnbounded: return "unbounded";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kAmbiguous: return "ambiguous";
  }
  return "unknown";
}

Verdict parse_verdict(const std::string& text) {
  for (Verdict v : {Verdict::kBounded, Verdict::kUnbounded,
                    Verdict::kInconclusive, Verdict::kAmbiguous})
    if (to_string(v) == text) return v;
  throw std::invalid_argument("unknown verdict '" + text + "'");
}

BoundednessVerdict boundedness(const std::vector<LatencyRecord>& series,
                               const SimTime& horizon,
                               const BoundednessThresholds& thresholds) {
  BoundednessVerdict out;
  const SimTime half = horizon * Rational(1, 2);
  // Centre both axes on the first fitted point to keep the sums small.
  std::optional<SimTime> x0, y0;
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const LatencyRecord& r : series) {
    if (!r.is_delivered()) continue;
    const SimTime latency = r.latency();
    if (!out.min_latency || latency < *out.min_latency)
      out.min_latency = latency;
    if (!out.max_latency || latency > *out.max_latency)
      out.max_latency = latency;
    if (r.produced < half || r.produced > horizon) continue;
    if (!x0) {
      x0 = r.produced;
      y0 = latency;
    }
    const long double x = (r.produced - *x0).to_seconds_double();
    const long double y = (latency - *y0).to_seconds_double();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  out.fitted = n;
  if (n < thresholds.min_records || n < 2) return out;
  const long double denom = n * sxx - sx * sx;
  out.slope = denom > 0 ? static_cast<double>((n * sxy - sx * sy) / denom) : 0;
  if (out.slope < thresholds.bounded_slope)
    out.verdict = Verdict::kBounded;
  else if (out.slope > thresholds.unbounded_slope)
    out.verdict = Verdict::kUnbounded;
  else
    out.verdict = Verdict::kAmbiguous;
  return out;
}

Recorder::Recorder(std::vector<std::string> stream_names)
    : names_(std::move(stream_names)),
      counters_(names_.size()),
      delivered_seq_(names_.size()),
      highest_delivered_(names_.size()) {}

void Recorder::watch(NodeId node) {
  if (!watched(node)) watched_.emplace_back(node, Watched{});
}

Recorder::Watched* Recorder::watched(NodeId node) {
  for (auto& [id, w] : watched_)
    if (id == node) return &w;
  return nullptr;
}

bool Recorder::watching(NodeId node) const {
  for (const auto& [id, w] : watched_)
    if (id == node) return true;
  return false;
}

const std::vector<ArrivalRecord>& Recorder::arrivals(NodeId node) const {
  for (const auto& [id, w] : watched_)
    if (id == node) return w.arrivals;
  throw std::out_of_range("node is not watched");
}

const std::vector<AtsDecisionRecord>& Recorder::decisions(NodeId node) const {
  for (const auto& [id, w] : watched_)
    if (id == node) return w.decisions;
  throw std::out_of_range("node is not watched");
}

void Recorder::on_produced(const Frame& frame) {
  ++counters_[frame.stream].produced;
}

void Recorder::on_arrival(NodeId node, PortId port, const Frame& frame,
                          const SimTime& t) {
  if (Watched* w = watched(node))
    w->arrivals.push_back({frame.stream, frame.seq, port, t});
}

void Recorder::on_ats_decision(NodeId node, PortId port, const Frame& frame,
                               const SimTime& arrival,
                               const EligibilityDecision& decision) {
  if (Watched* w = watched(node))
    w->decisions.push_back({frame.stream, frame.seq, port, arrival,
                            decision.eligible, decision.eligibility_time});
}

void Recorder::on_delivered(NodeId, const Frame& frame, const SimTime& t) {
  auto& seen = delivered_seq_[frame.stream];
  if (seen.size() <= frame.seq) seen.resize(frame.seq + 1 + seen.size() / 2);
  if (seen[frame.seq])
    throw std::logic_error("stream '" + names_[frame.stream] + "' frame " +
                           std::to_string(frame.seq) + " delivered twice");
  seen[frame.seq] = 1;

  StreamCounters& c = counters_[frame.stream];
  ++c.delivered;
  auto& highest = highest_delivered_[frame.stream];
  if (highest && frame.seq < *highest) ++c.order_inversions;
  if (!highest || frame.seq > *highest) highest = frame.seq;

  records_.push_back(LatencyRecord{frame.stream, frame.seq, frame.produced, t,
                                   std::nullopt, frame.wire_time});
  if (keep_hops_) hops_.push_back({frame.stream, frame.seq, frame.trace});
}

void Recorder::on_dropped(NodeId, const Frame& frame, DropCause cause,
                          const SimTime&) {
  ++counters_[frame.stream].drops[static_cast<std::size_t>(cause)];
  if (cause == DropCause::kDuplicateEliminated) return;
  records_.push_back(LatencyRecord{frame.stream, frame.seq, frame.produced,
                                   std::nullopt, cause, frame.wire_time});
}

void Recorder::on_replicated(NodeId, const Frame& frame, std::size_t extra) {
  counters_[frame.stream].replicated += extra;
}

std::vector<LatencyRecord> Recorder::series(StreamIndex s) const {
  std::vector<LatencyRecord> out;
  for (const LatencyRecord& r : records_)
    if (r.stream == s) out.push_back(r);
  return out;
}

StreamSummary Recorder::summarize(StreamIndex s) const {
  StreamSummary out;
  out.stream = names_[s];
  out.counters = counters_[s];
  std::set<SimTime> distinct;
  for (const LatencyRecord& r : records_) {
    if (r.stream != s || !r.is_delivered()) continue;
    const SimTime latency = r.latency();
    if (!out.min_latency || latency < *out.min_latency)
      out.min_latency = latency;
    if (!out.max_latency || latency > *out.max_latency)
      out.max_latency = latency;
    if (distinct.size() <= 1000) distinct.insert(latency);
  }
  out.distinct_latencies = distinct.size();
  return out;
}

std::string format_ns(const SimTime& t) { return t.in_ns().decimal_str(); }

void write_csv(std::ostream& out, const Recorder& recorder) {
  out << kCsvHeader << '\n';
  for (const LatencyRecord& r : recorder.records()) {
    out << recorder.stream_names()[r.stream] << ',' << r.seq << ','
        << format_ns(r.produced) << ',';
    if (r.is_delivered())
      out << format_ns(*r.delivered) << ',' << format_ns(r.latency()) << ',';
    else
      out << ",," << to_string(*r.drop);
    out << '\n';
  }
}

void export_csv(const Recorder& recorder, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, recorder);
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace tsnsim
