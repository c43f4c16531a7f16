#include "tsnsim/runner.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "tsnsim/kernel.h"
#include "tsnsim/switch_node.h"
#include "tsnsim/traffic.h"

namespace tsnsim {

namespace {

void log_event(std::ostream& out, const Event& e) {
  out << format_ns(e.fire_time) << ' ' << e.insertion_index << ' ';
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FrameArrival>)
          out << "arrival " << p.node << ':' << p.port << ' ' << p.frame.stream
              << '#' << p.frame.seq;
        else if constexpr (std::is_same_v<T, TransmissionComplete>)
          out << "tx-done " << p.node << ':' << p.port;
        else if constexpr (std::is_same_v<T, EmissionDue>)
          out << "emit " << p.source;
        else
          out << "eligible " << p.node << ':' << p.port;
      },
      e.payload);
  out << '\n';
}

AssertionResult check_order(const ScenarioConfig& config,
                            const Materialized& m, const Recorder& rec,
                            const OrderAssertion& a) {
  AssertionResult out;
  out.name = "arrival-order@" + a.node;
  std::map<std::string, StreamIndex> index;
  for (std::size_t i = 0; i < m.streams.size(); ++i)
    index[m.streams[i].id] = static_cast<StreamIndex>(i);
  std::set<StreamIndex> wanted;
  for (const auto& [stream, k] : a.expected) wanted.insert(index.at(stream));

  std::vector<const ArrivalRecord*> seen;
  for (const ArrivalRecord& r : rec.arrivals(m.node_ids.at(a.node)))
    if (wanted.contains(r.stream)) seen.push_back(&r);
  const std::size_t n = a.expected.size();
  const std::size_t periods = seen.size() / n;
  if (periods == 0) {
    out.detail = "no complete period observed";
    return out;
  }
  for (std::size_t p = 0; p < periods; ++p) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& [stream, k] = a.expected[j];
      const StreamIndex s = index.at(stream);
      const std::uint64_t per = m.streams[s].offsets.size();
      const std::uint64_t seq = p * per + static_cast<std::uint64_t>(k);
      const ArrivalRecord& got = *seen[p * n + j];
      if (got.stream != s || got.seq != seq) {
        std::ostringstream msg;
        msg << "period " << p << " position " << j << ": expected " << stream
            << '#' << seq << ", got " << m.streams[got.stream].id << '#'
            << got.seq << " at " << format_ns(got.time) << " ns";
        out.detail = msg.str();
        return out;
      }
    }
  }
  (void)config;
  out.passed = true;
  out.detail = std::to_string(periods) + " periods in order";
  return out;
}

}  // namespace

bool RunResult::passed() const {
  for (const AssertionResult& a : assertions)
    if (!a.passed) return false;
  return true;
}

StreamIndex RunResult::stream_index(const std::string& id) const {
  for (std::size_t i = 0; i < materialized.streams.size(); ++i)
    if (materialized.streams[i].id == id) return static_cast<StreamIndex>(i);
  throw std::out_of_range("unknown stream '" + id + "'");
}

NodeId RunResult::node_id(const std::string& name) const {
  auto it = materialized.node_ids.find(name);
  if (it == materialized.node_ids.end())
    throw std::out_of_range("unknown node '" + name + "'");
  return it->second;
}

std::uint64_t stream_seed(std::uint64_t run_seed, StreamIndex stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed),
                    static_cast<std::uint32_t>(run_seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t(words[0]) << 32) | words[1];
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  RunResult result;
  result.config = config;
  result.materialized = materialize(config);
  const Materialized& m = result.materialized;

  std::vector<std::string> names;
  for (const StreamSpec& s : m.streams) names.push_back(s.id);
  result.recorder = std::make_unique<Recorder>(names);
  Recorder& rec = *result.recorder;
  rec.keep_hop_traces(options.trace);
  if (options.trace)
    for (const auto& [name, id] : m.node_ids) rec.watch(id);
  for (const std::string& n : options.watch_nodes) rec.watch(m.node_ids.at(n));
  for (const OrderAssertion& a : config.assertions.arrival_order)
    rec.watch(m.node_ids.at(a.node));

  Simulator sim;
  Network net(m.network, sim, rec, options.trace);
  std::vector<TrafficSource> sources;
  for (std::size_t i = 0; i < m.streams.size(); ++i) {
    const auto index = static_cast<StreamIndex>(i);
    sources.emplace_back(m.streams[i], index, stream_seed(config.seed, index));
  }
  const SimTime horizon = config.duration;
  auto arm = [&](std::size_t i) {
    TrafficSource& src = sources[i];
    if (!src.exhausted() && src.peek_time() <= horizon)
      sim.schedule(src.peek_time(), EmissionDue{i});
  };
  for (std::size_t i = 0; i < sources.size(); ++i) arm(i);

  result.events = sim.run(horizon, [&](Event& e) {
    if (options.event_log) log_event(*options.event_log, e);
    if (auto* due = std::get_if<EmissionDue>(&e.payload)) {
      Frame frame = sources[due->source].pop();
      rec.on_produced(frame);
      net.inject(m.sources[due->source], std::move(frame));
      arm(due->source);
    } else {
      net.handle(e);
    }
  });

  std::vector<std::uint64_t> in_flight(m.streams.size(), 0);
  net.for_each_queued([&](const Frame& f) { ++in_flight[f.stream]; });
  sim.for_each_pending([&](const Event& e) {
    if (auto* a = std::get_if<FrameArrival>(&e.payload))
      ++in_flight[a->frame.stream];
  });

  std::vector<std::string> unconserved;
  for (std::size_t i = 0; i < m.streams.size(); ++i) {
    const auto s = static_cast<StreamIndex>(i);
    StreamReport report;
    report.summary = rec.summarize(s);
    report.verdict = boundedness(rec.series(s), horizon, config.thresholds);
    report.in_flight = in_flight[i];
    const StreamCounters& c = report.summary.counters;
    std::uint64_t out = c.delivered + report.in_flight;
    for (std::uint64_t d : c.drops) out += d;
    report.conserved = c.produced + c.replicated == out;
    if (!report.conserved) unconserved.push_back(m.streams[i].id);
    result.streams.push_back(std::move(report));
  }

  {
    AssertionResult a;
    a.name = "conservation";
    a.passed = unconserved.empty();
    a.detail = a.passed ? "produced + replicated = delivered + dropped + "
                          "eliminated + in flight for every stream"
                        : "violated for:";
    for (const std::string& s : unconserved) a.detail += " " + s;
    result.assertions.push_back(a);
  }
  for (const OrderAssertion& a : config.assertions.arrival_order)
    result.assertions.push_back(check_order(config, m, rec, a));
  for (const auto& [stream, expected] : config.assertions.boundedness) {
    const BoundednessVerdict& v = result.stream(stream).verdict;
    AssertionResult a;
    a.name = "boundedness:" + stream;
    a.passed = v.verdict == expected;
    std::ostringstream msg;
    msg << "expected " << to_string(expected) << ", got "
        << to_string(v.verdict) << " (slope " << v.slope << " s/s over "
        << v.fitted << " frames)";
    a.detail = msg.str();
    result.assertions.push_back(a);
  }
  // Slopes between the thresholds fail the run even without an expectation.
  for (std::size_t i = 0; i < m.streams.size(); ++i) {
    const StreamReport& r = result.streams[i];
    if (r.verdict.verdict != Verdict::kAmbiguous) continue;
    if (config.assertions.boundedness.contains(m.streams[i].id)) continue;
    std::ostringstream msg;
    msg << "slope " << r.verdict.slope
        << " s/s lies between the bounded and unbounded thresholds";
    result.assertions.push_back(
        {"boundedness:" + m.streams[i].id, false, msg.str()});
  }
  return result;
}

nlohmann::ordered_json summary_json(const RunResult& r) {
  using nlohmann::ordered_json;
  const ScenarioConfig& c = r.config;
  ordered_json j;
  j["scenario"] = c.name;
  j["case"] = c.case_id;
  j["solutions"] = c.solutions;
  j["seed"] = c.seed;
  j["duration"] = c.duration.str();
  j["events"] = r.events;
  j["ats_placement"] = placement_name(c.ats);
  j["grouping"] = to_string(c.ats.grouping);
  j["passed"] = r.passed();

  ordered_json streams = ordered_json::array();
  for (const StreamReport& s : r.streams) {
    const StreamCounters& k = s.summary.counters;
    ordered_json o;
    o["stream_id"] = s.summary.stream;
    o["produced"] = k.produced;
    o["replicated"] = k.replicated;
    o["delivered"] = k.delivered;
    ordered_json drops;
    for (std::size_t i = 0; i < kDropCauseCount; ++i)
      drops[to_string(static_cast<DropCause>(i))] = k.drops[i];
    o["drops"] = drops;
    o["in_flight"] = s.in_flight;
    o["order_inversions"] = k.order_inversions;
    o["min_latency_ns"] =
        s.summary.min_latency ? format_ns(*s.summary.min_latency) : "";
    o["max_latency_ns"] =
        s.summary.max_latency ? format_ns(*s.summary.max_latency) : "";
    o["verdict"] = to_string(s.verdict.verdict);
    o["slope_s_per_s"] = s.verdict.slope;
    o["fitted_records"] = s.verdict.fitted;
    o["conserved"] = s.conserved;
    streams.push_back(o);
  }
  j["streams"] = streams;

  ordered_json assertions = ordered_json::array();
  for (const AssertionResult& a : r.assertions)
    assertions.push_back(
        {{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  j["assertions"] = assertions;

  ordered_json assumptions = c.assumptions;
  for (const StreamDecl& d : c.streams)
    if (d.frer)
      assumptions.push_back("FRER recovery window for " + d.spec.id + ": " +
                            std::to_string(d.frer->window) + " sequence numbers");
  j["assumptions"] = assumptions;
  return j;
}

void write_outputs(const RunResult& r, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const fs::path dir(directory);
  export_csv(*r.recorder, (dir / "latencies.csv").string());
  {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << summary_json(r).dump(2) << '\n';
  }
  const Recorder& rec = *r.recorder;
  if (rec.hop_traces().empty()) return;

  const auto& names = rec.stream_names();
  auto node_name = [&](NodeId id) { return r.materialized.network.nodes[id].name; };
  {
    std::ofstream out(dir / "hops.csv", std::ios::binary);
    out << "stream_id,seq,node,ingress_port,arrival_ns,eligibility_ns,"
           "departure_ns\n";
    for (const DeliveredTrace& t : rec.hop_traces()) {
      for (std::size_t h = 0; h < t.hops.size(); ++h) {
        const HopRecord& hop = t.hops[h];
        out << names[t.stream] << ',' << t.seq << ',' << node_name(hop.node)
            << ',' << hop.ingress << ',' << format_ns(hop.arrival) << ','
            << format_ns(hop.eligibility) << ',';
        if (h + 1 < t.hops.size()) out << format_ns(hop.departure);
        out << '\n';
      }
    }
  }
  {
    std::ofstream out(dir / "decisions.csv", std::ios::binary);
    out << "node,ingress_port,stream_id,seq,arrival_ns,eligibility_ns,dropped\n";
    for (const auto& [name, id] : r.materialized.node_ids) {
      if (!rec.watching(id)) continue;
      for (const AtsDecisionRecord& d : rec.decisions(id)) {
        out << name << ',' << d.port << ',' << names[d.stream] << ',' << d.seq
            << ',' << format_ns(d.arrival) << ',';
        if (d.eligible) out << format_ns(d.eligibility);
        out << ',' << (d.eligible ? 0 : 1) << '\n';
      }
    }
  }
}

}  // namespace tsnsim
