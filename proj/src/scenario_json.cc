// JSON form of ScenarioConfig.  Times are strings ("140us", "750/11us",
// "inf"), rates are strings ("100Mbps"), factors are exact rationals ("2").

#include <fstream>
#include <sstream>

#include "tsnsim/scenario.h"

namespace tsnsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string kind_name(NodeKind kind) {
  return kind == NodeKind::kDevice ? "device" : "switch";
}

std::string order_token(const std::pair<std::string, int>& entry) {
  return entry.first + ":" + std::to_string(entry.second);
}

ordered_json opt_time_json(const OptionalTime& t) {
  return optional_time_str(t);
}

// Walks a document while remembering where it is, so that every failure
// names its location.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(path) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return node_; }

  bool has(const std::string& key) const {
    return node_.is_object() && node_.contains(key);
  }

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail("expected an object");
    if (!node_.contains(key)) fail("missing field '" + key + "'");
    return Reader(node_.at(key), path_ + "." + key);
  }

  std::vector<Reader> items() const {
    if (!node_.is_array()) fail("expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < node_.size(); ++i)
      out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  std::string str() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }
  std::int64_t integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.get<std::int64_t>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }
  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }

  template <class F>
  auto convert(F&& f) const -> decltype(f(std::string())) {
    const std::string text = str();
    try {
      return f(text);
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  SimTime time() const { return convert(SimTime::parse); }
  OptionalTime optional_time() const { return convert(parse_optional_time); }
  BitRate rate() const { return convert(BitRate::parse); }
  Rational rational() const {
    if (node_.is_number_integer()) return Rational(integer());
    return convert(Rational::parse);
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const Reader& r : items()) out.push_back(r.str());
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError({path_ + ": " + what});
  }

 private:
  const json& node_;
  std::string path_;
};

template <class T, class F>
T optional_field(const Reader& r, const std::string& key, T fallback, F&& read) {
  return r.has(key) ? read(r.at(key)) : fallback;
}

StreamDecl read_stream(const Reader& r) {
  StreamDecl d;
  StreamSpec& s = d.spec;
  s.id = r.at("id").str();
  s.frame_size_bits = r.at("frame_size_bits").integer();
  s.priority = static_cast<int>(r.at("priority").integer());
  s.period = r.at("period").time();
  s.phase = optional_field(r, "phase", SimTime(),
                           [](const Reader& x) { return x.time(); });
  for (const Reader& o : r.at("offsets").items()) s.offsets.push_back(o.time());
  s.jitter_bound = optional_field(r, "jitter", SimTime(),
                                  [](const Reader& x) { return x.time(); });
  s.source = r.at("source").str();
  s.destination = r.at("destination").str();
  for (const Reader& route : r.at("routes").items())
    d.routes.push_back(route.strings());
  if (r.has("frer")) {
    Reader f = r.at("frer");
    FrerDecl frer;
    frer.split = f.at("split").str();
    frer.recover = f.at("recover").str();
    if (f.has("window")) {
      const std::int64_t w = f.at("window").integer();
      if (w <= 0) f.at("window").fail("window must be positive");
      frer.window = static_cast<std::size_t>(w);
    }
    d.frer = frer;
  }
  s.frer_enabled = d.frer.has_value();
  if (r.has("ats")) {
    Reader a = r.at("ats");
    d.ats = AtsSchedulerConfig{a.at("cir").rate(), a.at("cbs_bits").integer()};
  }
  return d;
}

AtsCoverage read_coverage(const Reader& r, bool& skip) {
  const std::string text = r.str();
  if (text == "none") return AtsCoverage::kNone;
  if (text == "last-switch-only") return AtsCoverage::kLastSwitch;
  if (text == "all-switches") return AtsCoverage::kAllSwitches;
  if (text == "all-except-after-merge") {
    skip = true;
    return AtsCoverage::kAllSwitches;
  }
  r.fail("unknown ATS placement '" + text + "'");
}

OverrideScope read_scope(const Reader& r) {
  const std::string text = r.str();
  for (OverrideScope s :
       {OverrideScope::kAll, OverrideScope::kPostMerge, OverrideScope::kFinalSwitch})
    if (to_string(s) == text) return s;
  r.fail("unknown override scope '" + text + "'");
}

std::pair<std::string, int> read_order_token(const Reader& r) {
  const std::string text = r.str();
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0)
    r.fail("expected 'stream:index', got '" + text + "'");
  try {
    std::size_t used = 0;
    const int index = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || index < 0) throw std::exception();
    return {text.substr(0, colon), index};
  } catch (const std::exception&) {
    r.fail("bad frame index in '" + text + "'");
  }
}

ScenarioConfig read_config(const Reader& root) {
  ScenarioConfig c;
  c.schema_version = static_cast<int>(root.at("schema_version").integer());
  if (c.schema_version != kScenarioSchemaVersion)
    root.at("schema_version")
        .fail("unsupported schema version " + std::to_string(c.schema_version));
  c.name = root.at("name").str();
  c.case_id = optional_field(root, "case", std::string(),
                             [](const Reader& x) { return x.str(); });
  if (root.has("solutions")) c.solutions = root.at("solutions").strings();
  c.duration = root.at("duration").time();
  {
    Reader seed = root.at("seed");
    const std::int64_t v = seed.integer();
    if (v < 0) seed.fail("seed must not be negative");
    c.seed = static_cast<std::uint64_t>(v);
  }
  for (const Reader& n : root.at("nodes").items()) {
    NodeDecl d;
    d.name = n.at("name").str();
    const std::string kind = n.at("kind").str();
    if (kind == "device")
      d.kind = NodeKind::kDevice;
    else if (kind == "switch")
      d.kind = NodeKind::kSwitch;
    else
      n.at("kind").fail("expected 'device' or 'switch'");
    d.processing_delay = optional_field(
        n, "processing_delay", SimTime(), [](const Reader& x) { return x.time(); });
    c.nodes.push_back(d);
  }
  for (const Reader& l : root.at("links").items()) {
    LinkDecl d;
    d.a = l.at("a").str();
    d.b = l.at("b").str();
    d.rate = l.at("rate").rate();
    d.propagation = optional_field(l, "propagation", SimTime(),
                                   [](const Reader& x) { return x.time(); });
    c.links.push_back(d);
  }
  for (const Reader& s : root.at("streams").items())
    c.streams.push_back(read_stream(s));
  if (root.has("loss_filters")) {
    for (const Reader& f : root.at("loss_filters").items()) {
      LossFilterDecl d;
      d.stream = f.at("stream").str();
      d.from = f.at("from").str();
      d.to = f.at("to").str();
      if (f.has("phase")) d.phase = f.at("phase").convert(parse_loss_phase);
      c.loss_filters.push_back(d);
    }
  }
  if (root.has("merge_points"))
    c.merge_points = root.at("merge_points").strings();

  {
    Reader a = root.at("ats");
    AtsSettings& s = c.ats;
    s.coverage = read_coverage(a.at("placement"), s.skip_after_merge);
    if (a.has("skip_after_merge"))
      s.skip_after_merge = s.skip_after_merge || a.at("skip_after_merge").boolean();
    if (a.has("grouping"))
      s.grouping = a.at("grouping").convert(parse_grouping_mode);
    s.switch_mrt = optional_field(a, "switch_mrt", OptionalTime(),
                                  [](const Reader& x) { return x.optional_time(); });
    if (a.has("post_merge_mrt"))
      s.post_merge_mrt = a.at("post_merge_mrt").optional_time();
    if (a.has("on_sources")) s.on_sources = a.at("on_sources").boolean();
    s.source_mrt = optional_field(a, "source_mrt", OptionalTime(),
                                  [](const Reader& x) { return x.optional_time(); });
    if (a.has("increase_streams"))
      s.increase_streams = a.at("increase_streams").strings();
  }
  if (root.has("overrides")) {
    for (const Reader& o : root.at("overrides").items()) {
      ParameterOverride d;
      d.scope = read_scope(o.at("scope"));
      if (o.has("streams")) d.streams = o.at("streams").strings();
      if (o.has("cir_scale")) d.cir_scale = o.at("cir_scale").rational();
      if (o.has("cbs_scale")) d.cbs_scale = o.at("cbs_scale").rational();
      if (o.has("mrt")) d.mrt = o.at("mrt").optional_time();
      c.overrides.push_back(d);
    }
  }
  if (root.has("thresholds")) {
    Reader t = root.at("thresholds");
    if (t.has("bounded_slope"))
      c.thresholds.bounded_slope = t.at("bounded_slope").number();
    if (t.has("unbounded_slope"))
      c.thresholds.unbounded_slope = t.at("unbounded_slope").number();
    if (t.has("min_records")) {
      const std::int64_t m = t.at("min_records").integer();
      if (m < 2) t.at("min_records").fail("need at least 2 records");
      c.thresholds.min_records = static_cast<std::size_t>(m);
    }
  }
  if (root.has("assertions")) {
    Reader a = root.at("assertions");
    if (a.has("arrival_order")) {
      for (const Reader& o : a.at("arrival_order").items()) {
        OrderAssertion d;
        d.node = o.at("node").str();
        for (const Reader& e : o.at("expected").items())
          d.expected.push_back(read_order_token(e));
        c.assertions.arrival_order.push_back(d);
      }
    }
    if (a.has("boundedness")) {
      Reader b = a.at("boundedness");
      if (!b.raw().is_object()) b.fail("expected an object");
      for (const auto& [stream, value] : b.raw().items())
        c.assertions.boundedness[stream] =
            b.at(stream).convert(parse_verdict);
    }
  }
  if (root.has("assumptions"))
    c.assumptions = root.at("assumptions").strings();
  return c;
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::invalid_argument([&] {
        std::string msg = "invalid scenario:";
        for (const std::string& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(problems) {}

std::string to_string(AtsCoverage coverage) {
  switch (coverage) {
    case AtsCoverage::kNone: return "none";
    case AtsCoverage::kLastSwitch: return "last-switch-only";
    case AtsCoverage::kAllSwitches: return "all-switches";
  }
  return "none";
}

std::string placement_name(const AtsSettings& ats) {
  if (ats.coverage == AtsCoverage::kAllSwitches && ats.skip_after_merge)
    return "all-except-after-merge";
  return to_string(ats.coverage);
}

std::string to_string(OverrideScope scope) {
  switch (scope) {
    case OverrideScope::kAll: return "all";
    case OverrideScope::kPostMerge: return "post-merge";
    case OverrideScope::kFinalSwitch: return "final-switch";
  }
  return "all";
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["case"] = c.case_id;
  j["solutions"] = c.solutions;
  j["duration"] = c.duration.str();
  j["seed"] = c.seed;
  j["assumptions"] = c.assumptions;

  ordered_json nodes = ordered_json::array();
  for (const NodeDecl& n : c.nodes) {
    ordered_json o;
    o["name"] = n.name;
    o["kind"] = kind_name(n.kind);
    if (!n.processing_delay.is_zero())
      o["processing_delay"] = n.processing_delay.str();
    nodes.push_back(o);
  }
  j["nodes"] = nodes;

  ordered_json links = ordered_json::array();
  for (const LinkDecl& l : c.links) {
    ordered_json o;
    o["a"] = l.a;
    o["b"] = l.b;
    o["rate"] = l.rate.str();
    if (!l.propagation.is_zero()) o["propagation"] = l.propagation.str();
    links.push_back(o);
  }
  j["links"] = links;

  ordered_json streams = ordered_json::array();
  for (const StreamDecl& d : c.streams) {
    const StreamSpec& s = d.spec;
    ordered_json o;
    o["id"] = s.id;
    o["frame_size_bits"] = s.frame_size_bits;
    o["priority"] = s.priority;
    o["period"] = s.period.str();
    o["phase"] = s.phase.str();
    ordered_json offsets = ordered_json::array();
    for (const SimTime& t : s.offsets) offsets.push_back(t.str());
    o["offsets"] = offsets;
    o["jitter"] = s.jitter_bound.str();
    o["source"] = s.source;
    o["destination"] = s.destination;
    o["routes"] = d.routes;
    if (d.frer) {
      o["frer"] = {{"split", d.frer->split},
                   {"recover", d.frer->recover},
                   {"window", d.frer->window}};
    }
    if (d.ats) {
      o["ats"] = {{"cir", d.ats->cir.str()}, {"cbs_bits", d.ats->cbs_bits}};
    }
    streams.push_back(o);
  }
  j["streams"] = streams;

  ordered_json filters = ordered_json::array();
  for (const LossFilterDecl& f : c.loss_filters)
    filters.push_back({{"stream", f.stream},
                       {"from", f.from},
                       {"to", f.to},
                       {"phase", to_string(f.phase)}});
  j["loss_filters"] = filters;
  j["merge_points"] = c.merge_points;

  ordered_json ats;
  ats["placement"] = placement_name(c.ats);
  if (c.ats.skip_after_merge && c.ats.coverage != AtsCoverage::kAllSwitches)
    ats["skip_after_merge"] = true;
  ats["grouping"] = to_string(c.ats.grouping);
  ats["switch_mrt"] = opt_time_json(c.ats.switch_mrt);
  if (c.ats.post_merge_mrt)
    ats["post_merge_mrt"] = opt_time_json(*c.ats.post_merge_mrt);
  ats["on_sources"] = c.ats.on_sources;
  ats["source_mrt"] = opt_time_json(c.ats.source_mrt);
  ats["increase_streams"] = c.ats.increase_streams;
  j["ats"] = ats;

  ordered_json overrides = ordered_json::array();
  for (const ParameterOverride& o : c.overrides) {
    ordered_json x;
    x["scope"] = to_string(o.scope);
    x["streams"] = o.streams;
    x["cir_scale"] = o.cir_scale.str();
    x["cbs_scale"] = o.cbs_scale.str();
    if (o.mrt) x["mrt"] = opt_time_json(*o.mrt);
    overrides.push_back(x);
  }
  j["overrides"] = overrides;

  j["thresholds"] = {{"bounded_slope", c.thresholds.bounded_slope},
                     {"unbounded_slope", c.thresholds.unbounded_slope},
                     {"min_records", c.thresholds.min_records}};

  ordered_json orders = ordered_json::array();
  for (const OrderAssertion& a : c.assertions.arrival_order) {
    ordered_json expected = ordered_json::array();
    for (const auto& e : a.expected) expected.push_back(order_token(e));
    orders.push_back({{"node", a.node}, {"expected", expected}});
  }
  ordered_json bounded = ordered_json::object();
  for (const auto& [stream, verdict] : c.assertions.boundedness)
    bounded[stream] = to_string(verdict);
  j["assertions"] = {{"arrival_order", orders}, {"boundedness", bounded}};
  return j;
}

ScenarioConfig scenario_from_json(const json& doc) {
  return read_config(Reader(doc, "$"));
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
  return scenario_from_json(doc);
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(config).dump(2) << '\n';
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace tsnsim
