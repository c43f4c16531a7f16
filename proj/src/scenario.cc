#include "tsnsim/scenario.h"

#include <algorithm>
#include <set>

namespace tsnsim {

namespace {

const NodeDecl* find_node(const ScenarioConfig& c, const std::string& name) {
  for (const NodeDecl& n : c.nodes)
    if (n.name == name) return &n;
  return nullptr;
}

const StreamDecl* find_stream(const ScenarioConfig& c, const std::string& id) {
  for (const StreamDecl& s : c.streams)
    if (s.spec.id == id) return &s;
  return nullptr;
}

bool linked(const ScenarioConfig& c, const std::string& a, const std::string& b) {
  for (const LinkDecl& l : c.links)
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return true;
  return false;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Index of the last switch before the destination.
std::size_t final_switch_index(const std::vector<std::string>& route) {
  return route.size() >= 2 ? route.size() - 2 : 0;
}

bool after_merge(const ScenarioConfig& c, const StreamDecl& d,
                 const std::vector<std::string>& route, std::size_t i) {
  for (std::size_t j = 0; j < i; ++j) {
    if (d.frer && route[j] == d.frer->recover) return true;
    if (contains(c.merge_points, route[j])) return true;
  }
  return false;
}

void check_routes(const ScenarioConfig& c, const StreamDecl& d,
                  const std::string& at, std::vector<std::string>& problems) {
  const StreamSpec& s = d.spec;
  if (d.routes.empty()) {
    problems.push_back(at + ".routes: at least one route is required");
    return;
  }
  for (std::size_t r = 0; r < d.routes.size(); ++r) {
    const auto& route = d.routes[r];
    const std::string rp = at + ".routes[" + std::to_string(r) + "]";
    if (route.size() < 2) {
      problems.push_back(rp + ": a route needs at least two nodes");
      continue;
    }
    if (route.front() != s.source)
      problems.push_back(rp + ": must start at the source '" + s.source + "'");
    if (route.back() != s.destination)
      problems.push_back(rp + ": must end at the destination '" +
                         s.destination + "'");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < route.size(); ++i) {
      const std::string np = rp + "[" + std::to_string(i) + "]";
      const NodeDecl* node = find_node(c, route[i]);
      if (!node) {
        problems.push_back(np + ": unknown node '" + route[i] + "'");
        continue;
      }
      if (!seen.insert(route[i]).second)
        problems.push_back(np + ": node '" + route[i] + "' visited twice");
      if (i > 0 && i + 1 < route.size() && node->kind != NodeKind::kSwitch)
        problems.push_back(np + ": transit node '" + route[i] +
                           "' is not a switch");
      if (i > 0 && !linked(c, route[i - 1], route[i]))
        problems.push_back(np + ": no link between '" + route[i - 1] +
                           "' and '" + route[i] + "'");
    }
  }

  if (!d.frer) {
    if (d.routes.size() != 1)
      problems.push_back(at + ".routes: several routes require FRER");
    return;
  }
  if (d.routes.size() < 2) {
    problems.push_back(at + ".routes: FRER needs at least two member paths");
    return;
  }
  // Every member path shares the prefix up to the split node and the suffix
  // from the recovery node on, and the segments in between are disjoint.
  std::vector<std::vector<std::string>> prefixes, suffixes;
  std::set<std::string> inner_seen;
  for (std::size_t r = 0; r < d.routes.size(); ++r) {
    const auto& route = d.routes[r];
    const std::string rp = at + ".routes[" + std::to_string(r) + "]";
    auto split = std::find(route.begin(), route.end(), d.frer->split);
    auto recover = std::find(route.begin(), route.end(), d.frer->recover);
    if (split == route.end() || recover == route.end() || !(split < recover)) {
      problems.push_back(rp + ": must pass split '" + d.frer->split +
                         "' before recovery '" + d.frer->recover + "'");
      return;
    }
    prefixes.emplace_back(route.begin(), split + 1);
    suffixes.emplace_back(recover, route.end());
    for (auto it = split + 1; it != recover; ++it)
      if (!inner_seen.insert(*it).second)
        problems.push_back(rp + ": member paths overlap at '" + *it + "'");
    if (split + 1 == recover && !inner_seen.insert("").second)
      problems.push_back(rp + ": two member paths are direct links");
  }
  for (std::size_t r = 1; r < d.routes.size(); ++r) {
    if (prefixes[r] != prefixes[0])
      problems.push_back(at + ".routes: member paths differ before the split");
    if (suffixes[r] != suffixes[0])
      problems.push_back(at + ".routes: member paths differ after recovery");
  }
}

}  // namespace

std::vector<SchedulerPlacement> ats_placements(const ScenarioConfig& c) {
  std::vector<SchedulerPlacement> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const StreamDecl& d : c.streams) {
    if (!d.ats) continue;
    for (const auto& route : d.routes) {
      if (route.size() < 2) continue;
      for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        const bool post = after_merge(c, d, route, i);
        SchedulerPlacement p;
        p.node = route[i];
        p.stream = d.spec.id;
        p.upstream = i == 0 ? std::string() : route[i - 1];
        p.params = *d.ats;
        p.post_merge = post;
        if (i == 0) {
          if (!c.ats.on_sources) continue;
          p.mrt = c.ats.source_mrt;
        } else {
          const bool is_final = i == final_switch_index(route);
          if (c.ats.coverage == AtsCoverage::kNone) continue;
          if (c.ats.coverage == AtsCoverage::kLastSwitch && !is_final) continue;
          if (c.ats.skip_after_merge && post) continue;
          p.mrt = post && c.ats.post_merge_mrt ? *c.ats.post_merge_mrt
                                               : c.ats.switch_mrt;
        }
        for (const ParameterOverride& o : c.overrides) {
          if (!o.streams.empty() && !contains(o.streams, d.spec.id)) continue;
          if (o.scope == OverrideScope::kPostMerge && !post) continue;
          if (o.scope == OverrideScope::kFinalSwitch &&
              (i == 0 || i != final_switch_index(route)))
            continue;
          p.params.cir = p.params.cir * o.cir_scale;
          const Rational cbs = Rational(p.params.cbs_bits) * o.cbs_scale;
          if (!cbs.is_integer())
            throw ConfigError({"overrides: cbs of stream '" + d.spec.id +
                               "' scaled to a fractional bit count " +
                               cbs.str()});
          p.params.cbs_bits = cbs.num();
          if (o.mrt) p.mrt = *o.mrt;
        }
        if (seen.emplace(p.node, p.stream, p.upstream).second)
          out.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::vector<std::string> validation_problems(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  auto add = [&](const std::string& p) { problems.push_back(p); };

  if (c.schema_version != kScenarioSchemaVersion)
    add("schema_version: unsupported version " +
        std::to_string(c.schema_version));
  if (c.name.empty()) add("name: must not be empty");
  if (!(c.duration > SimTime())) add("duration: must be positive");

  std::set<std::string> names;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const std::string at = "nodes[" + std::to_string(i) + "]";
    if (c.nodes[i].name.empty()) add(at + ".name: must not be empty");
    if (!names.insert(c.nodes[i].name).second)
      add(at + ".name: duplicate node '" + c.nodes[i].name + "'");
    if (c.nodes[i].processing_delay.is_negative())
      add(at + ".processing_delay: must not be negative");
  }
  std::set<std::pair<std::string, std::string>> cables;
  for (std::size_t i = 0; i < c.links.size(); ++i) {
    const LinkDecl& l = c.links[i];
    const std::string at = "links[" + std::to_string(i) + "]";
    if (!names.contains(l.a)) add(at + ".a: unknown node '" + l.a + "'");
    if (!names.contains(l.b)) add(at + ".b: unknown node '" + l.b + "'");
    if (l.a == l.b) add(at + ": a link needs two distinct ends");
    if (!cables.insert(std::minmax(l.a, l.b)).second)
      add(at + ": duplicate link between '" + l.a + "' and '" + l.b + "'");
    if (!(l.rate.bits_per_second() > Rational(0)))
      add(at + ".rate: must be positive");
    if (l.propagation.is_negative()) add(at + ".propagation: must not be negative");
  }

  std::set<std::string> ids;
  for (std::size_t i = 0; i < c.streams.size(); ++i) {
    const StreamDecl& d = c.streams[i];
    const StreamSpec& s = d.spec;
    const std::string at = "streams[" + std::to_string(i) + "]";
    if (!ids.insert(s.id).second) add(at + ".id: duplicate stream '" + s.id + "'");
    try {
      tsnsim::validate(s);
    } catch (const std::exception& e) {
      add(at + ": " + e.what());
    }
    if (!s.offsets.empty() && s.frame_size_bits <= 0)
      add(at + ".frame_size_bits: must be positive");
    for (const auto* end : {&s.source, &s.destination}) {
      const NodeDecl* n = find_node(c, *end);
      const std::string field = end == &s.source ? ".source" : ".destination";
      if (!n)
        add(at + field + ": unknown node '" + *end + "'");
      else if (n->kind != NodeKind::kDevice)
        add(at + field + ": '" + *end + "' is not a device");
    }
    if (s.frer_enabled != d.frer.has_value())
      add(at + ".frer: flag and declaration disagree");
    if (d.frer) {
      for (const auto* n : {&d.frer->split, &d.frer->recover})
        if (!names.contains(*n)) add(at + ".frer: unknown node '" + *n + "'");
      if (d.frer->window == 0) add(at + ".frer.window: must be positive");
    }
    if (d.ats) {
      if (!(d.ats->cir.bits_per_second() > Rational(0)))
        add(at + ".ats.cir: must be positive");
      if (d.ats->cbs_bits < s.frame_size_bits)
        add(at + ".ats.cbs_bits: " + std::to_string(d.ats->cbs_bits) +
            " is below the frame size " + std::to_string(s.frame_size_bits));
    }
    check_routes(c, d, at, problems);
  }

  for (std::size_t i = 0; i < c.loss_filters.size(); ++i) {
    const LossFilterDecl& f = c.loss_filters[i];
    const std::string at = "loss_filters[" + std::to_string(i) + "]";
    const StreamDecl* d = find_stream(c, f.stream);
    if (!d) {
      add(at + ".stream: unknown stream '" + f.stream + "'");
      continue;
    }
    bool on_route = false;
    for (const auto& route : d->routes)
      for (std::size_t k = 1; k < route.size(); ++k)
        on_route |= route[k - 1] == f.from && route[k] == f.to;
    if (!on_route)
      add(at + ": stream '" + f.stream + "' never crosses " + f.from + " -> " +
          f.to);
  }
  for (std::size_t i = 0; i < c.merge_points.size(); ++i)
    if (!names.contains(c.merge_points[i]))
      add("merge_points[" + std::to_string(i) + "]: unknown node '" +
          c.merge_points[i] + "'");

  for (const std::string& s : c.ats.increase_streams)
    if (!find_stream(c, s)) add("ats.increase_streams: unknown stream '" + s + "'");
  for (std::size_t i = 0; i < c.overrides.size(); ++i) {
    const ParameterOverride& o = c.overrides[i];
    const std::string at = "overrides[" + std::to_string(i) + "]";
    for (const std::string& s : o.streams)
      if (!find_stream(c, s)) add(at + ".streams: unknown stream '" + s + "'");
    if (!(o.cir_scale > Rational(0))) add(at + ".cir_scale: must be positive");
    if (!(o.cbs_scale > Rational(0))) add(at + ".cbs_scale: must be positive");
  }

  if (!(c.thresholds.bounded_slope < c.thresholds.unbounded_slope))
    add("thresholds: bounded_slope must lie below unbounded_slope");
  for (std::size_t i = 0; i < c.assertions.arrival_order.size(); ++i) {
    const OrderAssertion& a = c.assertions.arrival_order[i];
    const std::string at = "assertions.arrival_order[" + std::to_string(i) + "]";
    if (!names.contains(a.node)) add(at + ".node: unknown node '" + a.node + "'");
    if (a.expected.empty()) add(at + ".expected: must not be empty");
    for (const auto& [stream, index] : a.expected) {
      const StreamDecl* d = find_stream(c, stream);
      if (!d)
        add(at + ".expected: unknown stream '" + stream + "'");
      else if (index >= static_cast<int>(d->spec.offsets.size()))
        add(at + ".expected: stream '" + stream + "' emits only " +
            std::to_string(d->spec.offsets.size()) + " frames per period");
    }
  }
  for (const auto& [stream, verdict] : c.assertions.boundedness)
    if (!find_stream(c, stream))
      add("assertions.boundedness: unknown stream '" + stream + "'");

  if (problems.empty()) {
    try {
      for (const SchedulerPlacement& p : ats_placements(c)) {
        const StreamDecl* d = find_stream(c, p.stream);
        if (p.params.cbs_bits < d->spec.frame_size_bits)
          add("scheduler " + p.stream + "@" + p.node + ": cbs " +
              std::to_string(p.params.cbs_bits) + " below frame size " +
              std::to_string(d->spec.frame_size_bits));
      }
    } catch (const ConfigError& e) {
      for (const std::string& p : e.problems()) add(p);
    }
  }
  return problems;
}

void validate(const ScenarioConfig& config) {
  auto problems = validation_problems(config);
  if (!problems.empty()) throw ConfigError(problems);
}

Materialized materialize(const ScenarioConfig& c) {
  validate(c);
  Materialized m;
  NetworkSpec& net = m.network;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    m.node_ids[c.nodes[i].name] = static_cast<NodeId>(i);
    NodeConfig cfg;
    cfg.name = c.nodes[i].name;
    cfg.is_switch = c.nodes[i].kind == NodeKind::kSwitch;
    cfg.processing_delay = c.nodes[i].processing_delay;
    cfg.grouping = c.ats.grouping;
    net.nodes.push_back(std::move(cfg));
  }
  net.ports.resize(c.nodes.size());
  std::map<std::pair<NodeId, NodeId>, PortId> port_to;
  for (const LinkDecl& l : c.links) {
    const NodeId a = m.node_ids.at(l.a);
    const NodeId b = m.node_ids.at(l.b);
    const auto pa = static_cast<PortId>(net.ports[a].size());
    const auto pb = static_cast<PortId>(net.ports[b].size());
    net.ports[a].push_back(PortLink{b, pb, l.rate, l.propagation});
    net.ports[b].push_back(PortLink{a, pa, l.rate, l.propagation});
    port_to[{a, b}] = pa;
    port_to[{b, a}] = pb;
  }
  auto port = [&](const std::string& from, const std::string& to) {
    return port_to.at({m.node_ids.at(from), m.node_ids.at(to)});
  };

  std::map<std::string, StreamIndex> stream_ids;
  for (std::size_t i = 0; i < c.streams.size(); ++i) {
    const StreamDecl& d = c.streams[i];
    const auto index = static_cast<StreamIndex>(i);
    stream_ids[d.spec.id] = index;
    m.streams.push_back(d.spec);
    m.sources.push_back(m.node_ids.at(d.spec.source));
    for (const auto& route : d.routes) {
      for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        auto& ports = net.nodes[m.node_ids.at(route[k])].forwarding[index];
        const PortId p = port(route[k], route[k + 1]);
        if (std::find(ports.begin(), ports.end(), p) == ports.end())
          ports.push_back(p);
      }
    }
    if (d.frer) {
      net.nodes[m.node_ids.at(d.frer->split)].split.insert(index);
      net.nodes[m.node_ids.at(d.frer->recover)].recovery[index] = d.frer->window;
    }
    net.nodes[m.node_ids.at(d.spec.destination)].deliver.insert(index);
  }

  for (const SchedulerPlacement& p : ats_placements(c)) {
    AtsAssignment a;
    a.stream = stream_ids.at(p.stream);
    a.ingress = p.upstream.empty() ? kLocalPort : port(p.node, p.upstream);
    a.priority = m.streams[a.stream].priority;
    a.params = p.params;
    a.mrt = p.mrt;
    net.nodes[m.node_ids.at(p.node)].ats.push_back(a);
  }
  for (const LossFilterDecl& f : c.loss_filters) {
    LossFilterAssignment a;
    a.stream = stream_ids.at(f.stream);
    a.ingress = port(f.to, f.from);
    a.phase = f.phase;
    net.nodes[m.node_ids.at(f.to)].loss_filters.push_back(a);
  }
  return m;
}

Solution Solution::parse(const std::string& text) {
  const auto eq = text.find('=');
  const std::string key = text.substr(0, eq);
  const std::optional<std::string> value =
      eq == std::string::npos ? std::nullopt
                              : std::optional<std::string>(text.substr(eq + 1));
  Solution s;
  try {
    if (key == "s1" || key == "s3") {
      if (value) throw UsageError("takes no value");
      s.kind = key == "s1" ? SolutionKind::kAtsAllHops
                           : SolutionKind::kNoAtsAfterMerge;
    } else if (key == "s2" || key == "s2-cir" || key == "s2-cbs") {
      s.kind = key == "s2"       ? SolutionKind::kIncreaseBoth
               : key == "s2-cir" ? SolutionKind::kIncreaseCir
                                 : SolutionKind::kIncreaseCbs;
      if (value) s.factor = Rational::parse(*value);
      if (!(s.factor > Rational(0))) throw UsageError("factor must be positive");
    } else if (key == "s4") {
      s.kind = SolutionKind::kSetMrt;
      s.mrt = value ? parse_optional_time(*value)
                    : OptionalTime(SimTime::ms(1));
    } else {
      throw UsageError("expected s1, s2, s2-cir, s2-cbs, s3 or s4");
    }
  } catch (const std::exception& e) {
    throw UsageError("solution '" + text + "': " + e.what());
  }
  return s;
}

std::string Solution::str() const {
  const std::string f = factor == Rational(2) ? "" : "=" + factor.str();
  switch (kind) {
    case SolutionKind::kAtsAllHops: return "s1";
    case SolutionKind::kIncreaseBoth: return "s2" + f;
    case SolutionKind::kIncreaseCir: return "s2-cir" + f;
    case SolutionKind::kIncreaseCbs: return "s2-cbs" + f;
    case SolutionKind::kNoAtsAfterMerge: return "s3";
    case SolutionKind::kSetMrt: return "s4=" + optional_time_str(mrt);
  }
  return "?";
}

ScenarioConfig apply_solution(ScenarioConfig c, const Solution& s) {
  const bool has_frer = std::any_of(c.streams.begin(), c.streams.end(),
                                    [](const StreamDecl& d) { return d.frer; });
  switch (s.kind) {
    case SolutionKind::kAtsAllHops:
      c.ats.coverage = AtsCoverage::kAllSwitches;
      break;
    case SolutionKind::kIncreaseBoth:
    case SolutionKind::kIncreaseCir:
    case SolutionKind::kIncreaseCbs: {
      if (!has_frer && c.merge_points.empty())
        throw UsageError(s.str() + " on " + c.name +
                         ": no recovery function or merge point to act behind");
      ParameterOverride o;
      o.scope = OverrideScope::kPostMerge;
      o.streams = c.ats.increase_streams;
      if (s.kind != SolutionKind::kIncreaseCbs) o.cir_scale = s.factor;
      if (s.kind != SolutionKind::kIncreaseCir) o.cbs_scale = s.factor;
      c.overrides.push_back(o);
      break;
    }
    case SolutionKind::kNoAtsAfterMerge:
      if (!has_frer)
        throw UsageError("s3 on " + c.name +
                         ": the scenario has no FRER recovery function, so "
                         "there is no ATS behind a merge to remove");
      c.ats.skip_after_merge = true;
      break;
    case SolutionKind::kSetMrt: {
      ParameterOverride o;
      o.scope = OverrideScope::kFinalSwitch;
      o.mrt = s.mrt;
      c.overrides.push_back(o);
      break;
    }
  }
  c.solutions.push_back(s.str());
  return c;
}

namespace {

nlohmann::ordered_json effective(const ScenarioConfig& c) {
  auto j = to_json(c);
  for (const char* key : {"name", "case", "solutions", "duration", "seed",
                          "assumptions", "thresholds", "assertions"})
    j.erase(key);
  return j;
}

}  // namespace

std::optional<std::string> adopt_canonical_assertions(ScenarioConfig& config) {
  const auto names = scenario_names();
  if (std::find(names.begin(), names.end(), config.name) != names.end()) {
    const auto mine = effective(config);
    for (const std::string& id : case_ids(config.name)) {
      ScenarioConfig canonical;
      try {
        canonical = build_scenario(config.name, id);
      } catch (const UsageError&) {
        continue;
      }
      if (effective(canonical) == mine) {
        config.assertions = canonical.assertions;
        return id;
      }
    }
  }
  config.assertions = Assertions{};
  return std::nullopt;
}

}  // namespace tsnsim
