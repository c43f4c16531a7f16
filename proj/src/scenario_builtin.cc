// Built-in networks: the three synthetic adversarial networks and the
// desk-scale zonal ring.

#include <algorithm>

#include "tsnsim/scenario.h"

namespace tsnsim {

namespace {

using Route = std::vector<std::string>;

const SimTime kSpacing = SimTime::us(50);  // I
const SimTime kPeriod = SimTime::us(140);  // T
const std::int64_t kAdversarialFrameBits = 1000;
const std::int64_t kCrossFrameBits = 4000;

void add_device(ScenarioConfig& c, const std::string& name) {
  c.nodes.push_back({name, NodeKind::kDevice, SimTime()});
}

void add_switch(ScenarioConfig& c, const std::string& name) {
  c.nodes.push_back({name, NodeKind::kSwitch, SimTime()});
}

void add_chain(ScenarioConfig& c, const Route& chain, const BitRate& rate) {
  for (std::size_t i = 1; i < chain.size(); ++i)
    c.links.push_back({chain[i - 1], chain[i], rate, SimTime()});
}

Route concat(std::initializer_list<Route> parts) {
  Route out;
  for (const Route& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Route numbered(const std::string& prefix, int count) {
  Route out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

StreamDecl shaped(StreamSpec spec, const BitRate& cir, std::int64_t cbs,
                  std::vector<Route> routes) {
  StreamDecl d;
  d.spec = std::move(spec);
  d.routes = std::move(routes);
  d.ats = AtsSchedulerConfig{cir, cbs};
  return d;
}

StreamDecl unshaped(StreamSpec spec, Route route) {
  StreamDecl d;
  d.spec = std::move(spec);
  d.routes = {std::move(route)};
  return d;
}

void make_frer(StreamDecl& d, const std::string& split,
               const std::string& recover) {
  d.spec.frer_enabled = true;
  d.frer = FrerDecl{split, recover, RecoveryState::kDefaultWindow};
}

// ---------------------------------------------------------------------------
// Synthetic networks

const char* const kAdversarialStreams[] = {"blue", "red", "orange"};

AdversarialStreams adversarial(const SimTime& blue_start) {
  AdversarialSpec spec;
  spec.spacing = kSpacing;
  spec.period = kPeriod;
  spec.blue_start = blue_start;
  spec.red_offset_after_blue = SimTime::us(20);
  spec.orange_offset_after_red2 = SimTime::us(10);
  spec.frame_size_bits = kAdversarialFrameBits;
  return expand_adversarial(spec);
}

void set_ends(StreamSpec& s, const std::string& source,
              const std::string& destination) {
  s.source = source;
  s.destination = destination;
}

StreamSpec green_stream(const std::string& source,
                        const std::string& destination) {
  StreamSpec s;
  s.id = "green";
  s.frame_size_bits = kCrossFrameBits;
  s.period = kPeriod;
  s.offsets = {SimTime()};
  set_ends(s, source, destination);
  return s;
}

const BitRate& synthetic_rate() {
  static const BitRate rate = BitRate::mbps(100);
  return rate;
}

const BitRate& synthetic_cir() {
  static const BitRate cir = BitRate::mbps(20);
  return cir;
}

std::vector<std::string> synthetic_assumptions() {
  return {
      "Switch processing delay and link propagation delay are 0.",
      "Frame sizes are on-wire sizes including overhead and inter-frame gap.",
      "The long path has one switch more than the quoted count, so the two "
      "paths differ by four hops; with the quoted counts the second blue "
      "frame ties with the first red frame at switch SW1.",
      "FRER recovery keeps a history window of 64 sequence numbers.",
  };
}

ScenarioConfig net_a() {
  ScenarioConfig c;
  c.name = "netA";
  add_device(c, "Talker");
  add_switch(c, "SW0");
  const Route longp = numbered("L", 5);
  for (const auto& n : longp) add_switch(c, n);
  add_switch(c, "Sh0");
  add_switch(c, "SW1");
  add_switch(c, "SW2");
  add_device(c, "Listener");
  const BitRate& rate = synthetic_rate();
  add_chain(c, concat({{"Talker", "SW0"}, longp, {"SW1", "SW2", "Listener"}}),
            rate);
  add_chain(c, {"SW0", "Sh0", "SW1"}, rate);

  const Route head = {"Talker", "SW0"};
  const Route tail = {"SW1", "SW2", "Listener"};
  const Route long_route = concat({head, longp, tail});
  const Route short_route = concat({head, {"Sh0"}, tail});

  AdversarialStreams adv = adversarial(SimTime());
  for (StreamSpec* s : {&adv.blue, &adv.red, &adv.orange})
    set_ends(*s, "Talker", "Listener");
  StreamDecl blue = shaped(adv.blue, synthetic_cir(), kAdversarialFrameBits,
                           {long_route, short_route});
  make_frer(blue, "SW0", "SW1");
  c.streams.push_back(blue);
  c.streams.push_back(
      shaped(adv.red, synthetic_cir(), kAdversarialFrameBits, {long_route}));
  c.streams.push_back(
      shaped(adv.orange, synthetic_cir(), kAdversarialFrameBits, {long_route}));
  c.loss_filters.push_back({"blue", "SW0", "Sh0", LossPhase::kDropFirst});
  c.merge_points = {"SW1"};
  c.assumptions = synthetic_assumptions();
  c.assumptions.push_back(
      "The loss filter drops every second blue frame entering Sh0 from SW0, "
      "starting with the first.");
  c.assumptions.push_back(
      "SW1 is declared a merge point: the recovered blue stream joins red and "
      "orange there, so schedulers on SW2 count as post-merge for all three.");
  return c;
}

// Networks B and C share the stream set: red/orange on the long path, blue
// and the green cross traffic from a second talker on the short path.
ScenarioConfig add_bc_streams(ScenarioConfig c, const Route& long_route,
                              const Route& short_route,
                              const Route& green_route) {
  // Blue starts 30 us into the period, so the green frame produced at 0
  // holds the first blue frame back by 40 us over the two shared links.
  AdversarialStreams adv = adversarial(SimTime::us(30));
  for (StreamSpec* s : {&adv.red, &adv.orange})
    set_ends(*s, long_route.front(), long_route.back());
  set_ends(adv.blue, short_route.front(), short_route.back());
  c.streams.push_back(
      shaped(adv.blue, synthetic_cir(), kAdversarialFrameBits, {short_route}));
  c.streams.push_back(
      shaped(adv.red, synthetic_cir(), kAdversarialFrameBits, {long_route}));
  c.streams.push_back(
      shaped(adv.orange, synthetic_cir(), kAdversarialFrameBits, {long_route}));
  c.streams.push_back(unshaped(
      green_stream(green_route.front(), green_route.back()), green_route));
  c.merge_points = {"SW1"};
  c.assumptions = synthetic_assumptions();
  c.assumptions.push_back(
      "Green cross traffic (4000-bit frames every 140 us, produced at the "
      "start of each period) shares the talker link and the first short-path "
      "link with blue, which starts 30 us into the period.");
  c.assumptions.push_back(
      "SW1 is declared a merge point: blue joins red and orange there.");
  return c;
}

ScenarioConfig net_b() {
  ScenarioConfig c;
  c.name = "netB";
  add_device(c, "TalkerRO");
  add_device(c, "TalkerBG");
  add_switch(c, "SW0");
  const Route longp = numbered("L", 5);
  for (const auto& n : longp) add_switch(c, n);
  add_switch(c, "Sh0");
  add_switch(c, "SW1");
  add_switch(c, "SW2");
  add_device(c, "Listener");
  add_device(c, "GreenListener");
  const BitRate& rate = synthetic_rate();
  add_chain(c, concat({{"TalkerRO", "SW0"}, longp, {"SW1", "SW2", "Listener"}}),
            rate);
  add_chain(c, {"TalkerBG", "SW0"}, rate);
  add_chain(c, {"SW0", "Sh0", "SW1"}, rate);
  add_chain(c, {"Sh0", "GreenListener"}, rate);
  const Route tail = {"SW1", "SW2", "Listener"};
  return add_bc_streams(c, concat({{"TalkerRO", "SW0"}, longp, tail}),
                        concat({{"TalkerBG", "SW0", "Sh0"}, tail}),
                        {"TalkerBG", "SW0", "Sh0", "GreenListener"});
}

ScenarioConfig net_c() {
  ScenarioConfig c;
  c.name = "netC";
  add_device(c, "DevRO");
  add_device(c, "DevBG");
  const Route longp = numbered("L", 6);
  const Route shortp = numbered("S", 2);
  for (const auto& n : longp) add_switch(c, n);
  for (const auto& n : shortp) add_switch(c, n);
  add_switch(c, "SW1");
  add_switch(c, "SW2");
  add_device(c, "Listener");
  add_device(c, "GreenListener");
  const BitRate& rate = synthetic_rate();
  const Route tail = {"SW1", "SW2", "Listener"};
  add_chain(c, concat({{"DevRO"}, longp, tail}), rate);
  add_chain(c, concat({{"DevBG"}, shortp, {"SW1"}}), rate);
  add_chain(c, {"S1", "GreenListener"}, rate);
  return add_bc_streams(c, concat({{"DevRO"}, longp, tail}),
                        concat({{"DevBG"}, shortp, tail}),
                        {"DevBG", "S0", "S1", "GreenListener"});
}

OrderAssertion order_at_sw2(std::initializer_list<const char*> tokens) {
  OrderAssertion a;
  a.node = "SW2";
  for (const char* t : tokens) {
    std::string s(t);
    const auto colon = s.find(':');
    a.expected.emplace_back(s.substr(0, colon), std::stoi(s.substr(colon + 1)));
  }
  return a;
}

ScenarioConfig synthetic_case(ScenarioConfig c, const std::string& id) {
  static const std::vector<std::string> kCases = {"a", "b", "c", "d", "e",
                                                  "f", "g", "h", "i", "j"};
  if (std::find(kCases.begin(), kCases.end(), id) == kCases.end())
    throw UsageError("unknown case '" + id + "' for " + c.name +
                     " (expected a-j)");
  c.case_id = id;
  c.ats.switch_mrt = std::nullopt;
  c.ats.coverage = id == "a" ? AtsCoverage::kNone : AtsCoverage::kLastSwitch;
  if (id == "c") c.ats.grouping = GroupingMode::kPerStream;
  if (id == "d" || id == "e") c = apply_solution(c, Solution::parse("s1"));
  if (id == "f") c = apply_solution(c, Solution::parse("s2"));
  if (id == "g") c = apply_solution(c, Solution::parse("s2-cir"));
  if (id == "h") c = apply_solution(c, Solution::parse("s2-cbs"));
  if (id == "i") {
    if (c.name != "netA")
      throw UsageError("case i on " + c.name +
                       ": removing ATS behind the FRER merge is only "
                       "relevant in network A, which is the only one using "
                       "FRER");
    c = apply_solution(c, Solution::parse("s1"));
    c = apply_solution(c, Solution::parse("s3"));
  }
  if (id == "j") c = apply_solution(c, Solution::parse("s4=1ms"));
  c.solutions.clear();

  const bool unbounded =
      id == "b" || (c.name == "netA" && (id == "d" || id == "e"));
  for (const char* s : kAdversarialStreams)
    c.assertions.boundedness[s] =
        unbounded ? Verdict::kUnbounded : Verdict::kBounded;

  const bool upstream_shaping = id == "d" || id == "e" || id == "i";
  if (!upstream_shaping) {
    c.assertions.arrival_order.push_back(order_at_sw2(
        {"blue:0", "blue:1", "red:0", "red:1", "orange:0", "orange:1"}));
  } else if (c.name != "netA") {
    c.assertions.arrival_order.push_back(order_at_sw2(
        {"blue:0", "red:0", "blue:1", "red:1", "orange:0", "orange:1"}));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Zonal ring

const char* const kIvnShaped[] = {"video1", "video2", "lidar1",
                                  "lidar2", "lidar3", "lidar4"};

ScenarioConfig ivn_baseline() {
  ScenarioConfig c;
  c.name = "ivn";
  c.case_id = "baseline";
  const BitRate gig = BitRate::gbps(1);
  for (const char* s : {"FL", "FR", "RR", "RL", "ZRR"}) add_switch(c, s);
  for (const char* d : {"CamFR", "CamRL", "LidarFL", "LidarFR", "LidarRL",
                        "LidarRR", "ADAS", "TdmaCtrl", "TdmaSink", "XFL",
                        "XFR", "XRL", "XRR"})
    add_device(c, d);
  add_chain(c, {"FL", "FR", "RR", "RL", "FL"}, gig);
  add_chain(c, {"RR", "ZRR", "ADAS"}, gig);
  for (const auto& [dev, sw] :
       std::vector<std::pair<std::string, std::string>>{
           {"CamFR", "FR"}, {"CamRL", "RL"}, {"LidarFL", "FL"},
           {"LidarFR", "FR"}, {"LidarRL", "RL"}, {"LidarRR", "RR"},
           {"TdmaCtrl", "FL"}, {"TdmaSink", "RR"}, {"XFL", "FL"},
           {"XFR", "FR"}, {"XRL", "RL"}, {"XRR", "RR"}})
    add_chain(c, {dev, sw}, gig);

  const std::int64_t frame = 12000;  // 1500 B on the wire
  const int shaped_priority = 5;
  auto periodic = [&](const std::string& id, const BitRate& bandwidth,
                      const SimTime& phase, const SimTime& jitter) {
    StreamSpec s;
    s.id = id;
    s.frame_size_bits = frame;
    s.priority = shaped_priority;
    s.period = transmit_duration(frame, bandwidth);
    s.phase = phase;
    s.offsets = {SimTime()};
    s.jitter_bound = jitter;
    return s;
  };
  const BitRate video_bw = BitRate::mbps(176);
  const BitRate lidar_bw = BitRate::mbps(104);
  const BitRate video_cir = BitRate::mbps(200);

  // Two-way redundant paths around the ring from the zone switch where the
  // stream enters to RR, then on to the ADAS behind the rear-right zone
  // switch.  Videos start once the LIDARs have settled.
  const Route tail = {"RR", "ZRR", "ADAS"};
  auto redundant = [&](StreamSpec s, const std::string& device,
                       const Route& cw, const Route& ccw, const BitRate& cir) {
    s.source = device;
    s.destination = "ADAS";
    StreamDecl d = shaped(s, cir, frame,
                          {concat({{device}, cw, tail}),
                           concat({{device}, ccw, tail})});
    make_frer(d, cw.front(), "RR");
    return d;
  };
  const SimTime jitter = SimTime::us(70);
  c.streams.push_back(redundant(periodic("video1", video_bw, SimTime::ms(10), jitter),
                                "CamFR", {"FR"}, {"FR", "FL", "RL"},
                                video_cir));
  c.streams.push_back(redundant(
      periodic("video2", video_bw, SimTime::us(10029), jitter), "CamRL",
      {"RL"}, {"RL", "FL", "FR"}, video_cir));
  c.streams.push_back(redundant(periodic("lidar1", lidar_bw, SimTime(), SimTime()),
                                "LidarFL", {"FL", "FR"}, {"FL", "RL"},
                                lidar_bw));
  c.streams.push_back(redundant(
      periodic("lidar2", lidar_bw, SimTime::us(17), SimTime()), "LidarFR",
      {"FR"}, {"FR", "FL", "RL"}, lidar_bw));
  c.streams.push_back(redundant(
      periodic("lidar3", lidar_bw, SimTime::us(41), SimTime()), "LidarRL",
      {"RL"}, {"RL", "FL", "FR"}, lidar_bw));
  {
    StreamSpec s = periodic("lidar4", lidar_bw, SimTime::us(73), SimTime());
    s.source = "LidarRR";
    s.destination = "ADAS";
    c.streams.push_back(
        shaped(s, lidar_bw, frame, {{"LidarRR", "RR", "ZRR", "ADAS"}}));
  }
  c.merge_points = {"RR"};

  // Highest-priority TDMA traffic in both ring directions, switched on at
  // 100 ms together with the cross traffic.
  const SimTime background = SimTime::ms(100);
  const SimTime tdma_period = SimTime::us(250);
  const SimTime tdma_slot = SimTime::us(35);
  StreamSpec tdma_cw = tdma_blocker("tdma_cw", tdma_period, tdma_slot, gig,
                                    "TdmaCtrl", "TdmaSink");
  StreamSpec tdma_ccw = tdma_blocker("tdma_ccw", tdma_period, tdma_slot, gig,
                                     "TdmaCtrl", "TdmaSink");
  tdma_cw.phase = background;
  tdma_ccw.phase = background + tdma_slot;
  c.streams.push_back(unshaped(tdma_cw, {"TdmaCtrl", "FL", "FR", "RR", "TdmaSink"}));
  c.streams.push_back(unshaped(tdma_ccw, {"TdmaCtrl", "FL", "RL", "RR", "TdmaSink"}));

  // Cross traffic above and below the shaped priority.
  auto cross = [&](const std::string& id, int priority, std::int64_t bits,
                   const SimTime& period, const SimTime& phase,
                   const Route& route) {
    StreamSpec s;
    s.id = id;
    s.frame_size_bits = bits;
    s.priority = priority;
    s.period = period;
    s.phase = phase;
    s.offsets = {SimTime()};
    s.source = route.front();
    s.destination = route.back();
    return unshaped(s, route);
  };
  c.streams.push_back(cross("xhigh_cw", 6, 8000, SimTime::us(80), background,
                            {"XFL", "FL", "FR", "XFR"}));
  c.streams.push_back(cross("xhigh_ccw", 6, 8000, SimTime::us(80), background,
                            {"XFR", "FR", "FL", "XFL"}));
  c.streams.push_back(cross("xlow_cw", 0, 12000, SimTime::us(120), background,
                            {"XRL", "RL", "FL", "FR", "XFR"}));
  c.streams.push_back(cross("xlow_ccw", 0, 12000, SimTime::us(120), background,
                            {"XFR", "FR", "FL", "RL", "XRL"}));

  c.ats.coverage = AtsCoverage::kAllSwitches;
  c.ats.on_sources = true;
  c.ats.source_mrt = std::nullopt;
  c.ats.switch_mrt = SimTime::us(50);
  c.ats.post_merge_mrt = OptionalTime();
  c.ats.increase_streams = {"lidar1", "lidar2", "lidar3", "lidar4"};

  c.thresholds.unbounded_slope = 1e-3;
  for (const char* s : kIvnShaped)
    c.assertions.boundedness[s] = Verdict::kUnbounded;

  c.assumptions = {
      "Ring FL-FR-RR-RL; the ADAS sits behind a rear-right zone switch ZRR "
      "attached to RR, so ATS behind the FRER recovery at RR runs on ZRR.",
      "LIDAR4 enters at RR and shares the post-merge ATS group with the "
      "recovered streams.",
      "Video and LIDAR frames are 1500 B on the wire; periods follow from the "
      "stated bandwidths (750/11 us and 1500/13 us).",
      "Video jitter is uniform on [0, 70 us] with nanosecond resolution; "
      "LIDAR streams are strictly periodic with fixed phases.",
      "LIDARs start at 0, videos at 10 ms, TDMA and cross traffic at 100 ms.",
      "TDMA is modelled as 35 us priority-7 frames every 250 us in both ring "
      "directions from a controller at FL.",
      "Cross traffic between the front zones: 8000-bit priority-6 frames "
      "every 80 us and 12000-bit priority-0 frames every 120 us.",
      "Post-merge schedulers use an infinite mrt in every IVN case; switch "
      "schedulers elsewhere use 50 us, source schedulers an infinite mrt.",
      "Unbounded threshold lowered to 1 ms/s for the ring.",
  };
  return c;
}

ScenarioConfig ivn_case(const std::string& id) {
  ScenarioConfig c = ivn_baseline();
  if (id == "baseline") return c;
  if (id == "s1s3") {
    c = apply_solution(c, Solution::parse("s1"));
    c = apply_solution(c, Solution::parse("s3"));
  } else if (id == "s2") {
    c = apply_solution(c, Solution::parse("s2-cbs"));
  } else {
    throw UsageError("unknown case '" + id +
                     "' for ivn (expected baseline, s1s3 or s2)");
  }
  c.case_id = id;
  c.solutions.clear();
  for (const char* s : kIvnShaped)
    c.assertions.boundedness[s] = Verdict::kBounded;
  return c;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"netA", "netB", "netC", "ivn"};
}

std::vector<std::string> case_ids(const std::string& scenario) {
  if (scenario == "ivn") return {"baseline", "s1s3", "s2"};
  if (scenario == "netA")
    return {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  if (scenario == "netB" || scenario == "netC")
    return {"a", "b", "c", "d", "e", "f", "g", "h", "j"};
  throw UsageError("unknown scenario '" + scenario + "'");
}

std::string default_case(const std::string& scenario) {
  if (scenario == "ivn") return "baseline";
  case_ids(scenario);
  return "b";
}

ScenarioConfig build_scenario(const std::string& scenario,
                              const std::string& case_id) {
  ScenarioConfig c;
  if (scenario == "netA")
    c = synthetic_case(net_a(), case_id);
  else if (scenario == "netB")
    c = synthetic_case(net_b(), case_id);
  else if (scenario == "netC")
    c = synthetic_case(net_c(), case_id);
  else if (scenario == "ivn")
    c = ivn_case(case_id);
  else
    throw UsageError("unknown scenario '" + scenario +
                     "' (expected netA, netB, netC or ivn)");
  validate(c);
  return c;
}

}  // namespace tsnsim
