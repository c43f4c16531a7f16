// Declarative scenario descriptions: topology, streams with explicit routes,
// FRER placement, ATS placement and parameters, solution toggles and the
// assertions a run is checked against.

#ifndef TSNSIM_SCENARIO_H_
#define TSNSIM_SCENARIO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsnsim/ats.h"
#include "tsnsim/frer.h"
#include "tsnsim/metrics.h"
#include "tsnsim/switch_node.h"
#include "tsnsim/traffic.h"
#include "tsnsim/units.h"

namespace tsnsim {

inline constexpr int kScenarioSchemaVersion = 1;

// Unknown scenario, case or inapplicable solution.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scenario that does not pass validation; the message lists every problem
// with its path inside the config.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class NodeKind { kDevice, kSwitch };

struct NodeDecl {
  std::string name;
  NodeKind kind = NodeKind::kSwitch;
  SimTime processing_delay;
  friend bool operator==(const NodeDecl&, const NodeDecl&) = default;
};

// Full-duplex cable; both directions have the same rate and delay.
struct LinkDecl {
  std::string a;
  std::string b;
  BitRate rate;
  SimTime propagation;
  friend bool operator==(const LinkDecl&, const LinkDecl&) = default;
};

struct FrerDecl {
  std::string split;
  std::string recover;
  std::size_t window = RecoveryState::kDefaultWindow;
  friend bool operator==(const FrerDecl&, const FrerDecl&) = default;
};

struct StreamDecl {
  StreamSpec spec;
  // Node lists from source to destination; one per FRER member path, or a
  // single route for streams without FRER.
  std::vector<std::vector<std::string>> routes;
  std::optional<FrerDecl> frer;
  std::optional<AtsSchedulerConfig> ats;  // shaped when present
  friend bool operator==(const StreamDecl&, const StreamDecl&) = default;
};

struct LossFilterDecl {
  std::string stream;
  std::string from;  // the filter sits at the ingress of `to`
  std::string to;
  LossPhase phase = LossPhase::kDropFirst;
  friend bool operator==(const LossFilterDecl&, const LossFilterDecl&) = default;
};

enum class AtsCoverage { kNone, kLastSwitch, kAllSwitches };

struct AtsSettings {
  AtsCoverage coverage = AtsCoverage::kNone;
  // Leaves out schedulers behind a recovery function or merge point.
  bool skip_after_merge = false;
  GroupingMode grouping = GroupingMode::kStandard;
  OptionalTime switch_mrt;
  // When set, replaces switch_mrt on post-merge schedulers.
  std::optional<OptionalTime> post_merge_mrt;
  bool on_sources = false;
  OptionalTime source_mrt;
  // Streams that cir/cbs increases apply to; empty means every shaped stream.
  std::vector<std::string> increase_streams;
  friend bool operator==(const AtsSettings&, const AtsSettings&) = default;
};

enum class OverrideScope { kAll, kPostMerge, kFinalSwitch };

struct ParameterOverride {
  OverrideScope scope = OverrideScope::kAll;
  std::vector<std::string> streams;  // empty: every shaped stream
  Rational cir_scale{1};
  Rational cbs_scale{1};
  std::optional<OptionalTime> mrt;
  friend bool operator==(const ParameterOverride&,
                         const ParameterOverride&) = default;
};

struct OrderAssertion {
  std::string node;
  // One period's worth of (stream, index within period) in expected arrival
  // order; repeated for every complete period observed.
  std::vector<std::pair<std::string, int>> expected;
  friend bool operator==(const OrderAssertion&, const OrderAssertion&) = default;
};

struct Assertions {
  std::vector<OrderAssertion> arrival_order;
  std::map<std::string, Verdict> boundedness;
  friend bool operator==(const Assertions&, const Assertions&) = default;
};

struct ScenarioConfig {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  std::string case_id;
  std::vector<std::string> solutions;  // applied on top of the case
  SimTime duration = SimTime::seconds(10);
  std::uint64_t seed = 1;
  std::vector<NodeDecl> nodes;
  std::vector<LinkDecl> links;
  std::vector<StreamDecl> streams;
  std::vector<LossFilterDecl> loss_filters;
  // Nodes where non-FRER streams from different paths converge.
  std::vector<std::string> merge_points;
  AtsSettings ats;
  std::vector<ParameterOverride> overrides;
  BoundednessThresholds thresholds;
  Assertions assertions;
  std::vector<std::string> assumptions;

  friend bool operator==(const ScenarioConfig&,
                         const ScenarioConfig&) = default;
};

std::string to_string(AtsCoverage coverage);
std::string placement_name(const AtsSettings& ats);
std::string to_string(OverrideScope scope);

nlohmann::ordered_json to_json(const ScenarioConfig& config);
// Throws ConfigError for malformed documents.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& config, const std::string& path);

// Every problem found, each prefixed with its path in the config.
std::vector<std::string> validation_problems(const ScenarioConfig& config);
void validate(const ScenarioConfig& config);  // throws ConfigError

std::vector<std::string> scenario_names();
std::vector<std::string> case_ids(const std::string& scenario);
std::string default_case(const std::string& scenario);

// Throws UsageError for unknown names or inapplicable cases.
ScenarioConfig build_scenario(const std::string& scenario,
                              const std::string& case_id);

enum class SolutionKind {
  kAtsAllHops,        // s1
  kIncreaseBoth,      // s2
  kIncreaseCir,       // s2-cir
  kIncreaseCbs,       // s2-cbs
  kNoAtsAfterMerge,   // s3
  kSetMrt,            // s4
};

struct Solution {
  SolutionKind kind = SolutionKind::kAtsAllHops;
  Rational factor{2};  // s2 variants
  OptionalTime mrt;    // s4

  // "s1", "s2", "s2-cir", "s2-cbs", "s3", "s4" with an optional "=value"
  // (factor for s2 variants, time for s4).
  static Solution parse(const std::string& text);
  std::string str() const;
};

// Throws UsageError when the solution does not apply (s3 without FRER).
ScenarioConfig apply_solution(ScenarioConfig config, const Solution& solution);

// Replaces the assertions by those of the built-in case whose effective
// configuration equals `config`, or clears them when none matches.  Returns
// the matched case id.
std::optional<std::string> adopt_canonical_assertions(ScenarioConfig& config);

// One ATS scheduler implied by the config.
struct SchedulerPlacement {
  std::string node;
  std::string stream;
  std::string upstream;  // empty for the source's own frames
  AtsSchedulerConfig params;
  OptionalTime mrt;
  bool post_merge = false;
};

std::vector<SchedulerPlacement> ats_placements(const ScenarioConfig& config);

struct Materialized {
  NetworkSpec network;
  std::map<std::string, NodeId> node_ids;
  std::vector<StreamSpec> streams;  // index = StreamIndex
  std::vector<NodeId> sources;      // per stream
};

// Validates, then resolves names into ports and node configurations.
Materialized materialize(const ScenarioConfig& config);

}  // namespace tsnsim

#endif  // TSNSIM_SCENARIO_H_
