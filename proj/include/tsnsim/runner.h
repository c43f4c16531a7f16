// Runs one scenario configuration and checks its assertions.

#ifndef TSNSIM_RUNNER_H_
#define TSNSIM_RUNNER_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsnsim/metrics.h"
#include "tsnsim/scenario.h"

namespace tsnsim {

struct RunOptions {
  bool trace = false;  // per-hop traces and every ATS decision
  std::vector<std::string> watch_nodes;
  std::ostream* event_log = nullptr;  // one line per dispatched event
};

struct AssertionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct StreamReport {
  StreamSummary summary;
  BoundednessVerdict verdict;
  std::uint64_t in_flight = 0;
  bool conserved = false;
};

struct RunResult {
  ScenarioConfig config;
  Materialized materialized;
  std::unique_ptr<Recorder> recorder;
  std::vector<StreamReport> streams;
  std::vector<AssertionResult> assertions;
  std::uint64_t events = 0;

  bool passed() const;
  StreamIndex stream_index(const std::string& id) const;
  NodeId node_id(const std::string& name) const;
  const StreamReport& stream(const std::string& id) const {
    return streams[stream_index(id)];
  }
};

// Deterministic per-stream seed derived from the run seed.
std::uint64_t stream_seed(std::uint64_t run_seed, StreamIndex stream);

// Throws ConfigError for invalid configurations.
RunResult run_scenario(const ScenarioConfig& config,
                       const RunOptions& options = {});

nlohmann::ordered_json summary_json(const RunResult& result);

// Writes latencies.csv and summary.json (plus hops.csv and decisions.csv
// when tracing) into `directory`, creating it if needed.
void write_outputs(const RunResult& result, const std::string& directory);

}  // namespace tsnsim

#endif  // TSNSIM_RUNNER_H_
