#include "tsnsim/cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tsnsim/runner.h"
#include "tsnsim/scenario.h"

namespace tsnsim {

namespace {

struct Request {
  std::string scenario;
  std::string case_id;
  std::vector<std::string> solutions;
  std::string config_path;
  std::optional<std::string> duration;
  std::optional<std::uint64_t> seed;
};

struct Job {
  std::string label;
  ScenarioConfig config;
};

struct Outcome {
  std::optional<RunResult> result;
  std::string error;
  int code = kExitOk;
};

ScenarioConfig build(const Request& r) {
  ScenarioConfig c;
  if (!r.config_path.empty()) {
    c = load_scenario(r.config_path);
  } else {
    const std::string case_id =
        r.case_id.empty() ? default_case(r.scenario) : r.case_id;
    c = build_scenario(r.scenario, case_id);
  }
  for (const std::string& s : r.solutions)
    c = apply_solution(std::move(c), Solution::parse(s));
  if (!r.solutions.empty()) adopt_canonical_assertions(c);
  if (r.duration) c.duration = SimTime::parse(*r.duration);
  if (r.seed) c.seed = *r.seed;
  return c;
}

std::vector<Job> expand_sweep(const ScenarioConfig& base,
                              const std::string& sweep) {
  const auto eq = sweep.find('=');
  if (eq == std::string::npos)
    throw UsageError("--sweep expects key=v1,v2,...");
  const std::string key = sweep.substr(0, eq);
  std::string prefix;
  if (key == "mrt")
    prefix = "s4=";
  else if (key == "cir-scale")
    prefix = "s2-cir=";
  else if (key == "cbs-scale")
    prefix = "s2-cbs=";
  else
    throw UsageError("--sweep key must be mrt, cir-scale or cbs-scale");
  std::vector<Job> jobs;
  std::stringstream values(sweep.substr(eq + 1));
  for (std::string v; std::getline(values, v, ',');) {
    if (v.empty()) continue;
    ScenarioConfig c = apply_solution(base, Solution::parse(prefix + v));
    adopt_canonical_assertions(c);
    jobs.push_back({key + "=" + v, std::move(c)});
  }
  if (jobs.empty()) throw UsageError("--sweep lists no values");
  return jobs;
}

// Each non-empty line: "<scenario> [case] [solution...]" or a JSON file path
// followed by optional solutions.  '#' starts a comment.
std::vector<Job> read_batch(const std::string& path, const Request& common) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read batch file '" + path + "'");
  std::vector<Job> jobs;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty()) continue;
    Request r = common;
    std::size_t next = 1;
    if (tokens[0].ends_with(".json")) {
      r.config_path = tokens[0];
    } else {
      r.scenario = tokens[0];
      if (tokens.size() > 1) {
        const auto ids = case_ids(r.scenario);
        if (std::find(ids.begin(), ids.end(), tokens[1]) != ids.end())
          r.case_id = tokens[next++];
      }
    }
    r.solutions.assign(tokens.begin() + static_cast<std::ptrdiff_t>(next),
                       tokens.end());
    try {
      ScenarioConfig c = build(r);
      std::string label = std::to_string(line_no) + "-" + c.name + "-" + c.case_id;
      for (const std::string& s : r.solutions) label += "+" + s;
      jobs.push_back({label, std::move(c)});
    } catch (const UsageError& e) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (jobs.empty()) throw UsageError("batch file '" + path + "' lists no runs");
  return jobs;
}

Outcome execute(const Job& job, const std::string& out_dir, bool trace) {
  Outcome o;
  try {
    RunOptions opts;
    opts.trace = trace;
    o.result = run_scenario(job.config, opts);
    if (!out_dir.empty()) write_outputs(*o.result, out_dir);
    o.code = o.result->passed() ? kExitOk : kExitAssertionFailed;
  } catch (const ConfigError& e) {
    o.error = e.what();
    o.code = kExitConfig;
  } catch (const std::exception& e) {
    o.error = e.what();
    o.code = kExitConfig;
  }
  return o;
}

void report(std::ostream& out, const Job& job, const Outcome& o,
            const std::string& out_dir) {
  const ScenarioConfig& c = job.config;
  out << "== " << c.name << " case " << c.case_id;
  if (!c.solutions.empty()) {
    out << " +";
    for (const std::string& s : c.solutions) out << ' ' << s;
  }
  out << " (" << c.duration.str() << ", seed " << c.seed << ")\n";
  if (!o.result) {
    out << "error: " << o.error << '\n';
    return;
  }
  const RunResult& r = *o.result;
  out << std::left << std::setw(12) << "stream" << std::setw(13) << "verdict"
      << std::setw(14) << "slope[s/s]" << std::setw(20) << "min[ns]"
      << std::setw(20) << "max[ns]" << std::setw(11) << "delivered"
      << std::setw(7) << "lost" << "mrt-drops\n";
  for (const StreamReport& s : r.streams) {
    const StreamCounters& k = s.summary.counters;
    const std::uint64_t lost = k.produced - k.delivered - std::min(
        s.in_flight, k.produced - k.delivered);
    std::ostringstream slope;
    slope << std::setprecision(4) << s.verdict.slope;
    out << std::setw(12) << s.summary.stream << std::setw(13)
        << to_string(s.verdict.verdict) << std::setw(14) << slope.str()
        << std::setw(20)
        << (s.summary.min_latency ? format_ns(*s.summary.min_latency) : "-")
        << std::setw(20)
        << (s.summary.max_latency ? format_ns(*s.summary.max_latency) : "-")
        << std::setw(11) << k.delivered << std::setw(7) << lost
        << k.dropped(DropCause::kShaperMrt) << '\n';
  }
  out << std::right;
  for (const AssertionResult& a : r.assertions)
    out << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
  if (!out_dir.empty()) out << "outputs: " << out_dir << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Discrete-event simulator of asynchronous traffic shaping combined with "
      "frame replication and elimination.\n"
      "Exit codes: 0 all assertions hold, 1 an assertion failed, 2 usage "
      "error, 3 invalid configuration or runtime error."};
  Request req;
  std::string out_dir = "tsnsim-out";
  std::string sweep;
  std::string batch;
  bool trace = false;
  bool list = false;
  bool dump = false;
  std::size_t jobs_n = 0;

  app.add_option("--scenario", req.scenario, "netA, netB, netC or ivn");
  app.add_option("--case", req.case_id,
                 "Case letter a-j, or baseline/s1s3/s2 for ivn");
  app.add_option("--solution", req.solutions,
                 "s1, s2[=f], s2-cir[=f], s2-cbs[=f], s3, s4[=mrt]; repeatable")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--duration", req.duration, "Simulated time, e.g. 10s");
  app.add_option("--seed", req.seed, "Run seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--trace", trace, "Write per-hop traces and ATS decisions");
  app.add_option("--sweep", sweep,
                 "key=v1,v2,... with key mrt, cir-scale or cbs-scale");
  app.add_option("--config", req.config_path, "Load a scenario JSON file");
  app.add_option("--batch", batch, "File with one run per line");
  app.add_option("--jobs", jobs_n, "Parallel workers for sweeps and batches");
  app.add_flag("--list", list, "List scenarios and their cases");
  app.add_flag("--dump-config", dump,
               "Print the effective scenario JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  if (list) {
    for (const std::string& s : scenario_names()) {
      out << s << ':';
      for (const std::string& c : case_ids(s)) out << ' ' << c;
      out << " (default " << default_case(s) << ")\n";
    }
    return kExitOk;
  }

  std::vector<Job> jobs;
  try {
    const int sources = int(!req.scenario.empty()) + int(!req.config_path.empty()) +
                        int(!batch.empty());
    if (sources != 1)
      throw UsageError("give exactly one of --scenario, --config or --batch");
    if (!req.case_id.empty() && req.scenario.empty())
      throw UsageError("--case needs --scenario");
    if (!batch.empty()) {
      if (!sweep.empty()) throw UsageError("--sweep cannot be combined with --batch");
      jobs = read_batch(batch, Request{{}, {}, {}, {}, req.duration, req.seed});
    } else {
      ScenarioConfig base = build(req);
      if (sweep.empty())
        jobs.push_back({"", std::move(base)});
      else
        jobs = expand_sweep(base, sweep);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "invalid configuration:\n" << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (dump) {
    for (const Job& j : jobs) out << to_json(j.config).dump(2) << '\n';
    return kExitOk;
  }

  std::vector<std::string> dirs;
  for (const Job& j : jobs)
    dirs.push_back(j.label.empty() ? out_dir
                                   : (std::filesystem::path(out_dir) / j.label)
                                         .string());
  std::vector<Outcome> outcomes(jobs.size());
  const std::size_t workers = std::clamp<std::size_t>(
      jobs_n ? jobs_n : std::thread::hardware_concurrency(), 1, jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < jobs.size();)
      outcomes[i] = execute(jobs[i], dirs[i], trace);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  int code = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    report(out, jobs[i], outcomes[i], dirs[i]);
    if (!outcomes[i].error.empty()) err << "error: " << outcomes[i].error << '\n';
    code = std::max(code, outcomes[i].code);
  }
  return code;
}

}  // namespace tsnsim
