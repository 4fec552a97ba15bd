#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hmlbn/prefix.hpp"
#include "hmlbn/topology.hpp"

namespace hmlbn {

struct Timers {
  double keepalive = 3.0;   // R
  double dead_time = 9.0;   // D
  double lifetime = 300.0;  // L
};

struct MobileNodeSpec {
  std::string name;
  MobilePrefix prefix;
  std::string l2_address;
};

enum class MnAction { Attach, Move, Detach, Reset };

struct ScriptStep {
  double at = 0.0;
  std::string mn;
  MnAction action = MnAction::Attach;
  std::string cell;  // Attach / Move
};

/// Random-walk mobility over regions: Exp(mu) dwell, then a move with
/// probability p to a uniformly chosen adjacent region.
struct StochasticSpec {
  std::string mn;
  std::string start_region;
  double start = 0.0;
  double mu = 0.1;
  double p = 0.5;
  std::map<std::string, std::vector<std::string>> adjacency;
};

struct MobilitySpec {
  std::vector<MobilePrefix> range;
  std::vector<MobileNodeSpec> nodes;
  std::vector<ScriptStep> script;
  std::vector<StochasticSpec> stochastic;
};

struct FlowSpec {
  std::string id;
  std::string src;  // LER name (fixed CN behind it) or MN name
  std::string dst;  // MN name
  double rate_pps = 100.0;
  double start = 0.0;
  double stop = 1.0;
};

struct Flags {
  bool reflect_to_previous_ler = false;
  bool overlap_attach = false;
  double overlap_seconds = 0.1;
  double registration_delay = 0.005;
  bool replicate_at_ler = false;
  bool replicate_at_aler = false;
  double replication_seconds = 0.05;
  std::size_t queue_limit = 64;
};

struct FaultSpec {
  double at = 0.0;
  std::string node;
};

struct AnalysisSpec {
  std::optional<std::string> ha;  // hypothetical home-agent vertex
};

struct Scenario {
  std::string name;
  std::string description;
  double duration = 10.0;
  TopologySpec topology;
  Timers timers;
  MobilitySpec mobility;
  std::vector<FlowSpec> flows;
  Flags flags;
  std::vector<FaultSpec> faults;
  AnalysisSpec analysis;
  std::uint64_t seed = 1;
};

struct Diagnostic {
  std::string path;  // e.g. "timers.lifetime", "topology.nodes[3].rid"
  std::string code;  // "unknown-key", "missing", "type", "value", or an error code name
  std::string message;
};

std::string to_jsonl(const std::vector<Diagnostic>& diags);

/// Schema and invariant checks. Returns the scenario only when `diags` stays empty.
std::optional<Scenario> parse_scenario(const nlohmann::json& doc, std::vector<Diagnostic>& diags);
/// Throws Error(ScenarioInvalid) whose message lists the diagnostics.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);
std::vector<Diagnostic> validate_scenario_file(const std::string& path);

nlohmann::ordered_json to_json(const Scenario& scenario);

}  // namespace hmlbn
