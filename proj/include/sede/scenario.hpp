#pragma once

// JSONL scenarios. Line 1 is the header (config fields plus "scenario");
// each following non-blank line is one action object:
//
//   {"action": "enroll",   "actor": "A1"}
//   {"action": "deposit",  "to": "A1", "amount": 100, "source": "eve"}
//   {"action": "transfer", "from": "A1", "to": "A2", "amount": 40}
//   {"action": "transfer", "from": "A1", "payouts": [{"to": "A2", "amount": 5}, {"to": "A3", "amount": 7}]}
//   {"action": "withdraw", "from": "A1", "amount": 30, "recipient": "cex"}
//   {"action": "policy",   "guardian": 2, "default": "reject", "per_tx": {"0": "approve"}}
//   {"action": "request",  "tx": 0}
//   {"action": "decide",   "request": 0}
//   {"action": "decrypt",  "request": 0}
//   {"action": "trace",    "root": 0, "linkage": true}
//
// Any action may carry "expect": "<ErrorCode>" when it is meant to fail.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sede/error.hpp"
#include "sede/simulator.hpp"

namespace sede {

struct ScenarioAction {
  std::size_t              line = 0;
  std::string              action;
  Json                     args;
  std::optional<ErrorCode> expect;
};

struct Scenario {
  std::string                 name;
  SimConfig                   config;
  std::vector<ScenarioAction> actions;
};

/// Throws ScenarioParseError ("line N: field 'x': ...").
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

struct RunResult {
  Json                      report;
  std::optional<TaintGraph> graph;  // from the last trace action
  bool                      ok = true;
};

/// Executes every action in order against `sim`, which must have been
/// built from scenario.config. Errors are recorded, not thrown; an error
/// that was not expected (or an expected one that did not happen) clears `ok`.
RunResult run_scenario(const Scenario& scenario, Simulator& sim);

/// Runs the scenario in a fresh simulator and writes the workspace files,
/// graph.json (when a trace ran) and the report into `dir`, replacing
/// anything already there. `report_path` defaults to dir/report.json.
RunResult run_into_workspace(const Scenario& scenario, const std::filesystem::path& dir,
                             const std::filesystem::path& report_path = {});

/// Edge list, frontier and recovered amounts with actor names substituted
/// for account keys.
Json graph_summary(const Simulator& sim, const TaintGraph& graph);

/// Display name of an account: actor name, or a shortened key.
std::string display_account(const Simulator& sim, const std::string& account);

}  // namespace sede
