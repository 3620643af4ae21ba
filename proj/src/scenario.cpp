#include "sede/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sede {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  fail(ErrorCode::ScenarioParseError, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void field_fail(std::size_t line, const char* key, const std::string& msg) {
  parse_fail(line, std::string("field '") + key + "': " + msg);
}

std::string text_field(const Json& j, const char* key, std::size_t line, std::optional<std::string> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    field_fail(line, key, "missing");
  }
  if (!j.at(key).is_string() || j.at(key).get<std::string>().empty()) field_fail(line, key, "expected a non-empty string");
  return j.at(key).get<std::string>();
}

std::uint64_t count_field(const Json& j, const char* key, std::size_t line, bool positive) {
  if (!j.contains(key)) field_fail(line, key, "missing");
  const Json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    field_fail(line, key, "expected a non-negative integer");
  }
  auto n = v.get<std::uint64_t>();
  if (positive && n == 0) field_fail(line, key, "expected a positive integer");
  return n;
}

bool flag_field(const Json& j, const char* key, std::size_t line, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) field_fail(line, key, "expected true or false");
  return j.at(key).get<bool>();
}

const std::set<std::string> kActions = {"enroll", "deposit", "transfer", "withdraw", "policy",
                                        "request", "decide", "decrypt", "trace"};

// Checks one action's fields and references against what earlier lines declared.
struct Checker {
  std::set<std::string> actors;
  std::uint64_t         txs      = 0;
  std::uint64_t         requests = 0;
  std::size_t           guardians = 0;

  void actor(const Json& j, const char* key, std::size_t line) {
    std::string name = text_field(j, key, line);
    if (!actors.contains(name)) field_fail(line, key, "actor '" + name + "' is not enrolled by an earlier line");
  }
  void tx(const Json& j, const char* key, std::size_t line) {
    if (count_field(j, key, line, false) >= txs) field_fail(line, key, "refers to a transaction that does not exist yet");
  }
  void request(const Json& j, const char* key, std::size_t line) {
    if (count_field(j, key, line, false) >= requests) field_fail(line, key, "refers to a request that was never posted");
  }

  // Either "to" + "amount" or a non-empty "payouts" list of {to, amount}.
  void payees(const Json& j, std::size_t line) {
    if (!j.contains("payouts")) {
      actor(j, "to", line);
      count_field(j, "amount", line, true);
      return;
    }
    if (j.contains("to") || j.contains("amount")) field_fail(line, "payouts", "cannot be combined with 'to'/'amount'");
    const Json& list = j.at("payouts");
    if (!list.is_array() || list.empty()) field_fail(line, "payouts", "expected a non-empty array");
    for (const auto& p : list) {
      if (!p.is_object()) field_fail(line, "payouts", "entries must be objects with 'to' and 'amount'");
      actor(p, "to", line);
      count_field(p, "amount", line, true);
    }
  }

  void check(const ScenarioAction& a) {
    const Json& j    = a.args;
    const auto  line = a.line;
    const bool  succeeds = !a.expect.has_value();
    if (a.action == "enroll") {
      std::string name = text_field(j, "actor", line);
      if (succeeds) actors.insert(name);
    } else if (a.action == "deposit") {
      payees(j, line);
      text_field(j, "source", line, "external");
      txs += succeeds;
    } else if (a.action == "transfer") {
      actor(j, "from", line);
      payees(j, line);
      txs += succeeds;
    } else if (a.action == "withdraw") {
      actor(j, "from", line);
      count_field(j, "amount", line, true);
      text_field(j, "recipient", line, "external");
      txs += succeeds;
    } else if (a.action == "policy") {
      auto g = count_field(j, "guardian", line, true);
      if (g > guardians) field_fail(line, "guardian", "there are only " + std::to_string(guardians) + " guardians");
      try {
        policy_from_json(j);
      } catch (const Error& e) {
        parse_fail(line, e.what());
      }
    } else if (a.action == "request") {
      tx(j, "tx", line);
      requests += succeeds;
    } else if (a.action == "decide" || a.action == "decrypt") {
      request(j, "request", line);
    } else if (a.action == "trace") {
      tx(j, "root", line);
      flag_field(j, "linkage", line, true);
    }
  }
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario           sc;
  std::istringstream in{std::string(text)};
  std::string        raw;
  std::size_t        line = 0;
  bool               have_header = false;
  Checker            checker;

  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      parse_fail(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) parse_fail(line, "expected a JSON object");

    if (!have_header) {
      sc.name = text_field(j, "scenario", line);
      Json cfg = j;
      cfg.erase("scenario");
      cfg.erase("description");
      try {
        sc.config = sim_config_from_json(cfg);
      } catch (const Error& e) {
        parse_fail(line, e.what());
      }
      checker.guardians = sc.config.policy.n;
      have_header       = true;
      continue;
    }

    ScenarioAction a;
    a.line   = line;
    a.action = text_field(j, "action", line);
    if (!kActions.contains(a.action)) field_fail(line, "action", "unknown action '" + a.action + "'");
    if (j.contains("expect")) {
      std::string name = text_field(j, "expect", line);
      if (name != "ok") {
        a.expect = parse_error_code(name);
        if (!a.expect) field_fail(line, "expect", "unknown error code '" + name + "'");
      }
    }
    a.args = std::move(j);
    checker.check(a);
    sc.actions.push_back(std::move(a));
  }
  if (!have_header) parse_fail(line, "scenario has no header line");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ScenarioParseError, "cannot read scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string display_account(const Simulator& sim, const std::string& account) {
  if (auto name = sim.name_of(account)) return *name;
  return "acct:" + account.substr(0, 16);
}

Json graph_summary(const Simulator& sim, const TaintGraph& graph) {
  Json j;
  j["root"]   = graph.root;
  j["status"] = std::string(to_string(graph.status));

  Json          edges     = Json::array();
  std::uint64_t deposited = 0, withdrawn = 0;
  Json          transfers = Json::array();
  for (const auto& e : graph.edges) {
    Json from = Json::array();
    if (e.from.empty()) from.push_back("external:" + e.recipient);
    for (const auto& f : e.from) from.push_back(display_account(sim, f));
    Json outs = Json::array();
    for (const auto& rn : e.outputs) {
      if (rn.note.value == 0) continue;
      std::string acct = account_id(sim.curve(), rn.note.owner);
      outs.push_back({{"account", display_account(sim, acct)}, {"value", rn.note.value}});
      if (e.kind == TxKind::Transfer && std::find(e.from.begin(), e.from.end(), acct) == e.from.end()) {
        transfers.push_back({{"tx", e.tx}, {"to", display_account(sim, acct)}, {"value", rn.note.value}});
      }
    }
    deposited += e.v_in;
    withdrawn += e.v_out;
    Json ej{{"tx", e.tx}, {"kind", std::string(to_string(e.kind))}, {"from", std::move(from)}, {"outputs", std::move(outs)},
            {"v_in", e.v_in}, {"v_out", e.v_out}, {"via_linkage", e.via_linkage}};
    if (e.kind == TxKind::Withdraw) ej["recipient"] = e.recipient;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);

  Json                                 frontier = Json::array();
  std::vector<std::string>             order;
  std::map<std::string, std::uint64_t> leftover;
  for (const auto& f : graph.frontier) {
    std::string name = display_account(sim, f.account);
    frontier.push_back({{"account", name}, {"value", f.value}, {"created_in", f.created_in}});
    if (!leftover.contains(name)) order.push_back(name);
    leftover[name] += f.value;
  }
  j["frontier"] = std::move(frontier);
  j["rejected"] = graph.rejected;

  Json left = Json::object();
  for (const auto& name : order) left[name] = leftover[name];
  j["recovered"] = {{"deposited", deposited}, {"transferred", std::move(transfers)}, {"withdrawn", withdrawn},
                    {"unspent", std::move(left)}};
  return j;
}

namespace {

Json notes_summary(const Simulator& sim, const std::vector<Note>& notes) {
  Json out = Json::array();
  for (const auto& n : notes) {
    out.push_back({{"account", display_account(sim, account_id(sim.curve(), n.owner))}, {"value", n.value}});
  }
  return out;
}

std::vector<Payout> payouts_of(const Json& j) {
  std::vector<Payout> out;
  if (!j.contains("payouts")) {
    out.push_back({j.at("to").get<std::string>(), j.at("amount").get<std::uint64_t>()});
    return out;
  }
  for (const auto& p : j.at("payouts")) out.push_back({p.at("to").get<std::string>(), p.at("amount").get<std::uint64_t>()});
  return out;
}

Json tx_outcome(const TxOutcome& o) {
  return {{"tx", o.index}, {"kind", std::string(to_string(o.kind))}, {"digest", to_hex(o.digest)}};
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, Simulator& sim) {
  RunResult result;
  Json      outcomes = Json::array();

  for (const auto& a : scenario.actions) {
    const Json& j = a.args;
    auto        S = [&](const char* key) { return j.at(key).get<std::string>(); };
    auto        U = [&](const char* key) { return j.at(key).get<std::uint64_t>(); };
    Json        out{{"line", a.line}, {"action", a.action}};
    try {
      Json detail;
      if (a.action == "enroll") {
        const Actor& actor = sim.enroll(S("actor"));
        detail             = {{"actor", actor.name}, {"public_key", point_to_json(sim.curve(), actor.pub)}};
      } else if (a.action == "deposit") {
        detail = tx_outcome(sim.deposit(payouts_of(j), j.value("source", std::string("external"))));
      } else if (a.action == "transfer") {
        detail = tx_outcome(sim.transfer(S("from"), payouts_of(j)));
      } else if (a.action == "withdraw") {
        detail = tx_outcome(sim.withdraw(S("from"), U("amount"), j.value("recipient", std::string("external"))));
      } else if (a.action == "policy") {
        std::size_t g = U("guardian");
        sim.set_policy(g, policy_from_json(j));
        detail = {{"guardian", g}, {"policy", policy_to_json(sim.guardians()[g - 1].policy)}};
      } else if (a.action == "request") {
        detail = {{"request", sim.request(U("tx"))}};
      } else if (a.action == "decide") {
        detail = {{"request", U("request")}, {"status", std::string(to_string(sim.decide(U("request"))))}};
      } else if (a.action == "decrypt") {
        detail = {{"request", U("request")}, {"notes", notes_summary(sim, sim.decrypt(U("request")))}};
      } else if (a.action == "trace") {
        TraceOptions opts;
        opts.use_linkage = j.value("linkage", true);
        TaintGraph g     = sim.trace(U("root"), opts);
        detail           = {{"edges", g.edge_ids()}, {"status", std::string(to_string(g.status))}};
        result.graph     = std::move(g);
      }
      out["status"] = "ok";
      out.update(detail);
      if (a.expect) {
        out["expected"] = std::string(to_string(*a.expect));
        result.ok       = false;
      }
    } catch (const Error& e) {
      out["status"]   = "error";
      out["error"]    = std::string(to_string(e.code()));
      out["message"]  = e.what();
      bool expected   = a.expect && *a.expect == e.code();
      out["expected"] = expected;
      result.ok       = result.ok && expected;
    }
    outcomes.push_back(std::move(out));
  }

  const auto& ledger = sim.ledger();
  Json        report;
  report["version"]    = kFormatVersion;
  report["scenario"]   = scenario.name;
  report["curve"]      = sim.curve().name();
  report["seed"]       = sim.config().seed;
  report["threshold"]  = sim.config().policy.t;
  report["guardians"]  = sim.config().policy.n;
  report["encryption"] = std::string(to_string(sim.config().pool.mode));
  report["outcomes"]   = std::move(outcomes);
  report["ledger"]     = {{"transactions", ledger.transactions.size()},
                          {"pool_balance", ledger.pool_balance},
                          {"root", ledger.tree.root().to_hex()},
                          {"digest", to_hex(ledger_digest(ledger))}};
  report["graph"]      = result.graph ? graph_summary(sim, *result.graph) : Json(nullptr);
  report["ok"]         = result.ok;
  result.report        = std::move(report);
  return result;
}

RunResult run_into_workspace(const Scenario& scenario, const std::filesystem::path& dir,
                             const std::filesystem::path& report_path) {
  Simulator sim(scenario.config);
  RunResult result = run_scenario(scenario, sim);

  std::filesystem::remove_all(dir);
  sim.save(dir);
  auto write = [](const std::filesystem::path& path, const Json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidConfig, "cannot write " + path.string());
    out << j.dump(2) << '\n';
  };
  if (result.graph) write(dir / "graph.json", graph_to_json(sim.curve(), *result.graph));
  write(report_path.empty() ? dir / "report.json" : report_path, result.report);
  return result;
}

}  // namespace sede
