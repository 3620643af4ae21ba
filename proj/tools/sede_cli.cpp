// Command-line front end for the pool simulator.
//
// Exit codes: 0 success, 1 scenario finished with unexpected outcomes,
// 2 usage or validation error, 3 protocol rejection (including a partial trace).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sede/error.hpp"
#include "sede/scenario.hpp"
#include "sede/simulator.hpp"

namespace fs = std::filesystem;
using namespace sede;

namespace {

struct Globals {
  std::string                  workspace = "sede-workspace";
  std::optional<std::uint64_t> seed;
  std::string                  config;
};

void write_file(const fs::path& path, const Json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

void print_tx(const Simulator& sim, const TxOutcome& o) {
  std::cout << "tx " << o.index << " " << to_string(o.kind) << " digest " << to_hex(o.digest) << "\n"
            << "pool balance " << sim.ledger().pool_balance << "\n";
}

std::string join_accounts(const Json& list) {
  std::string s;
  for (const auto& a : list) s += (s.empty() ? "" : ", ") + a.get<std::string>();
  return s;
}

void print_graph(const Json& summary) {
  std::cout << "trace from tx " << summary["root"].get<std::uint64_t>() << ": " << summary["status"].get<std::string>()
            << ", " << summary["edges"].size() << " edge(s)\n";
  for (const auto& e : summary["edges"]) {
    std::cout << "  tx " << e["tx"].get<std::uint64_t>() << " " << e["kind"].get<std::string>() << "  "
              << join_accounts(e["from"]) << " ->";
    bool first = true;
    for (const auto& o : e["outputs"]) {
      std::cout << (first ? " " : ", ") << o["account"].get<std::string>() << " " << o["value"].get<std::uint64_t>();
      first = false;
    }
    if (e["v_out"].get<std::uint64_t>() > 0) {
      std::cout << (first ? " " : ", ") << "withdrawn " << e["v_out"].get<std::uint64_t>() << " to "
                << e["recipient"].get<std::string>();
    }
    std::cout << (e["via_linkage"].get<bool>() ? "  [linkage]" : "") << "\n";
  }
  const auto& rec = summary["recovered"];
  std::cout << "deposited " << rec["deposited"].get<std::uint64_t>() << "\n";
  for (const auto& t : rec["transferred"]) {
    std::cout << "transferred " << t["value"].get<std::uint64_t>() << " to " << t["to"].get<std::string>() << " in tx "
              << t["tx"].get<std::uint64_t>() << "\n";
  }
  std::cout << "withdrawn " << rec["withdrawn"].get<std::uint64_t>() << "\n";
  std::cout << "unspent:";
  for (const auto& [name, value] : rec["unspent"].items()) std::cout << " " << name << "=" << value.get<std::uint64_t>();
  std::cout << "\n";
  if (!summary["rejected"].empty()) {
    std::cout << "rejected requests for tx:";
    for (const auto& t : summary["rejected"]) std::cout << " " << t.get<std::uint64_t>();
    std::cout << "\n";
  }
}

std::vector<Payout> payouts_with(const std::string& to, std::uint64_t amount, const std::vector<std::string>& extra) {
  std::vector<Payout> out{{to, amount}};
  for (const auto& item : extra) {
    auto eq = item.find('=');
    std::uint64_t v = 0;
    try {
      if (eq == std::string::npos) throw std::invalid_argument("no '='");
      std::size_t used = 0;
      v                = std::stoull(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "--also expects NAME=AMOUNT, got '" + item + "'");
    }
    out.push_back({item.substr(0, eq), v});
  }
  return out;
}

int cmd_init(const Globals& g, bool force) {
  if (g.config.empty()) fail(ErrorCode::InvalidConfig, "init needs --config <file>");
  SimConfig cfg = sim_config_from_json(read_file(g.config));
  if (g.seed) cfg.seed = *g.seed;
  if (fs::exists(fs::path(g.workspace) / "manifest.json") && !force) {
    fail(ErrorCode::InvalidConfig, "'" + g.workspace + "' is already initialized (use --force)");
  }
  if (force) fs::remove_all(g.workspace);
  Simulator sim(cfg);
  sim.save(g.workspace);
  std::cout << "initialized " << g.workspace << ": " << sim.curve().name() << ", " << cfg.policy.t << "-of-"
            << cfg.policy.n << " guardians, " << to_string(cfg.pool.mode) << " encryption\n"
            << "P_R " << sim.curve().point_to_hex(sim.ledger().keys.revoker) << "\n"
            << "P_G " << sim.curve().point_to_hex(sim.ledger().keys.guardians) << "\n";
  return 0;
}

int cmd_run(const Globals& g, const std::string& scenario_path, const std::string& report_path) {
  Scenario sc = load_scenario(scenario_path);
  if (g.seed) sc.config.seed = *g.seed;
  RunResult result = run_into_workspace(sc, g.workspace, report_path);

  for (const auto& o : result.report["outcomes"]) {
    std::cout << "line " << o["line"].get<std::size_t>() << " " << o["action"].get<std::string>() << ": "
              << o["status"].get<std::string>();
    if (o.contains("error")) std::cout << " " << o["error"].get<std::string>() << (o["expected"].get<bool>() ? " (expected)" : "");
    std::cout << "\n";
  }
  if (result.graph) print_graph(result.report["graph"]);
  std::cout << "ledger digest " << result.report["ledger"]["digest"].get<std::string>() << "\n"
            << (result.ok ? "scenario ok" : "scenario had unexpected outcomes") << "\n";
  return result.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SeDe shielded pool simulator with selective de-anonymization"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-w,--workspace", g.workspace, "Workspace directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_option("--config", g.config, "Config file for init");

  bool force = false;
  auto init  = app.add_subcommand("init", "Create keys, guardian shares and an empty ledger");
  init->add_flag("--force", force, "Replace an existing workspace");

  std::string name, from, to, source = "external", recipient = "external", scenario, report, graph_out;
  std::uint64_t amount = 0, index = 0;
  std::size_t   guardian = 0;
  std::string   verdict;
  std::vector<std::string> per_tx, also;
  bool no_linkage = false;

  auto enroll = app.add_subcommand("enroll", "Enroll an actor");
  enroll->add_option("name", name)->required();

  auto deposit = app.add_subcommand("deposit", "Deposit public funds into an actor's shielded account");
  deposit->add_option("to", to)->required();
  deposit->add_option("amount", amount)->required();
  deposit->add_option("--source", source, "Public address the funds come from");
  deposit->add_option("--also", also, "Additional payee, NAME=AMOUNT");

  auto transfer = app.add_subcommand("transfer", "Private transfer between actors");
  transfer->add_option("from", from)->required();
  transfer->add_option("to", to)->required();
  transfer->add_option("amount", amount)->required();
  transfer->add_option("--also", also, "Additional payee, NAME=AMOUNT");

  auto withdraw = app.add_subcommand("withdraw", "Withdraw from the pool to a public address");
  withdraw->add_option("from", from)->required();
  withdraw->add_option("amount", amount)->required();
  withdraw->add_option("--recipient", recipient, "Public destination address");

  auto balance = app.add_subcommand("balance", "Show actor balances and the pool balance");

  auto policy = app.add_subcommand("policy", "Script a guardian's decisions");
  policy->add_option("guardian", guardian, "Guardian index, 1-based")->required();
  policy->add_option("default", verdict, "approve | reject")->required();
  policy->add_option("--tx", per_tx, "Per-transaction override, e.g. 3=reject");

  auto request = app.add_subcommand("request", "Post a signed de-anonymization request");
  request->add_option("tx", index)->required();

  auto decide = app.add_subcommand("decide", "Poll the guardians on a request");
  decide->add_option("request", index)->required();

  auto decrypt = app.add_subcommand("decrypt", "Decrypt the notes of an approved request");
  decrypt->add_option("request", index)->required();

  auto trace = app.add_subcommand("trace", "Trace the taint graph from a transaction");
  trace->add_option("root", index)->required();
  trace->add_flag("--no-linkage", no_linkage, "Ask the decision script for every transaction");
  trace->add_option("--graph", graph_out, "Graph file (default <workspace>/graph.json)");

  auto run = app.add_subcommand("run", "Run a JSONL scenario into a fresh workspace");
  run->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  run->add_option("--report", report, "Report file (default <workspace>/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (init->parsed()) return cmd_init(g, force);
    if (run->parsed()) return cmd_run(g, scenario, report);

    Simulator sim = Simulator::load(g.workspace);
    int       rc  = 0;
    if (enroll->parsed()) {
      const Actor& a = sim.enroll(name);
      std::cout << "enrolled " << a.name << " " << sim.curve().point_to_hex(a.pub) << "\n";
    } else if (deposit->parsed()) {
      print_tx(sim, sim.deposit(payouts_with(to, amount, also), source));
    } else if (transfer->parsed()) {
      print_tx(sim, sim.transfer(from, payouts_with(to, amount, also)));
    } else if (withdraw->parsed()) {
      print_tx(sim, sim.withdraw(from, amount, recipient));
    } else if (balance->parsed()) {
      for (const auto& a : sim.actors()) std::cout << a.name << " " << a.balance() << "\n";
      std::cout << "pool " << sim.ledger().pool_balance << "\n";
    } else if (policy->parsed()) {
      DecisionPolicy p;
      p.fallback = parse_verdict(verdict);
      for (const auto& item : per_tx) {
        auto eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorCode::InvalidArgument, "--tx expects N=verdict, got '" + item + "'");
        std::uint64_t tx = 0;
        try {
          tx = std::stoull(item.substr(0, eq));
        } catch (const std::exception&) {
          fail(ErrorCode::InvalidArgument, "--tx expects N=verdict, got '" + item + "'");
        }
        p.per_tx[tx] = parse_verdict(item.substr(eq + 1));
      }
      sim.set_policy(guardian, p);
      std::cout << "guardian " << guardian << " policy " << policy_to_json(p).dump() << "\n";
    } else if (request->parsed()) {
      std::size_t id = sim.request(index);
      std::cout << "request " << id << " for tx " << index << "\n";
    } else if (decide->parsed()) {
      RequestStatus s = sim.decide(index);
      for (const auto& d : sim.queue().at(index).decisions) {
        std::cout << "guardian " << d.guardian << " " << to_string(d.verdict) << " (" << d.reason << ")\n";
      }
      std::cout << "request " << index << " " << to_string(s) << "\n";
      rc = s == RequestStatus::Approved ? 0 : 3;
    } else if (decrypt->parsed()) {
      for (const auto& n : sim.decrypt(index)) {
        std::cout << display_account(sim, account_id(sim.curve(), n.owner)) << " " << n.value << "\n";
      }
    } else if (trace->parsed()) {
      TraceOptions opts;
      opts.use_linkage = !no_linkage;
      TaintGraph graph = sim.trace(index, opts);
      fs::path   out   = graph_out.empty() ? fs::path(g.workspace) / "graph.json" : fs::path(graph_out);
      write_file(out, graph_to_json(sim.curve(), graph));
      print_graph(graph_summary(sim, graph));
      std::cout << "graph written to " << out.string() << "\n";
      rc = graph.status == TraceStatus::Complete ? 0 : 3;
    }
    sim.save(g.workspace);
    return rc;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_protocol_rejection(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
