#include "sede/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

#include "sede/error.hpp"
#include "sede/rng.hpp"

namespace sede {

namespace fs = std::filesystem;

namespace {

template <typename T>
T config_field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::InvalidConfig, std::string("config field '") + key + "' has the wrong type");
  }
}

template <typename T>
T required_field(const Json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::InvalidConfig, std::string("config field '") + key + "' is required");
  return config_field<T>(j, key, T{});
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedData, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

bool valid_actor_name(const std::string& name) {
  if (name.empty() || name.size() > 64) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

CurvePtr SimConfig::make_curve() const {
  if (custom_curve) return std::make_shared<const Curve>(*custom_curve);
  return Curve::by_name(curve);
}

SimConfig sim_config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidConfig, "config must be a JSON object");
  SimConfig c;
  if (j.contains("curve") && j.at("curve").is_object()) {
    c.custom_curve = parse_curve_params(j.at("curve").dump());
    c.curve        = c.custom_curve->name;
  } else {
    c.curve = config_field<std::string>(j, "curve", c.curve);
  }
  c.policy.t = required_field<std::size_t>(j, "threshold");
  c.policy.n = required_field<std::size_t>(j, "guardians");
  c.seed     = config_field<std::uint64_t>(j, "seed", c.seed);

  auto& p       = c.pool;
  p.tree_depth  = config_field<unsigned>(j, "tree_depth", p.tree_depth);
  p.root_window = config_field<std::size_t>(j, "root_window", p.root_window);
  p.max_inputs  = config_field<std::size_t>(j, "max_inputs", p.max_inputs);
  p.max_outputs = config_field<std::size_t>(j, "max_outputs", p.max_outputs);
  p.chain_id    = config_field<std::string>(j, "chain_id", p.chain_id);
  try {
    p.mode = parse_encryption_mode(config_field<std::string>(j, "encryption", "combined"));
  } catch (const Error& e) {
    fail(ErrorCode::InvalidConfig, std::string("config field 'encryption': ") + e.what());
  }

  if (j.contains("guardian_policies")) {
    const Json& pols = j.at("guardian_policies");
    if (!pols.is_array()) fail(ErrorCode::InvalidConfig, "config field 'guardian_policies' must be an array");
    for (const auto& pj : pols) {
      try {
        c.guardian_policies.push_back(policy_from_json(pj));
      } catch (const Error& e) {
        fail(ErrorCode::InvalidConfig, std::string("config field 'guardian_policies': ") + e.what());
      }
    }
  }

  if (p.tree_depth < 1 || p.tree_depth > 32) fail(ErrorCode::InvalidConfig, "config field 'tree_depth' must be in [1, 32]");
  if (p.max_inputs < 1 || p.max_outputs < 2 || p.max_inputs > 16 || p.max_outputs > 16) {
    fail(ErrorCode::InvalidConfig, "config fields 'max_inputs'/'max_outputs' out of range");
  }
  if (c.policy.t < 1 || c.policy.t > c.policy.n) {
    fail(ErrorCode::InvalidConfig, "config needs 1 <= threshold <= guardians");
  }
  if (!c.custom_curve && c.curve != "toy" && c.curve != "secp256k1") {
    fail(ErrorCode::InvalidConfig, "config field 'curve': unknown curve '" + c.curve + "'");
  }
  if (c.guardian_policies.size() > c.policy.n) {
    fail(ErrorCode::InvalidConfig, "more guardian policies than guardians");
  }
  return c;
}

Json sim_config_to_json(const SimConfig& c) {
  Json j;
  if (c.custom_curve) {
    j["curve"] = Json::parse(curve_params_to_json(*c.custom_curve));
  } else {
    j["curve"] = c.curve;
  }
  j["threshold"]   = c.policy.t;
  j["guardians"]   = c.policy.n;
  j["seed"]        = c.seed;
  j["encryption"]  = std::string(to_string(c.pool.mode));
  j["tree_depth"]  = c.pool.tree_depth;
  j["root_window"] = c.pool.root_window;
  j["max_inputs"]  = c.pool.max_inputs;
  j["max_outputs"] = c.pool.max_outputs;
  j["chain_id"]    = c.pool.chain_id;
  Json pols        = Json::array();
  for (const auto& p : c.guardian_policies) pols.push_back(policy_to_json(p));
  j["guardian_policies"] = std::move(pols);
  return j;
}

std::uint64_t Actor::balance() const {
  return std::accumulate(notes.begin(), notes.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const WalletNote& w) { return acc + w.note.value; });
}

Simulator::Simulator(SimConfig config, Restored)
    : config_(std::move(config)), curve_(config_.make_curve()), ledger_(curve_, PublicKeys{}, config_.pool) {
  try {
    config_.policy.validate(curve_->order());
  } catch (const Error& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
}

Simulator::Simulator(SimConfig config) : Simulator(std::move(config), Restored{}) {
  Rng rr       = Rng::derive(config_.seed, "setup/revoker");
  revoker_key_ = curve_->random_scalar(rr);

  Rng  gr       = Rng::derive(config_.seed, "setup/guardians");
  auto material = generate_guardian_keys(*curve_, config_.policy, gr);
  guardian_pub_ = material.public_key;
  for (std::size_t i = 0; i < material.shares.size(); ++i) {
    DecisionPolicy p = i < config_.guardian_policies.size() ? config_.guardian_policies[i] : DecisionPolicy{};
    guardians_.push_back({material.shares[i], p});
  }
  ledger_ = LedgerState(curve_, {curve_->mul_base(revoker_key_), guardian_pub_}, config_.pool);
}

const Actor& Simulator::enroll(const std::string& name) {
  if (!valid_actor_name(name)) fail(ErrorCode::InvalidArgument, "actor names use [A-Za-z0-9_-], got '" + name + "'");
  if (has_actor(name)) fail(ErrorCode::InvalidArgument, "actor '" + name + "' is already enrolled");
  Rng   rng = Rng::derive(config_.seed, "actor/" + name);
  Actor a;
  a.name = name;
  a.key  = curve_->random_scalar(rng);
  a.pub  = curve_->mul_base(a.key);
  a.id   = member_id(*curve_, a.pub);
  actors_.push_back(std::move(a));
  return actors_.back();
}

bool Simulator::has_actor(const std::string& name) const {
  return std::any_of(actors_.begin(), actors_.end(), [&](const Actor& a) { return a.name == name; });
}

const Actor& Simulator::actor(const std::string& name) const {
  for (const auto& a : actors_) {
    if (a.name == name) return a;
  }
  fail(ErrorCode::NotEnrolled, "actor '" + name + "' is not enrolled");
}

Actor& Simulator::actor_mut(const std::string& name) { return const_cast<Actor&>(actor(name)); }

std::optional<std::string> Simulator::name_of(const std::string& account) const {
  for (const auto& a : actors_) {
    if (account_id(*curve_, a.pub) == account) return a.name;
  }
  return std::nullopt;
}

TxOutcome Simulator::submit(const TransactionRequest& request, Actor* spender, const std::string& label) {
  const std::uint64_t index = ledger_.transactions.size();
  Rng                 rng   = Rng::derive(config_.seed, label, index);
  BuiltTransaction    built = build_transaction(ledger_, request, rng);

  const std::uint64_t first_leaf = ledger_.tree.size();
  apply_in_place(ledger_, built.payload);

  if (spender) {
    for (const auto& s : request.spends) {
      std::erase_if(spender->notes, [&](const WalletNote& w) { return w.leaf_index == s.leaf_index; });
    }
  }
  for (std::size_t j = 0; j < built.witness.outputs.size(); ++j) {
    const Note& out = built.witness.outputs[j];
    if (out.value == 0) continue;
    for (auto& a : actors_) {
      if (a.pub == out.owner) a.notes.push_back({out, first_leaf + j, index});
    }
  }
  witnesses_[index] = std::move(built.witness);
  return {index, kind_of(ledger_.transactions.back()), payload_digest(*curve_, ledger_.transactions.back())};
}

TxOutcome Simulator::deposit(const std::string& to, std::uint64_t amount, const std::string& source) {
  return deposit(std::vector<Payout>{{to, amount}}, source);
}

namespace {

std::uint64_t payout_total(std::span<const Payout> payouts, const char* what) {
  if (payouts.empty()) fail(ErrorCode::InvalidArgument, std::string(what) + " needs at least one payee");
  std::uint64_t total = 0;
  for (const auto& p : payouts) {
    if (p.amount == 0) fail(ErrorCode::InvalidArgument, std::string(what) + " amounts must be positive");
    if (__builtin_add_overflow(total, p.amount, &total)) fail(ErrorCode::InvalidArgument, "amounts overflow");
  }
  return total;
}

}  // namespace

TxOutcome Simulator::deposit(std::span<const Payout> payouts, const std::string& source) {
  const std::uint64_t total = payout_total(payouts, "deposit");
  Rng                 rng   = Rng::derive(config_.seed, "notes", ledger_.transactions.size());
  TransactionRequest  req;
  for (const auto& p : payouts) {
    const Actor& dst = actor(p.to);
    req.outputs.push_back({p.amount, dst.pub, rng.element(hash_field()), dst.id});
  }
  const Actor& first = actor(payouts.front().to);
  req.v_in           = total;
  req.recipient      = source;
  req.padding_owner  = first.pub;
  req.padding_id     = first.id;
  return submit(req, nullptr, "tx");
}

namespace {

std::vector<WalletNote> select_coins(const Actor& from, std::uint64_t amount, std::size_t max_inputs) {
  if (from.balance() < amount) {
    fail(ErrorCode::ConservationViolation, "'" + from.name + "' holds " + std::to_string(from.balance()) +
                                               ", needs " + std::to_string(amount));
  }
  std::vector<WalletNote> wallet = from.notes;
  std::sort(wallet.begin(), wallet.end(), [](const auto& a, const auto& b) { return a.leaf_index < b.leaf_index; });
  std::vector<WalletNote> picked;
  std::uint64_t           total = 0;
  for (const auto& w : wallet) {
    if (total >= amount) break;
    picked.push_back(w);
    total += w.note.value;
  }
  if (picked.size() > max_inputs) {
    fail(ErrorCode::InvalidArity, "'" + from.name + "' needs " + std::to_string(picked.size()) +
                                      " notes for this payment; at most " + std::to_string(max_inputs) + " fit");
  }
  return picked;
}

}  // namespace

TxOutcome Simulator::transfer(const std::string& from, const std::string& to, std::uint64_t amount) {
  return transfer(from, std::vector<Payout>{{to, amount}});
}

TxOutcome Simulator::transfer(const std::string& from, std::span<const Payout> payouts) {
  const std::uint64_t amount = payout_total(payouts, "transfer");
  Actor&              src    = actor_mut(from);
  for (const auto& p : payouts) actor(p.to);
  auto picked = select_coins(src, amount, config_.pool.max_inputs);

  Rng                rng = Rng::derive(config_.seed, "notes", ledger_.transactions.size());
  TransactionRequest req;
  std::uint64_t      total = 0;
  for (const auto& w : picked) {
    req.spends.push_back({w.note, w.leaf_index, src.key});
    total += w.note.value;
  }
  for (const auto& p : payouts) {
    const Actor& dst = actor(p.to);
    req.outputs.push_back({p.amount, dst.pub, rng.element(hash_field()), dst.id});
  }
  if (total > amount) req.outputs.push_back({total - amount, src.pub, rng.element(hash_field()), src.id});
  req.padding_owner = src.pub;
  req.padding_id    = src.id;
  return submit(req, &src, "tx");
}

TxOutcome Simulator::withdraw(const std::string& from, std::uint64_t amount, const std::string& recipient) {
  if (amount == 0) fail(ErrorCode::InvalidArgument, "withdrawal amount must be positive");
  Actor& src    = actor_mut(from);
  auto   picked = select_coins(src, amount, config_.pool.max_inputs);

  Rng                rng = Rng::derive(config_.seed, "notes", ledger_.transactions.size());
  TransactionRequest req;
  std::uint64_t      total = 0;
  for (const auto& w : picked) {
    req.spends.push_back({w.note, w.leaf_index, src.key});
    total += w.note.value;
  }
  if (total > amount) req.outputs.push_back({total - amount, src.pub, rng.element(hash_field()), src.id});
  req.v_out         = amount;
  req.recipient     = recipient;
  req.padding_owner = src.pub;
  req.padding_id    = src.id;
  return submit(req, &src, "tx");
}

void Simulator::set_policy(std::size_t guardian, DecisionPolicy policy) {
  if (guardian < 1 || guardian > guardians_.size()) {
    fail(ErrorCode::InvalidArgument, "guardian index must be in [1, " + std::to_string(guardians_.size()) + "]");
  }
  guardians_[guardian - 1].policy = std::move(policy);
}

std::size_t Simulator::request(std::uint64_t tx_index) {
  return queue_.post(sign_request(*curve_, revoker_key_, ledger_, tx_index));
}

RequestStatus Simulator::decide(std::size_t request_id) {
  return convene_guardians(*curve_, queue_, request_id, guardians_, ledger_.keys.revoker, ledger_, config_.policy);
}

std::vector<Note> Simulator::decrypt(std::size_t request_id) {
  return revoker_decrypt(*curve_, queue_, request_id, revoker_key_, ledger_, config_.policy);
}

TaintGraph Simulator::trace(std::uint64_t root_tx, const TraceOptions& options) {
  return trace_subgraph(*curve_, ledger_, root_tx, revoker_key_, guardians_, config_.policy, queue_, options);
}

Json Simulator::manifest() const {
  Json j;
  j["version"]   = kFormatVersion;
  j["curve"]     = curve_->name();
  j["threshold"] = config_.policy.t;
  j["guardians"] = config_.policy.n;
  j["P_R"]       = point_to_json(*curve_, ledger_.keys.revoker);
  j["P_G"]       = point_to_json(*curve_, ledger_.keys.guardians);
  Json actors    = Json::array();
  for (const auto& a : actors_) {
    actors.push_back({{"name", a.name}, {"public_key", point_to_json(*curve_, a.pub)}, {"id", a.id.to_hex()}});
  }
  j["actors"] = std::move(actors);
  return j;
}

void Simulator::save(const fs::path& dir) const {
  fs::create_directories(dir / "guardians");
  fs::create_directories(dir / "actors");
  write_json(dir / "config.json", sim_config_to_json(config_));
  write_json(dir / "manifest.json", manifest());
  write_json(dir / "ledger.json", ledger_to_json(ledger_));
  write_json(dir / "requests.json", queue_to_json(*curve_, queue_));
  write_json(dir / "revoker.key.json", {{"version", kFormatVersion}, {"key", revoker_key_.to_hex()}});
  for (const auto& g : guardians_) {
    Json j      = share_to_json(g.share, config_.policy);
    j["policy"] = policy_to_json(g.policy);
    write_json(dir / "guardians" / ("guardian_" + std::to_string(g.share.index.value().get_ui()) + ".share.json"), j);
  }
  for (const auto& a : actors_) {
    Json notes = Json::array();
    for (const auto& w : a.notes) {
      notes.push_back({{"note", note_to_json(*curve_, w.note)}, {"leaf_index", w.leaf_index}, {"created_in", w.created_in}});
    }
    write_json(dir / "actors" / (a.name + ".key.json"),
               {{"version", kFormatVersion}, {"name", a.name}, {"key", a.key.to_hex()}, {"notes", std::move(notes)}});
  }
}

Simulator Simulator::load(const fs::path& dir) {
  try {
    return load_unchecked(dir);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedData, "workspace '" + dir.string() + "': " + e.what());
  }
}

Simulator Simulator::load_unchecked(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.json")) {
    fail(ErrorCode::InvalidConfig, "'" + dir.string() + "' is not an initialized workspace");
  }
  Simulator   sim(sim_config_from_json(read_json(dir / "config.json")), Restored{});
  const auto& curve    = *sim.curve_;
  Json        manifest = read_json(dir / "manifest.json");

  sim.revoker_key_  = field_from_json(curve.scalar_field(), read_json(dir / "revoker.key.json").at("key"));
  sim.guardian_pub_ = point_from_json(curve, manifest.at("P_G"));
  if (curve.mul_base(sim.revoker_key_) != point_from_json(curve, manifest.at("P_R"))) {
    fail(ErrorCode::MalformedData, "revoker key does not match the manifest");
  }
  for (std::size_t i = 1; i <= sim.config_.policy.n; ++i) {
    Json j = read_json(dir / "guardians" / ("guardian_" + std::to_string(i) + ".share.json"));
    sim.guardians_.push_back({share_from_json(curve, j), j.contains("policy") ? policy_from_json(j.at("policy"))
                                                                             : DecisionPolicy{}});
  }

  sim.ledger_ = ledger_from_json(sim.curve_, read_json(dir / "ledger.json"));
  if (sim.ledger_.keys.revoker != curve.mul_base(sim.revoker_key_) || sim.ledger_.keys.guardians != sim.guardian_pub_) {
    fail(ErrorCode::MalformedData, "ledger keys do not match the manifest");
  }
  sim.queue_ = queue_from_json(curve, read_json(dir / "requests.json"));

  for (const auto& entry : manifest.at("actors")) {
    const std::string name = entry.at("name").get<std::string>();
    Json              j    = read_json(dir / "actors" / (name + ".key.json"));
    Actor             a;
    a.name = name;
    a.key  = field_from_json(curve.scalar_field(), j.at("key"));
    a.pub  = curve.mul_base(a.key);
    a.id   = member_id(curve, a.pub);
    if (a.pub != point_from_json(curve, entry.at("public_key"))) {
      fail(ErrorCode::MalformedData, "key file of '" + name + "' does not match the manifest");
    }
    for (const auto& w : j.at("notes")) {
      a.notes.push_back({note_from_json(curve, w.at("note")), w.at("leaf_index").get<std::uint64_t>(),
                         w.at("created_in").get<std::uint64_t>()});
    }
    sim.actors_.push_back(std::move(a));
  }
  return sim;
}

}  // namespace sede
