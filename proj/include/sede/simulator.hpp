#pragma once

// In-process deployment of the pool: a revoker, n guardians, enrolled
// actors with wallets, the ledger and the request queue. Every random draw
// comes from Rng::derive(seed, label, counter), so runs are reproducible.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sede/codec.hpp"
#include "sede/trace.hpp"

namespace sede {

struct SimConfig {
  std::string                 curve = "secp256k1";
  std::optional<CurveParams>  custom_curve;  // overrides `curve` when set
  SharePolicy                 policy{3, 5};
  std::uint64_t               seed = 1;
  PoolConfig                  pool;
  std::vector<DecisionPolicy> guardian_policies;  // one per guardian; missing ones approve

  CurvePtr make_curve() const;
};

/// Throws InvalidConfig, with the offending field in the message.
SimConfig sim_config_from_json(const Json& j);
Json      sim_config_to_json(const SimConfig& config);

struct WalletNote {
  Note          note;
  std::uint64_t leaf_index = 0;
  std::uint64_t created_in = 0;
};

struct Actor {
  std::string             name;
  FieldElement            key;
  CurvePoint              pub;
  FieldElement            id;
  std::vector<WalletNote> notes;

  std::uint64_t balance() const;
};

struct Payout {
  std::string   to;
  std::uint64_t amount = 0;
};

struct TxOutcome {
  std::uint64_t index = 0;
  TxKind        kind  = TxKind::Transfer;
  Sha256Digest  digest{};
};

class Simulator {
 public:
  /// Runs setup: revoker key, guardian dealing. Throws InvalidConfig.
  explicit Simulator(SimConfig config);

  const SimConfig&             config() const noexcept { return config_; }
  const Curve&                 curve() const noexcept { return *curve_; }
  const CurvePtr&              curve_ptr() const noexcept { return curve_; }
  const LedgerState&           ledger() const noexcept { return ledger_; }
  const RequestQueue&          queue() const noexcept { return queue_; }
  const std::vector<Guardian>& guardians() const noexcept { return guardians_; }
  const FieldElement&          revoker_key() const noexcept { return revoker_key_; }
  const std::vector<Actor>&    actors() const noexcept { return actors_; }

  /// Witness of every transaction built by this instance, by ledger index.
  /// Not persisted; a reloaded simulator has none for older transactions.
  const std::map<std::uint64_t, TransactionWitness>& witnesses() const noexcept { return witnesses_; }

  const Actor& enroll(const std::string& name);
  const Actor& actor(const std::string& name) const;
  bool         has_actor(const std::string& name) const;
  /// Actor name owning `account` (see account_id), if any.
  std::optional<std::string> name_of(const std::string& account) const;

  TxOutcome deposit(const std::string& to, std::uint64_t amount, const std::string& source = "external");
  TxOutcome deposit(std::span<const Payout> payouts, const std::string& source = "external");
  /// Greedy coin selection by leaf index; change goes back to the sender.
  /// Throws ConservationViolation when the balance is short, InvalidArity
  /// when the payment needs more notes or outputs than the pool allows.
  TxOutcome transfer(const std::string& from, const std::string& to, std::uint64_t amount);
  TxOutcome transfer(const std::string& from, std::span<const Payout> payouts);
  TxOutcome withdraw(const std::string& from, std::uint64_t amount, const std::string& recipient = "external");

  void set_policy(std::size_t guardian, DecisionPolicy policy);

  std::size_t       request(std::uint64_t tx_index);
  RequestStatus     decide(std::size_t request_id);
  std::vector<Note> decrypt(std::size_t request_id);
  TaintGraph        trace(std::uint64_t root_tx, const TraceOptions& options = {});

  /// Workspace layout: config.json, manifest.json, ledger.json,
  /// revoker.key.json, requests.json, guardians/guardian_<i>.share.json,
  /// actors/<name>.key.json.
  void             save(const std::filesystem::path& dir) const;
  static Simulator load(const std::filesystem::path& dir);
  Json             manifest() const;

 private:
  struct Restored {};
  Simulator(SimConfig config, Restored);
  static Simulator load_unchecked(const std::filesystem::path& dir);

  Actor&    actor_mut(const std::string& name);
  TxOutcome submit(const TransactionRequest& request, Actor* spender, const std::string& label);

  SimConfig                                   config_;
  CurvePtr                                    curve_;
  FieldElement                                revoker_key_;
  CurvePoint                                  guardian_pub_;
  std::vector<Guardian>                       guardians_;
  LedgerState                                 ledger_;
  RequestQueue                                queue_;
  std::vector<Actor>                          actors_;
  std::map<std::uint64_t, TransactionWitness> witnesses_;
};

}  // namespace sede
