#pragma once

// De-anonymization workflow: signed revoker requests, guardian votes with
// decryption contributions, the request queue, revoker-side decryption and
// nullifier scanning.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sede/kernels.hpp"
#include "sede/pool.hpp"
#include "sede/signature.hpp"
#include "sede/threshold.hpp"

namespace sede {

struct TxRef {
  std::uint64_t index = 0;
  Sha256Digest  payload_digest{};

  friend bool operator==(const TxRef&, const TxRef&) = default;
};

struct DeAnonRequest {
  TxRef      tx;
  Signature  signature;
  CurvePoint requester;

  friend bool operator==(const DeAnonRequest&, const DeAnonRequest&) = default;
};

/// Bytes the revoker signs for a request on `tx`.
Bytes request_message(const TxRef& tx);

/// Throws UnknownTransaction when `tx_index` is not on the ledger.
DeAnonRequest sign_request(const Curve& curve, const FieldElement& revoker_priv, const LedgerState& ledger,
                           std::uint64_t tx_index);

/// Signed by P_R, references an existing transaction, digest matches it.
bool verify_request(const Curve& curve, const DeAnonRequest& req, const CurvePoint& revoker_pub,
                    const LedgerState& ledger);

enum class Verdict { Approve, Reject };
std::string_view to_string(Verdict v) noexcept;
Verdict          parse_verdict(std::string_view text);

/// Scripted guardian behaviour: a verdict per transaction, otherwise the fallback.
struct DecisionPolicy {
  Verdict                           fallback = Verdict::Approve;
  std::map<std::uint64_t, Verdict>  per_tx;

  static DecisionPolicy always(Verdict v) { return {v, {}}; }
  Verdict decide(std::uint64_t tx_index) const;

  friend bool operator==(const DecisionPolicy&, const DecisionPolicy&) = default;
};

struct Guardian {
  GuardianShare  share;
  DecisionPolicy policy;
};

/// A decrypted note placed back on the ledger.
struct RevealedNote {
  Note          note;
  std::uint64_t created_in = 0;
  std::uint64_t leaf_index = 0;
  Commitment    commitment;
  Nullifier     nullifier;
};

/// Finds each note's leaf (CommitmentNotFound) and derives its nullifier.
std::vector<RevealedNote> locate_notes(const Curve& curve, const LedgerState& ledger, std::span<const Note> notes,
                                       std::uint64_t created_in);

/// Shows that a note created in `parent_tx` is spent in `child_tx`. The
/// witness travels with the proof: this is a transparent stand-in, checked by
/// recomputing the commitment and nullifier.
struct LinkageProof {
  std::uint64_t parent_tx = 0;
  std::uint64_t child_tx  = 0;
  Commitment    commitment;
  Nullifier     nullifier;
  Note          witness;
  std::uint64_t leaf_index = 0;

  friend bool operator==(const LinkageProof&, const LinkageProof&) = default;
};

/// Throws WitnessMismatch if no parent note is spent in `child`.
LinkageProof make_linkage_proof(const Curve& curve, std::span<const RevealedNote> parent_notes,
                                std::uint64_t parent_tx, const TransactionPayload& child, std::uint64_t child_tx);

/// c == commit(N) and eta == nullifier(N, i).
bool verify_linkage(const Curve& curve, const LinkageProof& proof);

/// Contribution points of one guardian: [bundle][point].
using ContributionSet = std::vector<std::vector<CurvePoint>>;

struct GuardianDecision {
  std::size_t                    guardian = 0;  // share index x_i
  Verdict                        verdict  = Verdict::Reject;
  std::string                    reason;
  bool                           consulted_script = false;
  bool                           via_linkage      = false;
  std::vector<std::size_t>       quorum;  // index set the Lagrange coefficients were taken over
  std::optional<ContributionSet> contributions;

  friend bool operator==(const GuardianDecision&, const GuardianDecision&) = default;
};

enum class RequestStatus { Pending, Approved, Rejected, Decrypted };
std::string_view to_string(RequestStatus s) noexcept;
RequestStatus    parse_request_status(std::string_view text);

struct QueueEntry {
  DeAnonRequest                 request;
  std::optional<LinkageProof>   linkage;
  std::vector<GuardianDecision> decisions;
  RequestStatus                 status = RequestStatus::Pending;
};

enum class QuorumState { Pending, Approved, Rejected };

/// Approved once t guardians approve, rejected once more than n - t reject.
/// Throws DuplicateGuardian.
QuorumState tally_quorum(std::span<const GuardianDecision> decisions, const SharePolicy& policy);

class RequestQueue {
 public:
  std::size_t post(DeAnonRequest req, std::optional<LinkageProof> linkage = std::nullopt);

  /// Appends a vote and moves a pending request to Approved/Rejected when
  /// the tally settles. Throws DuplicateGuardian, InvalidTransition (after
  /// decryption), InvalidRequest (unknown id).
  void record(std::size_t id, GuardianDecision decision, const SharePolicy& policy);

  void transition(std::size_t id, RequestStatus to);
  void mark_decrypted(std::size_t id) { transition(id, RequestStatus::Decrypted); }

  static bool transition_allowed(RequestStatus from, RequestStatus to) noexcept;

  const QueueEntry&              at(std::size_t id) const;
  std::size_t                    size() const noexcept { return entries_.size(); }
  const std::vector<QueueEntry>& entries() const noexcept { return entries_; }
  /// Most recent request for a transaction.
  std::optional<std::size_t> find_by_tx(std::uint64_t tx_index) const;

  /// Restores a queue from storage; statuses are taken as given.
  static RequestQueue from_entries(std::vector<QueueEntry> entries);

 private:
  QueueEntry& entry(std::size_t id);

  std::vector<QueueEntry> entries_;
};

/// A linkage is accepted when it verifies, names this request's transaction,
/// its commitment was created in the parent, its nullifier appears in the
/// child, and the parent's request was approved.
bool linkage_accepted(const Curve& curve, const LinkageProof& proof, const DeAnonRequest& req,
                      const LedgerState& ledger, const RequestQueue& queue);

struct VerdictOutcome {
  Verdict     verdict = Verdict::Reject;
  std::string reason;
  bool        consulted_script = false;
  bool        via_linkage      = false;
};

/// Invalid request: reject. Accepted linkage: approve without the script.
/// Otherwise the guardian's policy decides.
VerdictOutcome guardian_verdict(const Curve& curve, const Guardian& guardian, const DeAnonRequest& req,
                                const CurvePoint& revoker_pub, const LedgerState& ledger, const RequestQueue& queue,
                                const std::optional<LinkageProof>& linkage);

/// The verdict plus, on approval, B_i = b_i * C for every ciphertext point
/// of the transaction, with Lagrange coefficients over `quorum`.
GuardianDecision guardian_decide(const Curve& curve, const Guardian& guardian, const DeAnonRequest& req,
                                 const CurvePoint& revoker_pub, const LedgerState& ledger, const RequestQueue& queue,
                                 std::span<const FieldElement> quorum, const std::optional<LinkageProof>& linkage);

ContributionSet guardian_contributions(const Curve& curve, const GuardianShare& share,
                                       std::span<const FieldElement> quorum, const TransactionPayload& payload);

/// Polls every guardian on request `id`. Approvers form the quorum; their
/// contributions use Lagrange coefficients over that set.
RequestStatus convene_guardians(const Curve& curve, RequestQueue& queue, std::size_t id,
                                std::span<const Guardian> guardians, const CurvePoint& revoker_pub,
                                const LedgerState& ledger, const SharePolicy& policy);

/// Removes both layers from every ciphertext of `payload`. Throws
/// InsufficientContributions, MalformedData, DecodingFailure.
std::vector<Note> decrypt_payload_notes(const Curve& curve, const TransactionPayload& payload,
                                        std::span<const ContributionSet> contributions,
                                        const FieldElement& revoker_priv, std::size_t threshold);

/// Decrypts an approved request and marks it Decrypted. Throws
/// QuorumNotApproved, InvalidRequest, InsufficientContributions.
std::vector<Note> revoker_decrypt(const Curve& curve, RequestQueue& queue, std::size_t id,
                                  const FieldElement& revoker_priv, const LedgerState& ledger,
                                  const SharePolicy& policy);

/// Ledger positions where any of `notes` were spent. note_index in each hit
/// refers to `notes`.
std::vector<kernels::SpendHit> scan_for_spends(const LedgerState& ledger, std::span<const RevealedNote> notes,
                                               bool parallel = true);

}  // namespace sede
