#include "sede/protocol.hpp"

#include <algorithm>
#include <set>

#include "sede/error.hpp"

namespace sede {

namespace {

std::size_t index_of(const GuardianShare& share) { return static_cast<std::size_t>(share.index.value().get_ui()); }

const TransactionPayload& tx_at(const LedgerState& ledger, std::uint64_t index) {
  if (index >= ledger.transactions.size()) {
    fail(ErrorCode::UnknownTransaction, "no transaction at index " + std::to_string(index));
  }
  return ledger.transactions[index];
}

// Leaf index of the first commitment created by each transaction.
std::uint64_t first_leaf_of(const LedgerState& ledger, std::uint64_t tx_index) {
  std::uint64_t offset = 0;
  for (std::uint64_t t = 0; t < tx_index; ++t) offset += ledger.transactions[t].new_commitments.size();
  return offset;
}

}  // namespace

Bytes request_message(const TxRef& tx) {
  Hasher h("sede/deanon-request");
  h.add(tx.index);
  h.add(std::span<const std::uint8_t>(tx.payload_digest));
  return h.bytes();
}

DeAnonRequest sign_request(const Curve& curve, const FieldElement& revoker_priv, const LedgerState& ledger,
                           std::uint64_t tx_index) {
  const auto&   payload = tx_at(ledger, tx_index);
  DeAnonRequest req;
  req.tx        = {tx_index, payload_digest(curve, payload)};
  req.signature = ecdsa_sign(curve, revoker_priv, request_message(req.tx));
  req.requester = curve.mul_base(revoker_priv);
  return req;
}

bool verify_request(const Curve& curve, const DeAnonRequest& req, const CurvePoint& revoker_pub,
                    const LedgerState& ledger) {
  if (req.requester != revoker_pub) return false;
  if (req.tx.index >= ledger.transactions.size()) return false;
  if (payload_digest(curve, ledger.transactions[req.tx.index]) != req.tx.payload_digest) return false;
  return ecdsa_verify(curve, revoker_pub, request_message(req.tx), req.signature);
}

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Approve ? "approve" : "reject"; }

Verdict parse_verdict(std::string_view text) {
  if (text == "approve") return Verdict::Approve;
  if (text == "reject") return Verdict::Reject;
  fail(ErrorCode::InvalidArgument, "verdict must be 'approve' or 'reject', got '" + std::string(text) + "'");
}

Verdict DecisionPolicy::decide(std::uint64_t tx_index) const {
  auto it = per_tx.find(tx_index);
  return it == per_tx.end() ? fallback : it->second;
}

std::vector<RevealedNote> locate_notes(const Curve& curve, const LedgerState& ledger, std::span<const Note> notes,
                                       std::uint64_t created_in) {
  const auto&               payload = tx_at(ledger, created_in);
  const std::uint64_t       base    = first_leaf_of(ledger, created_in);
  std::vector<RevealedNote> out;
  out.reserve(notes.size());
  for (const auto& note : notes) {
    Commitment c  = commit(curve, note);
    auto       it = std::find(payload.new_commitments.begin(), payload.new_commitments.end(), c);
    if (it == payload.new_commitments.end()) {
      fail(ErrorCode::CommitmentNotFound, "note is not among the commitments of transaction " + std::to_string(created_in));
    }
    std::uint64_t leaf = base + static_cast<std::uint64_t>(it - payload.new_commitments.begin());
    out.push_back({note, created_in, leaf, c, derive_nullifier(curve, note, leaf)});
  }
  return out;
}

LinkageProof make_linkage_proof(const Curve& curve, std::span<const RevealedNote> parent_notes,
                                std::uint64_t parent_tx, const TransactionPayload& child, std::uint64_t child_tx) {
  const auto& spent = child.spent_nullifiers;
  for (const auto& rn : parent_notes) {
    if (rn.created_in != parent_tx) continue;
    if (std::find(spent.begin(), spent.end(), rn.nullifier) == spent.end()) continue;
    LinkageProof proof{parent_tx, child_tx, rn.commitment, rn.nullifier, rn.note, rn.leaf_index};
    if (!verify_linkage(curve, proof)) break;
    return proof;
  }
  fail(ErrorCode::WitnessMismatch, "no note of transaction " + std::to_string(parent_tx) + " is spent in transaction " +
                                       std::to_string(child_tx));
}

bool verify_linkage(const Curve& curve, const LinkageProof& proof) {
  return commit(curve, proof.witness) == proof.commitment &&
         derive_nullifier(curve, proof.witness, proof.leaf_index) == proof.nullifier;
}

std::string_view to_string(RequestStatus s) noexcept {
  switch (s) {
    case RequestStatus::Pending: return "pending";
    case RequestStatus::Approved: return "approved";
    case RequestStatus::Rejected: return "rejected";
    case RequestStatus::Decrypted: return "decrypted";
  }
  return "unknown";
}

RequestStatus parse_request_status(std::string_view text) {
  for (auto s : {RequestStatus::Pending, RequestStatus::Approved, RequestStatus::Rejected, RequestStatus::Decrypted}) {
    if (to_string(s) == text) return s;
  }
  fail(ErrorCode::MalformedData, "unknown request status '" + std::string(text) + "'");
}

QuorumState tally_quorum(std::span<const GuardianDecision> decisions, const SharePolicy& policy) {
  std::set<std::size_t> seen;
  std::size_t           approvals = 0, rejections = 0;
  for (const auto& d : decisions) {
    if (!seen.insert(d.guardian).second) {
      fail(ErrorCode::DuplicateGuardian, "guardian " + std::to_string(d.guardian) + " voted twice");
    }
    (d.verdict == Verdict::Approve ? approvals : rejections)++;
  }
  if (approvals >= policy.t) return QuorumState::Approved;
  if (rejections > policy.n - policy.t) return QuorumState::Rejected;
  return QuorumState::Pending;
}

std::size_t RequestQueue::post(DeAnonRequest req, std::optional<LinkageProof> linkage) {
  entries_.push_back({std::move(req), std::move(linkage), {}, RequestStatus::Pending});
  return entries_.size() - 1;
}

QueueEntry& RequestQueue::entry(std::size_t id) {
  if (id >= entries_.size()) fail(ErrorCode::InvalidRequest, "no request with id " + std::to_string(id));
  return entries_[id];
}

const QueueEntry& RequestQueue::at(std::size_t id) const {
  if (id >= entries_.size()) fail(ErrorCode::InvalidRequest, "no request with id " + std::to_string(id));
  return entries_[id];
}

void RequestQueue::record(std::size_t id, GuardianDecision decision, const SharePolicy& policy) {
  auto& e = entry(id);
  if (e.status == RequestStatus::Decrypted) {
    fail(ErrorCode::InvalidTransition, "request " + std::to_string(id) + " is already decrypted");
  }
  auto decisions = e.decisions;
  decisions.push_back(std::move(decision));
  QuorumState q = tally_quorum(decisions, policy);
  e.decisions   = std::move(decisions);
  if (e.status != RequestStatus::Pending) return;
  if (q == QuorumState::Approved) e.status = RequestStatus::Approved;
  if (q == QuorumState::Rejected) e.status = RequestStatus::Rejected;
}

bool RequestQueue::transition_allowed(RequestStatus from, RequestStatus to) noexcept {
  switch (from) {
    case RequestStatus::Pending: return to == RequestStatus::Approved || to == RequestStatus::Rejected;
    case RequestStatus::Approved: return to == RequestStatus::Decrypted;
    default: return false;
  }
}

void RequestQueue::transition(std::size_t id, RequestStatus to) {
  auto& e = entry(id);
  if (!transition_allowed(e.status, to)) {
    fail(ErrorCode::InvalidTransition, "request " + std::to_string(id) + ": " + std::string(to_string(e.status)) +
                                           " -> " + std::string(to_string(to)));
  }
  e.status = to;
}

std::optional<std::size_t> RequestQueue::find_by_tx(std::uint64_t tx_index) const {
  for (std::size_t i = entries_.size(); i-- > 0;) {
    if (entries_[i].request.tx.index == tx_index) return i;
  }
  return std::nullopt;
}

RequestQueue RequestQueue::from_entries(std::vector<QueueEntry> entries) {
  RequestQueue q;
  q.entries_ = std::move(entries);
  return q;
}

bool linkage_accepted(const Curve& curve, const LinkageProof& proof, const DeAnonRequest& req,
                      const LedgerState& ledger, const RequestQueue& queue) {
  if (proof.child_tx != req.tx.index || proof.parent_tx >= proof.child_tx) return false;
  if (proof.child_tx >= ledger.transactions.size()) return false;
  if (!verify_linkage(curve, proof)) return false;

  const auto& created = ledger.transactions[proof.parent_tx].new_commitments;
  const auto& spent   = ledger.transactions[proof.child_tx].spent_nullifiers;
  if (std::find(created.begin(), created.end(), proof.commitment) == created.end()) return false;
  if (std::find(spent.begin(), spent.end(), proof.nullifier) == spent.end()) return false;

  for (const auto& e : queue.entries()) {
    if (e.request.tx.index == proof.parent_tx &&
        (e.status == RequestStatus::Approved || e.status == RequestStatus::Decrypted)) {
      return true;
    }
  }
  return false;
}

VerdictOutcome guardian_verdict(const Curve& curve, const Guardian& guardian, const DeAnonRequest& req,
                                const CurvePoint& revoker_pub, const LedgerState& ledger, const RequestQueue& queue,
                                const std::optional<LinkageProof>& linkage) {
  if (!verify_request(curve, req, revoker_pub, ledger)) return {Verdict::Reject, "invalid request", false, false};
  if (linkage && linkage_accepted(curve, *linkage, req, ledger, queue)) {
    return {Verdict::Approve, "descendant of approved transaction " + std::to_string(linkage->parent_tx), false, true};
  }
  Verdict v = guardian.policy.decide(req.tx.index);
  return {v, "policy", true, false};
}

ContributionSet guardian_contributions(const Curve& curve, const GuardianShare& share,
                                       std::span<const FieldElement> quorum, const TransactionPayload& payload) {
  FieldElement    b = compute_contribution_scalar(share, quorum);
  ContributionSet out;
  out.reserve(payload.ciphertexts.size());
  for (const auto& bundle : payload.ciphertexts) {
    out.push_back(kernels::parallel::scale_points(curve, b, bundle.first_components()));
  }
  return out;
}

GuardianDecision guardian_decide(const Curve& curve, const Guardian& guardian, const DeAnonRequest& req,
                                 const CurvePoint& revoker_pub, const LedgerState& ledger, const RequestQueue& queue,
                                 std::span<const FieldElement> quorum, const std::optional<LinkageProof>& linkage) {
  VerdictOutcome   v = guardian_verdict(curve, guardian, req, revoker_pub, ledger, queue, linkage);
  GuardianDecision d;
  d.guardian         = index_of(guardian.share);
  d.verdict          = v.verdict;
  d.reason           = std::move(v.reason);
  d.consulted_script = v.consulted_script;
  d.via_linkage      = v.via_linkage;
  if (d.verdict == Verdict::Approve && !quorum.empty()) {
    for (const auto& x : quorum) d.quorum.push_back(static_cast<std::size_t>(x.value().get_ui()));
    d.contributions = guardian_contributions(curve, guardian.share, quorum, tx_at(ledger, req.tx.index));
  }
  return d;
}

RequestStatus convene_guardians(const Curve& curve, RequestQueue& queue, std::size_t id,
                                std::span<const Guardian> guardians, const CurvePoint& revoker_pub,
                                const LedgerState& ledger, const SharePolicy& policy) {
  const QueueEntry& e = queue.at(id);
  if (e.status != RequestStatus::Pending) {
    fail(ErrorCode::InvalidTransition, "request " + std::to_string(id) + " is " + std::string(to_string(e.status)));
  }
  const DeAnonRequest               req     = e.request;
  const std::optional<LinkageProof> linkage = e.linkage;

  std::vector<VerdictOutcome> verdicts;
  std::vector<FieldElement>   approvers;
  for (const auto& g : guardians) {
    verdicts.push_back(guardian_verdict(curve, g, req, revoker_pub, ledger, queue, linkage));
    if (verdicts.back().verdict == Verdict::Approve) approvers.push_back(g.share.index);
  }
  // Contributions are only worth computing when they can be used.
  std::span<const FieldElement> quorum;
  if (approvers.size() >= policy.t) quorum = approvers;

  for (std::size_t i = 0; i < guardians.size(); ++i) {
    GuardianDecision d;
    d.guardian         = index_of(guardians[i].share);
    d.verdict          = verdicts[i].verdict;
    d.reason           = verdicts[i].reason;
    d.consulted_script = verdicts[i].consulted_script;
    d.via_linkage      = verdicts[i].via_linkage;
    if (d.verdict == Verdict::Approve && !quorum.empty()) {
      for (const auto& x : quorum) d.quorum.push_back(static_cast<std::size_t>(x.value().get_ui()));
      d.contributions = guardian_contributions(curve, guardians[i].share, quorum, tx_at(ledger, req.tx.index));
    }
    queue.record(id, std::move(d), policy);
  }
  return queue.at(id).status;
}

std::vector<Note> decrypt_payload_notes(const Curve& curve, const TransactionPayload& payload,
                                        std::span<const ContributionSet> contributions,
                                        const FieldElement& revoker_priv, std::size_t threshold) {
  if (contributions.size() < threshold || contributions.empty()) {
    fail(ErrorCode::InsufficientContributions, "need " + std::to_string(threshold) + " contribution sets, have " +
                                                   std::to_string(contributions.size()));
  }
  for (const auto& set : contributions) {
    if (set.size() != payload.ciphertexts.size()) fail(ErrorCode::MalformedData, "contribution set has wrong bundle count");
    for (std::size_t b = 0; b < set.size(); ++b) {
      if (set[b].size() != payload.ciphertexts[b].size()) {
        fail(ErrorCode::MalformedData, "contribution bundle has wrong point count");
      }
    }
  }

  std::vector<Note> notes;
  notes.reserve(payload.ciphertexts.size());
  std::vector<CurvePoint> column(contributions.size());
  for (std::size_t b = 0; b < payload.ciphertexts.size(); ++b) {
    const auto&             bundle = payload.ciphertexts[b];
    std::vector<CurvePoint> points;
    points.reserve(bundle.size());
    for (std::size_t j = 0; j < bundle.size(); ++j) {
      for (std::size_t i = 0; i < contributions.size(); ++i) column[i] = contributions[i][b][j];
      if (bundle.mode == EncryptionMode::Combined) {
        points.push_back(decrypt_combined(curve, revoker_priv, column, bundle.combined[j], threshold));
      } else {
        Ciphertext1 inner = strip_guardian_layer(curve, bundle.layered[j], sum_points(curve, column));
        points.push_back(decrypt_single(curve, revoker_priv, inner));
      }
    }
    notes.push_back(points_to_note(curve, points));
  }
  return notes;
}

std::vector<Note> revoker_decrypt(const Curve& curve, RequestQueue& queue, std::size_t id,
                                  const FieldElement& revoker_priv, const LedgerState& ledger,
                                  const SharePolicy& policy) {
  const QueueEntry& e = queue.at(id);
  if (e.status != RequestStatus::Approved) {
    fail(ErrorCode::QuorumNotApproved, "request " + std::to_string(id) + " is " + std::string(to_string(e.status)));
  }
  if (!verify_request(curve, e.request, curve.mul_base(revoker_priv), ledger)) {
    fail(ErrorCode::InvalidRequest, "request " + std::to_string(id) + " does not verify under this revoker key");
  }

  // Every contribution must come from the same quorum, and that quorum must
  // be complete, or the Lagrange coefficients do not sum to p_G.
  std::vector<ContributionSet> sets;
  std::vector<std::size_t>     quorum, contributors;
  for (const auto& d : e.decisions) {
    if (d.verdict != Verdict::Approve || !d.contributions) continue;
    if (quorum.empty()) quorum = d.quorum;
    if (d.quorum != quorum) continue;
    sets.push_back(*d.contributions);
    contributors.push_back(d.guardian);
  }
  std::sort(contributors.begin(), contributors.end());
  std::vector<std::size_t> expected = quorum;
  std::sort(expected.begin(), expected.end());
  if (sets.size() < policy.t || contributors != expected) {
    fail(ErrorCode::InsufficientContributions, "request " + std::to_string(id) + " has " + std::to_string(sets.size()) +
                                                   " usable contributions, need " + std::to_string(policy.t));
  }

  auto notes = decrypt_payload_notes(curve, tx_at(ledger, e.request.tx.index), sets, revoker_priv, policy.t);
  queue.mark_decrypted(id);
  return notes;
}

std::vector<kernels::SpendHit> scan_for_spends(const LedgerState& ledger, std::span<const RevealedNote> notes,
                                               bool parallel) {
  kernels::NullifierTargets targets;
  std::uint64_t             first = ledger.transactions.size();
  for (std::size_t i = 0; i < notes.size(); ++i) {
    targets.emplace(notes[i].nullifier, i);
    first = std::min(first, notes[i].created_in + 1);
  }
  return parallel ? kernels::parallel::scan_spends(ledger.transactions, targets, first)
                  : kernels::serial::scan_spends(ledger.transactions, targets, first);
}

}  // namespace sede
