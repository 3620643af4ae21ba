#include "sede/transaction.hpp"

#include "sede/error.hpp"

namespace sede {

std::string_view to_string(EncryptionMode mode) noexcept {
  return mode == EncryptionMode::Combined ? "combined" : "layered";
}

EncryptionMode parse_encryption_mode(std::string_view text) {
  if (text == "combined") return EncryptionMode::Combined;
  if (text == "layered" || text == "double") return EncryptionMode::Layered;
  fail(ErrorCode::InvalidConfig, "unknown encryption mode '" + std::string(text) + "'");
}

std::vector<CurvePoint> EncryptedNote::first_components() const {
  std::vector<CurvePoint> out;
  out.reserve(size());
  if (mode == EncryptionMode::Combined) {
    for (const auto& ct : combined) out.push_back(ct.c1);
  } else {
    for (const auto& ct : layered) out.push_back(ct.outer1.c1);
  }
  return out;
}

std::string_view to_string(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::Deposit: return "deposit";
    case TxKind::Transfer: return "transfer";
    case TxKind::Withdraw: return "withdraw";
  }
  return "unknown";
}

TxKind kind_of(const TransactionPayload& payload) noexcept {
  if (payload.v_in > 0) return TxKind::Deposit;
  if (payload.v_out > 0) return TxKind::Withdraw;
  return TxKind::Transfer;
}

namespace {

void add_public_inputs(Hasher& h, const Curve& curve, const TransactionPayload& p) {
  h.add(p.aux.chain_id).add(p.aux.root).add(p.aux.recipient);
  h.add(p.v_in).add(p.v_out);
  h.add(static_cast<std::uint64_t>(p.spent_nullifiers.size()));
  for (const auto& n : p.spent_nullifiers) h.add(n.value);
  h.add(static_cast<std::uint64_t>(p.new_commitments.size()));
  for (const auto& c : p.new_commitments) h.add(c.value);
  h.add(static_cast<std::uint64_t>(p.ciphertexts.size()));
  for (const auto& bundle : p.ciphertexts) {
    h.add(to_string(bundle.mode));
    h.add(static_cast<std::uint64_t>(bundle.size()));
    for (const auto& ct : bundle.combined) h.add(curve.encode_point(ct.c1)).add(curve.encode_point(ct.c2));
    for (const auto& ct : bundle.layered) {
      h.add(curve.encode_point(ct.outer1.c1)).add(curve.encode_point(ct.outer1.c2));
      h.add(curve.encode_point(ct.outer2.c1)).add(curve.encode_point(ct.outer2.c2));
    }
  }
}

}  // namespace

Sha256Digest statement_digest(const Curve& curve, const PublicKeys& keys, const TransactionPayload& payload) {
  Hasher h("sede/statement");
  h.add(kHashSuite).add(curve.name());
  h.add(curve.encode_point(keys.revoker)).add(curve.encode_point(keys.guardians));
  add_public_inputs(h, curve, payload);
  return h.digest();
}

Bytes canonical_payload_bytes(const Curve& curve, const TransactionPayload& payload) {
  Hasher h("sede/payload");
  add_public_inputs(h, curve, payload);
  h.add(payload.proof.statement).add(payload.proof.suite);
  h.add(static_cast<std::uint64_t>(payload.proof.valid ? 1 : 0)).add(payload.proof.failed_statement);
  return h.bytes();
}

Sha256Digest payload_digest(const Curve& curve, const TransactionPayload& payload) {
  return sha256(canonical_payload_bytes(curve, payload));
}

}  // namespace sede
