#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sede/elgamal.hpp"
#include "sede/hash.hpp"
#include "sede/note.hpp"

namespace sede {

enum class EncryptionMode { Combined, Layered };

std::string_view to_string(EncryptionMode mode) noexcept;
EncryptionMode   parse_encryption_mode(std::string_view text);

/// Ciphertext bundle for one output note: one ciphertext per encoded point.
/// Exactly one of the vectors is populated, according to `mode`.
struct EncryptedNote {
  EncryptionMode                  mode = EncryptionMode::Combined;
  std::vector<CombinedCiphertext> combined;
  std::vector<Ciphertext2>        layered;

  std::size_t size() const noexcept { return mode == EncryptionMode::Combined ? combined.size() : layered.size(); }
  /// The r*G components guardians scale when contributing.
  std::vector<CurvePoint> first_components() const;

  friend bool operator==(const EncryptedNote&, const EncryptedNote&) = default;
};

/// Application inputs bound into the statement besides notes and values.
struct AuxInputs {
  FieldElement root;
  std::string  recipient;
  std::string  chain_id;

  friend bool operator==(const AuxInputs&, const AuxInputs&) = default;
};

/// Stand-in for a SNARK proof: the digest of the public inputs the
/// statements were checked against, and the verdict of that check.
struct ProofToken {
  Sha256Digest statement{};
  std::string  suite;
  bool         valid = false;
  std::string  failed_statement;

  friend bool operator==(const ProofToken&, const ProofToken&) = default;
};

/// Everything an external observer sees of a transaction.
struct TransactionPayload {
  ProofToken                 proof;
  std::vector<Commitment>    new_commitments;
  std::vector<Nullifier>     spent_nullifiers;
  std::uint64_t              v_in  = 0;
  std::uint64_t              v_out = 0;
  std::vector<EncryptedNote> ciphertexts;
  AuxInputs                  aux;

  friend bool operator==(const TransactionPayload&, const TransactionPayload&) = default;
};

enum class TxKind { Deposit, Transfer, Withdraw };
std::string_view to_string(TxKind kind) noexcept;
TxKind           kind_of(const TransactionPayload& payload) noexcept;

struct PublicKeys {
  CurvePoint revoker;
  CurvePoint guardians;
};

/// Digest of the public inputs (suite, keys, values, aux, nullifiers,
/// commitments, ciphertexts). A proof token is only meaningful for this digest.
Sha256Digest statement_digest(const Curve& curve, const PublicKeys& keys, const TransactionPayload& payload);

/// Canonical byte encoding of a whole payload including its proof token.
Bytes        canonical_payload_bytes(const Curve& curve, const TransactionPayload& payload);
Sha256Digest payload_digest(const Curve& curve, const TransactionPayload& payload);

}  // namespace sede
