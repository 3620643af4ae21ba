#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sede/merkle.hpp"
#include "sede/transaction.hpp"

namespace sede {

class Rng;

struct PoolConfig {
  unsigned       tree_depth  = 20;
  std::size_t    root_window = 16;
  std::size_t    max_inputs  = 2;
  std::size_t    max_outputs = 2;
  EncryptionMode mode        = EncryptionMode::Combined;
  std::string    chain_id    = "sede-sim-1";
  bool           parallel    = true;  // use the OpenMP kernels for encryption
};

/// A note the caller wants to spend, with the key that owns it.
struct SpendInput {
  Note          note;
  std::uint64_t leaf_index = 0;
  FieldElement  owner_key;
};

struct TransactionRequest {
  std::vector<SpendInput> spends;
  std::vector<Note>       outputs;
  std::uint64_t           v_in  = 0;
  std::uint64_t           v_out = 0;
  std::string             recipient;  // withdrawal destination or deposit source
  // Zero-value padding notes are issued to this owner.
  CurvePoint   padding_owner;
  FieldElement padding_id;
};

struct SpendWitness {
  Note          note;
  std::uint64_t leaf_index = 0;
  FieldElement  owner_key;
  MerklePath    path;
  bool          padding = false;  // zero-value dummy input; exempt from membership
};

/// Per-point encryption randomness for one output note. `r2` is empty in
/// combined mode.
struct NoteRandomness {
  std::vector<FieldElement> r1;
  std::vector<FieldElement> r2;
};

/// Private inputs. Stays with the transaction builder; never on the ledger.
struct TransactionWitness {
  std::vector<SpendWitness>   spends;
  std::vector<Note>           outputs;
  std::vector<NoteRandomness> randomness;
};

struct BuiltTransaction {
  TransactionPayload payload;
  TransactionWitness witness;
};

/// Pool contract state. Mutated only through apply_transaction.
struct LedgerState {
  LedgerState(CurvePtr curve, PublicKeys keys, PoolConfig config = {});

  CurvePtr                        curve;
  PublicKeys                      keys;
  PoolConfig                      config;
  MerkleTree                      tree;
  std::set<Nullifier>             nullifiers;
  std::vector<TransactionPayload> transactions;
  std::uint64_t                   pool_balance = 0;
};

/// Builds a JoinSplit: pads to the configured arity, derives nullifiers and
/// commitments, encrypts every output note for the revoker/guardians and
/// runs verify_statements to obtain the proof token.
///
/// Throws ConservationViolation, UnknownCommitment, AlreadySpent,
/// InvalidArity, KeyMismatch.
BuiltTransaction build_transaction(const LedgerState& state, const TransactionRequest& request, Rng& rng);

/// Transparent stand-in for proof generation. Re-checks every spend and
/// output statement plus the encryption against the witness; the token
/// names the first statement that failed.
ProofToken verify_statements(const Curve& curve, const PublicKeys& keys, const TransactionPayload& payload,
                             const TransactionWitness& witness);

/// Throws DoubleSpend, InvalidProof, UnknownRoot, NegativePoolBalance, TreeFull.
/// Leaves `state` untouched on failure.
void apply_in_place(LedgerState& state, const TransactionPayload& payload);

LedgerState apply_transaction(LedgerState state, const TransactionPayload& payload);

/// Encrypts one note's points with the given randomness (mode from `randomness`).
EncryptedNote encrypt_note_points(const Curve& curve, const PublicKeys& keys, EncryptionMode mode,
                                  std::span<const CurvePoint> points, const NoteRandomness& randomness, bool parallel);

}  // namespace sede
