#include "sede/pool.hpp"

#include <string>

#include "sede/error.hpp"
#include "sede/kernels.hpp"
#include "sede/rng.hpp"

namespace sede {

namespace {

using Wide = unsigned __int128;

constexpr int kMaxEncodingAttempts = 8;

Wide sum_values(std::uint64_t base, const std::vector<Note>& notes) {
  Wide total = base;
  for (const auto& n : notes) total += n.value;
  return total;
}

Note random_note(std::uint64_t value, const CurvePoint& owner, const FieldElement& id, Rng& rng) {
  return {value, owner, rng.element(hash_field()), id};
}

NoteRandomness draw_randomness(const Curve& curve, EncryptionMode mode, std::size_t count, Rng& rng) {
  NoteRandomness r;
  r.r1.reserve(count);
  for (std::size_t i = 0; i < count; ++i) r.r1.push_back(curve.random_scalar(rng));
  if (mode == EncryptionMode::Layered) {
    r.r2.reserve(count);
    for (std::size_t i = 0; i < count; ++i) r.r2.push_back(curve.random_scalar(rng));
  }
  return r;
}

}  // namespace

LedgerState::LedgerState(CurvePtr curve_, PublicKeys keys_, PoolConfig config_)
    : curve(std::move(curve_)),
      keys(std::move(keys_)),
      config(std::move(config_)),
      tree(config.tree_depth, config.root_window) {
  if (!curve) fail(ErrorCode::InvalidConfig, "ledger needs a curve");
  if (config.max_inputs == 0 || config.max_outputs == 0) fail(ErrorCode::InvalidConfig, "arity must be positive");
}

EncryptedNote encrypt_note_points(const Curve& curve, const PublicKeys& keys, EncryptionMode mode,
                                  std::span<const CurvePoint> points, const NoteRandomness& randomness, bool parallel) {
  EncryptedNote out;
  out.mode = mode;
  if (mode == EncryptionMode::Combined) {
    out.combined = parallel
                       ? kernels::parallel::encrypt_combined_many(curve, keys.revoker, keys.guardians, points, randomness.r1)
                       : kernels::serial::encrypt_combined_many(curve, keys.revoker, keys.guardians, points, randomness.r1);
  } else {
    out.layered = parallel ? kernels::parallel::encrypt_double_many(curve, keys.revoker, keys.guardians, points,
                                                                    randomness.r1, randomness.r2)
                           : kernels::serial::encrypt_double_many(curve, keys.revoker, keys.guardians, points,
                                                                  randomness.r1, randomness.r2);
  }
  return out;
}

BuiltTransaction build_transaction(const LedgerState& state, const TransactionRequest& request, Rng& rng) {
  const Curve&      curve = *state.curve;
  const PoolConfig& cfg   = state.config;

  if (request.spends.size() > cfg.max_inputs || request.outputs.size() > cfg.max_outputs) {
    fail(ErrorCode::InvalidArity, "transaction exceeds " + std::to_string(cfg.max_inputs) + "-in/" +
                                      std::to_string(cfg.max_outputs) + "-out arity");
  }

  Wide spent = request.v_in;
  for (const auto& s : request.spends) spent += s.note.value;
  if (spent != sum_values(request.v_out, request.outputs)) {
    fail(ErrorCode::ConservationViolation, "inputs and outputs do not balance");
  }

  BuiltTransaction built;
  auto&            payload = built.payload;
  auto&            witness = built.witness;

  for (const auto& s : request.spends) {
    Commitment c = commit(curve, s.note);
    if (s.leaf_index >= state.tree.size() || state.tree.leaves()[s.leaf_index] != c) {
      fail(ErrorCode::UnknownCommitment, "note is not in the tree at index " + std::to_string(s.leaf_index));
    }
    Nullifier nf = nullify(curve, s.note, s.leaf_index, s.owner_key);
    if (state.nullifiers.contains(nf)) fail(ErrorCode::AlreadySpent, "note at index " + std::to_string(s.leaf_index) + " was already spent");
    witness.spends.push_back({s.note, s.leaf_index, s.owner_key, state.tree.prove(s.leaf_index), false});
    payload.spent_nullifiers.push_back(nf);
  }
  while (witness.spends.size() < cfg.max_inputs) {
    FieldElement key  = curve.random_scalar(rng);
    Note         note = random_note(0, curve.mul_base(key), request.padding_id, rng);
    payload.spent_nullifiers.push_back(nullify(curve, note, 0, key));
    witness.spends.push_back({note, 0, key, {}, true});
  }

  witness.outputs = request.outputs;
  while (witness.outputs.size() < cfg.max_outputs) {
    CurvePoint owner = request.padding_owner;
    if (owner.is_identity()) owner = curve.mul_base(curve.random_scalar(rng));
    witness.outputs.push_back(random_note(0, owner, request.padding_id, rng));
  }

  for (auto& out : witness.outputs) {
    std::vector<CurvePoint> points;
    for (int attempt = 0;; ++attempt) {
      try {
        points = note_to_points(curve, out);
        break;
      } catch (const Error& e) {
        // Re-chunk by changing the blinding; the note's meaning is unchanged.
        if (e.code() != ErrorCode::EncodingFailure || attempt + 1 >= kMaxEncodingAttempts) throw;
        out.blinding = rng.element(hash_field());
      }
    }
    NoteRandomness r = draw_randomness(curve, cfg.mode, points.size(), rng);
    payload.new_commitments.push_back(commit(curve, out));
    payload.ciphertexts.push_back(encrypt_note_points(curve, state.keys, cfg.mode, points, r, cfg.parallel));
    witness.randomness.push_back(std::move(r));
  }

  payload.v_in  = request.v_in;
  payload.v_out = request.v_out;
  payload.aux   = {state.tree.root(), request.recipient, cfg.chain_id};
  payload.proof = verify_statements(curve, state.keys, payload, witness);
  return built;
}

ProofToken verify_statements(const Curve& curve, const PublicKeys& keys, const TransactionPayload& payload,
                             const TransactionWitness& witness) {
  ProofToken token;
  token.suite     = std::string(kHashSuite);
  token.statement = statement_digest(curve, keys, payload);

  auto reject = [&](const char* label) {
    token.valid            = false;
    token.failed_statement = label;
    return token;
  };

  if (witness.spends.size() != payload.spent_nullifiers.size() ||
      witness.outputs.size() != payload.new_commitments.size() ||
      witness.outputs.size() != payload.ciphertexts.size() || witness.outputs.size() != witness.randomness.size()) {
    return reject("shape");
  }

  Wide in_total = payload.v_in;
  for (const auto& s : witness.spends) in_total += s.note.value;
  if (in_total != sum_values(payload.v_out, witness.outputs)) return reject("conservation");

  for (std::size_t i = 0; i < witness.spends.size(); ++i) {
    const auto& s = witness.spends[i];
    if (s.padding) {
      if (s.note.value != 0) return reject("membership");
    } else {
      if (s.path.index != s.leaf_index || !verify_path(payload.aux.root, commit(curve, s.note), s.path)) {
        return reject("membership");
      }
    }
    if (curve.mul_base(s.owner_key) != s.note.owner) return reject("ownership");
    if (derive_nullifier(curve, s.note, s.leaf_index) != payload.spent_nullifiers[i]) return reject("nullifier");
  }

  for (std::size_t j = 0; j < witness.outputs.size(); ++j) {
    if (commit(curve, witness.outputs[j]) != payload.new_commitments[j]) return reject("commitment");
  }

  for (std::size_t j = 0; j < witness.outputs.size(); ++j) {
    const auto& bundle = payload.ciphertexts[j];
    const auto& r      = witness.randomness[j];
    try {
      auto points = note_to_points(curve, witness.outputs[j]);
      if (r.r1.size() != points.size()) return reject("encryption");
      if (bundle.mode == EncryptionMode::Layered && r.r2.size() != points.size()) return reject("encryption");
      if (encrypt_note_points(curve, keys, bundle.mode, points, r, false) != bundle) return reject("encryption");
    } catch (const Error&) {
      return reject("encryption");
    }
  }

  token.valid = true;
  return token;
}

void apply_in_place(LedgerState& state, const TransactionPayload& payload) {
  std::set<Nullifier> incoming;
  for (const auto& nf : payload.spent_nullifiers) {
    if (state.nullifiers.contains(nf) || !incoming.insert(nf).second) {
      fail(ErrorCode::DoubleSpend, "nullifier " + nf.value.to_hex() + " already recorded");
    }
  }

  const auto& proof = payload.proof;
  if (!proof.valid || proof.suite != kHashSuite || proof.statement != statement_digest(*state.curve, state.keys, payload)) {
    fail(ErrorCode::InvalidProof, proof.failed_statement.empty() ? "proof token does not match the payload"
                                                                 : "statement '" + proof.failed_statement + "' failed");
  }
  if (payload.aux.chain_id != state.config.chain_id) fail(ErrorCode::InvalidProof, "proof bound to another chain");
  if (!state.tree.is_known_root(payload.aux.root)) fail(ErrorCode::UnknownRoot, "referenced root is not recent");

  Wide balance = static_cast<Wide>(state.pool_balance) + payload.v_in;
  if (balance < payload.v_out) fail(ErrorCode::NegativePoolBalance, "withdrawal exceeds the pool balance");
  if (state.tree.size() + payload.new_commitments.size() > state.tree.capacity()) {
    fail(ErrorCode::TreeFull, "not enough room for the new commitments");
  }

  for (const auto& c : payload.new_commitments) state.tree.insert(c);
  state.nullifiers.insert(incoming.begin(), incoming.end());
  state.pool_balance = static_cast<std::uint64_t>(balance - payload.v_out);
  state.transactions.push_back(payload);
}

LedgerState apply_transaction(LedgerState state, const TransactionPayload& payload) {
  apply_in_place(state, payload);
  return state;
}

}  // namespace sede
