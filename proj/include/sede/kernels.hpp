#pragma once

// Data-parallel batch kernels. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel` with the
// same signature and bit-identical output; tests compare the two.
//
// Randomness is always drawn by the caller before entering a kernel, so
// results do not depend on thread scheduling.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sede/elgamal.hpp"
#include "sede/transaction.hpp"

namespace sede::kernels {

struct SpendHit {
  Nullifier     nullifier;
  std::uint64_t tx_index   = 0;
  std::size_t   note_index = 0;  // caller's index for the note that produced the nullifier

  friend bool operator==(const SpendHit&, const SpendHit&) = default;
};

using NullifierTargets = std::map<Nullifier, std::size_t>;

namespace serial {

/// k * P_j for every point.
std::vector<CurvePoint> scale_points(const Curve& curve, const FieldElement& k, std::span<const CurvePoint> points);

std::vector<CombinedCiphertext> encrypt_combined_many(const Curve& curve, const CurvePoint& revoker_pub,
                                                      const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                                      std::span<const FieldElement> r);

std::vector<Ciphertext2> encrypt_double_many(const Curve& curve, const CurvePoint& revoker_pub,
                                             const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                             std::span<const FieldElement> r1, std::span<const FieldElement> r2);

/// All (nullifier, tx) pairs where a payload at index >= first_tx reveals a
/// target nullifier, in ledger order, then payload order.
std::vector<SpendHit> scan_spends(std::span<const TransactionPayload> txs, const NullifierTargets& targets,
                                  std::uint64_t first_tx = 0);

}  // namespace serial

namespace parallel {

std::vector<CurvePoint> scale_points(const Curve& curve, const FieldElement& k, std::span<const CurvePoint> points);

std::vector<CombinedCiphertext> encrypt_combined_many(const Curve& curve, const CurvePoint& revoker_pub,
                                                      const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                                      std::span<const FieldElement> r);

std::vector<Ciphertext2> encrypt_double_many(const Curve& curve, const CurvePoint& revoker_pub,
                                             const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                             std::span<const FieldElement> r1, std::span<const FieldElement> r2);

std::vector<SpendHit> scan_spends(std::span<const TransactionPayload> txs, const NullifierTargets& targets,
                                  std::uint64_t first_tx = 0);

}  // namespace parallel

}  // namespace sede::kernels
