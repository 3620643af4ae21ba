#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sede/curve.hpp"

namespace sede {

/// (r*G, X + r*P)
struct Ciphertext1 {
  CurvePoint c1;
  CurvePoint c2;

  friend bool operator==(const Ciphertext1&, const Ciphertext1&) = default;
};

/// Guardian layer over a revoker-layer ciphertext: each component of the
/// inner Ciphertext1 is encrypted under P_G with the same r2, so
/// outer1.c1 == outer2.c1.
struct Ciphertext2 {
  Ciphertext1 outer1;
  Ciphertext1 outer2;

  friend bool operator==(const Ciphertext2&, const Ciphertext2&) = default;
};

/// (r*G, X + r*(P_R + P_G))
struct CombinedCiphertext {
  CurvePoint c1;
  CurvePoint c2;

  friend bool operator==(const CombinedCiphertext&, const CombinedCiphertext&) = default;
};

CurvePoint sum_points(const Curve& curve, std::span<const CurvePoint> points);

Ciphertext1 encrypt_single(const Curve& curve, const CurvePoint& pub, const CurvePoint& msg, const FieldElement& r);
CurvePoint  decrypt_single(const Curve& curve, const FieldElement& priv, const Ciphertext1& ct);

Ciphertext2 encrypt_double(const Curve& curve, const CurvePoint& revoker_pub, const CurvePoint& guardian_pub,
                           const CurvePoint& msg, const FieldElement& r1, const FieldElement& r2);

/// Removes the guardian layer given sum(B_i) = r2 * P_G. Yields the revoker
/// layer ciphertext, never the message.
Ciphertext1 strip_guardian_layer(const Curve& curve, const Ciphertext2& ct, const CurvePoint& contribution_sum);

CombinedCiphertext encrypt_combined(const Curve& curve, const CurvePoint& revoker_pub, const CurvePoint& guardian_pub,
                                    const CurvePoint& msg, const FieldElement& r);

/// X = c2 - (p_R * c1 + sum B_i). Throws InsufficientContributions when fewer
/// than `threshold` contributions are supplied.
CurvePoint decrypt_combined(const Curve& curve, const FieldElement& revoker_priv,
                            std::span<const CurvePoint> contributions, const CombinedCiphertext& ct,
                            std::size_t threshold);

}  // namespace sede
