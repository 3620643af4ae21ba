#include "sede/elgamal.hpp"

#include <string>

#include "sede/error.hpp"

namespace sede {

namespace {

void require_randomness(const FieldElement& r) {
  if (r.is_zero()) fail(ErrorCode::BadRandomness, "encryption randomness must be in [1, n)");
}

}  // namespace

CurvePoint sum_points(const Curve& curve, std::span<const CurvePoint> points) {
  CurvePoint acc = CurvePoint::identity();
  for (const auto& P : points) acc = curve.add(acc, P);
  return acc;
}

Ciphertext1 encrypt_single(const Curve& curve, const CurvePoint& pub, const CurvePoint& msg, const FieldElement& r) {
  require_randomness(r);
  return {curve.mul_base(r), curve.add(msg, curve.mul(r, pub))};
}

CurvePoint decrypt_single(const Curve& curve, const FieldElement& priv, const Ciphertext1& ct) {
  return curve.sub(ct.c2, curve.mul(priv, ct.c1));
}

Ciphertext2 encrypt_double(const Curve& curve, const CurvePoint& revoker_pub, const CurvePoint& guardian_pub,
                           const CurvePoint& msg, const FieldElement& r1, const FieldElement& r2) {
  require_randomness(r1);
  require_randomness(r2);
  Ciphertext1 inner  = encrypt_single(curve, revoker_pub, msg, r1);
  CurvePoint  shared = curve.mul_base(r2);
  CurvePoint  mask   = curve.mul(r2, guardian_pub);
  return {{shared, curve.add(inner.c1, mask)}, {shared, curve.add(inner.c2, mask)}};
}

Ciphertext1 strip_guardian_layer(const Curve& curve, const Ciphertext2& ct, const CurvePoint& contribution_sum) {
  return {curve.sub(ct.outer1.c2, contribution_sum), curve.sub(ct.outer2.c2, contribution_sum)};
}

CombinedCiphertext encrypt_combined(const Curve& curve, const CurvePoint& revoker_pub, const CurvePoint& guardian_pub,
                                    const CurvePoint& msg, const FieldElement& r) {
  require_randomness(r);
  CurvePoint q = curve.add(revoker_pub, guardian_pub);
  return {curve.mul_base(r), curve.add(msg, curve.mul(r, q))};
}

CurvePoint decrypt_combined(const Curve& curve, const FieldElement& revoker_priv,
                            std::span<const CurvePoint> contributions, const CombinedCiphertext& ct,
                            std::size_t threshold) {
  if (contributions.size() < threshold) {
    fail(ErrorCode::InsufficientContributions, "have " + std::to_string(contributions.size()) + " contributions, need " +
                                                   std::to_string(threshold));
  }
  CurvePoint mask = curve.add(curve.mul(revoker_priv, ct.c1), sum_points(curve, contributions));
  return curve.sub(ct.c2, mask);
}

}  // namespace sede
