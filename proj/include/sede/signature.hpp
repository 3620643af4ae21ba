#pragma once

#include <cstdint>
#include <span>

#include "sede/curve.hpp"

namespace sede {

struct Signature {
  BigInt r;
  BigInt s;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// ECDSA over SHA-256 with RFC 6979 deterministic nonces, on any Curve.
Signature ecdsa_sign(const Curve& curve, const FieldElement& priv, std::span<const std::uint8_t> message);
bool      ecdsa_verify(const Curve& curve, const CurvePoint& pub, std::span<const std::uint8_t> message,
                       const Signature& sig);

}  // namespace sede
