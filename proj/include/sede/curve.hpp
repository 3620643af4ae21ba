#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sede/field.hpp"

namespace sede {

class Rng;

/// Short-Weierstrass curve y^2 = x^3 + a x + b over F_p with a generator of
/// prime order n. `kappa` is the Koblitz window width.
struct CurveParams {
  std::string name;
  BigInt      p;
  BigInt      a;
  BigInt      b;
  BigInt      gx;
  BigInt      gy;
  BigInt      n;
  unsigned    kappa = 32;
};

/// Reads {"name","p","a","b","gx","gy","n","kappa"} with hex-encoded integers.
CurveParams parse_curve_params(std::string_view json_text);
CurveParams load_curve_params(const std::string& path);
std::string curve_params_to_json(const CurveParams& params);

/// Affine point or the identity. Coordinates are canonical residues mod p.
class CurvePoint {
 public:
  CurvePoint() = default;  // identity
  CurvePoint(BigInt x, BigInt y) : x_(std::move(x)), y_(std::move(y)), identity_(false) {}

  static CurvePoint identity() { return {}; }

  bool          is_identity() const noexcept { return identity_; }
  const BigInt& x() const noexcept { return x_; }
  const BigInt& y() const noexcept { return y_; }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.identity_ || b.identity_) return a.identity_ == b.identity_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

 private:
  BigInt x_;
  BigInt y_;
  bool   identity_ = true;
};

class Curve {
 public:
  /// Validates the parameter set (G on curve, n prime, n*G = O, kappa window
  /// fits); throws InvalidConfig otherwise.
  explicit Curve(CurveParams params);

  /// Tiny curve (p = 65407, n = 65557) for exhaustive tests. kappa = 4.
  static std::shared_ptr<const Curve> toy();
  /// secp256k1 with kappa = 32.
  static std::shared_ptr<const Curve> secp256k1();
  /// "toy" or "secp256k1".
  static std::shared_ptr<const Curve> by_name(std::string_view name);

  const CurveParams& params() const noexcept { return params_; }
  const std::string& name() const noexcept { return params_.name; }
  const FieldPtr&    base_field() const noexcept { return base_; }
  const FieldPtr&    scalar_field() const noexcept { return scalar_; }
  const CurvePoint&  generator() const noexcept { return g_; }
  const BigInt&      order() const noexcept { return params_.n; }

  FieldElement scalar(const BigInt& v) const { return {scalar_, v}; }
  FieldElement scalar(long v) const { return {scalar_, v}; }
  FieldElement random_scalar(Rng& rng) const;

  bool contains(const CurvePoint& P) const;

  CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const;
  CurvePoint negate(const CurvePoint& P) const;
  CurvePoint sub(const CurvePoint& P, const CurvePoint& Q) const { return add(P, negate(Q)); }
  CurvePoint dbl(const CurvePoint& P) const { return add(P, P); }

  /// k*P with k reduced mod n. Uses Jacobian coordinates internally.
  CurvePoint mul(const BigInt& k, const CurvePoint& P) const;
  CurvePoint mul(const FieldElement& k, const CurvePoint& P) const { return mul(k.value(), P); }
  CurvePoint mul_base(const FieldElement& k) const { return mul(k.value(), g_); }

  /// Compressed SEC1-style encoding: 0x02/0x03 || x; the identity is 0x00.
  Bytes       encode_point(const CurvePoint& P) const;
  CurvePoint  decode_point(std::span<const std::uint8_t> bytes) const;
  std::size_t point_size() const noexcept { return 1 + base_->byte_length(); }
  std::string point_to_hex(const CurvePoint& P) const;
  CurvePoint  point_from_hex(std::string_view hex) const;

  // -- Koblitz message embedding -------------------------------------------

  /// Largest M with M*kappa + kappa - 1 < p.
  const BigInt& max_message() const noexcept { return max_message_; }
  /// Number of whole bytes that always fit in one encoded point.
  std::size_t chunk_capacity() const noexcept { return chunk_bytes_; }

  /// Smallest x in [M*kappa, M*kappa + kappa) on the curve, with the smaller
  /// y. Throws EncodingFailure when the window holds no valid x.
  CurvePoint koblitz_encode(const BigInt& message) const;
  /// floor(x / kappa). Throws DecodingFailure on the identity.
  BigInt koblitz_decode(const CurvePoint& X) const;

  /// Byte chunk (at most chunk_capacity() bytes, big-endian) to point.
  CurvePoint koblitz_encode_chunk(std::span<const std::uint8_t> chunk) const;
  /// Point back to a chunk of exactly chunk_capacity() bytes.
  Bytes koblitz_decode_chunk(const CurvePoint& X) const;

  /// Length-framed chunking of an arbitrary byte string into points.
  std::vector<CurvePoint> encode_message(std::span<const std::uint8_t> message) const;
  /// Inverse of encode_message; DecodingFailure on any framing mismatch.
  Bytes decode_message(std::span<const CurvePoint> points) const;

 private:
  BigInt rhs(const BigInt& x) const;

  CurveParams params_;
  FieldPtr    base_;
  FieldPtr    scalar_;
  CurvePoint  g_;
  BigInt      max_message_;
  std::size_t chunk_bytes_ = 0;
};

using CurvePtr = std::shared_ptr<const Curve>;

}  // namespace sede
