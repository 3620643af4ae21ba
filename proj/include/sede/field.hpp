#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sede {

using BigInt = mpz_class;
using Bytes  = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes       from_hex(std::string_view hex);

/// Big-endian, left-padded to `width` bytes. Throws MalformedData if it does not fit.
Bytes  bigint_to_bytes(const BigInt& value, std::size_t width);
BigInt bigint_from_bytes(std::span<const std::uint8_t> bytes);
BigInt bigint_from_hex(std::string_view hex);
std::string bigint_to_hex(const BigInt& value);

/// Arithmetic modulo an odd prime. Inputs to the arithmetic helpers are
/// expected to be already reduced.
class PrimeField {
 public:
  explicit PrimeField(BigInt modulus);

  const BigInt& modulus() const noexcept { return p_; }
  std::size_t   byte_length() const noexcept { return bytes_; }
  std::size_t   bit_length() const noexcept { return bits_; }

  BigInt reduce(const BigInt& v) const;
  BigInt add(const BigInt& a, const BigInt& b) const;
  BigInt sub(const BigInt& a, const BigInt& b) const;
  BigInt mul(const BigInt& a, const BigInt& b) const;
  BigInt neg(const BigInt& a) const;
  BigInt inv(const BigInt& a) const;
  BigInt pow(const BigInt& a, const BigInt& e) const;

  /// Quadratic residue test; zero counts as a square.
  bool is_square(const BigInt& a) const;

  /// Smaller of the two square roots, or nullopt for non-residues.
  std::optional<BigInt> sqrt(const BigInt& a) const;

  friend bool operator==(const PrimeField& x, const PrimeField& y) { return x.p_ == y.p_; }

 private:
  BigInt      p_;
  std::size_t bytes_ = 0;
  std::size_t bits_  = 0;
  // p - 1 = q * 2^s with q odd; z is a fixed non-residue.
  BigInt   q_;
  unsigned s_ = 0;
  BigInt   z_;
};

using FieldPtr = std::shared_ptr<const PrimeField>;

/// An element of a prime field, always held in canonical form.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, const BigInt& value);
  FieldElement(FieldPtr field, long value);

  static FieldElement zero(FieldPtr field) { return {std::move(field), 0L}; }
  static FieldElement one(FieldPtr field) { return {std::move(field), 1L}; }
  /// Strict decoding: the value must already be below the modulus.
  static FieldElement from_bytes(FieldPtr field, std::span<const std::uint8_t> bytes);
  static FieldElement from_hex(FieldPtr field, std::string_view hex);

  const BigInt&   value() const noexcept { return value_; }
  const FieldPtr& field() const noexcept { return field_; }
  bool            is_zero() const { return value_ == 0; }

  FieldElement inverse() const;
  FieldElement pow(const BigInt& e) const;

  Bytes       to_bytes() const;
  std::string to_hex() const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  FieldElement        operator-() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b);

 private:
  void check_same_field(const FieldElement& o) const;

  FieldPtr field_;
  BigInt   value_;
};

}  // namespace sede
