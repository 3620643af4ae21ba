#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "sede/field.hpp"

namespace sede {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> data);
Sha256Digest sha256(std::string_view data);

/// Identifier of the hash suite; bound into every proof token.
inline constexpr std::string_view kHashSuite = "sede-sha256-bn254-v1";

/// Target field of the note hash (the BN254 scalar field, as used by
/// SNARK-friendly pools). Independent of the encryption curve, so commitments
/// stay collision-free even on the toy curve.
const FieldPtr& hash_field();

/// Domain-separated, length-framed SHA-256 reduced into hash_field().
class Hasher {
 public:
  explicit Hasher(std::string_view domain);

  Hasher& add(std::span<const std::uint8_t> bytes);
  Hasher& add(std::string_view text);
  Hasher& add(std::uint64_t value);
  Hasher& add(const FieldElement& element);

  FieldElement to_field() const;
  /// The framed input accumulated so far.
  const Bytes& bytes() const noexcept { return buffer_; }
  Sha256Digest digest() const;

 private:
  Bytes buffer_;
};

}  // namespace sede
