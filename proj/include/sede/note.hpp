#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "sede/curve.hpp"

namespace sede {

/// Private value record. `blinding` and `id` live in hash_field().
struct Note {
  std::uint64_t value = 0;
  CurvePoint    owner;
  FieldElement  blinding;
  FieldElement  id;

  friend bool operator==(const Note&, const Note&) = default;
};

struct Commitment {
  FieldElement value;

  friend bool operator==(const Commitment&, const Commitment&) = default;
  friend auto operator<=>(const Commitment& a, const Commitment& b) { return a.value <=> b.value; }
};

struct Nullifier {
  FieldElement value;

  friend bool operator==(const Nullifier&, const Nullifier&) = default;
  friend auto operator<=>(const Nullifier& a, const Nullifier& b) { return a.value <=> b.value; }
};

/// Fixed layout: value (u64 BE) | owner (compressed) | blinding | id.
Bytes       serialize_note(const Curve& curve, const Note& note);
Note        deserialize_note(const Curve& curve, std::span<const std::uint8_t> bytes);
std::size_t note_size(const Curve& curve);

/// Member identity issued at enrollment: H(P_U).
FieldElement member_id(const Curve& curve, const CurvePoint& member_pub);

/// c = H(serialized note)
Commitment commit(const Curve& curve, const Note& note);

/// eta = H(c, i, H(nk, c, i)) where nk = H(id, r_b, K) is derivable from the
/// note plaintext alone. This is what lets a revoker who decrypted a note
/// find where it was spent.
Nullifier derive_nullifier(const Curve& curve, const Note& note, std::uint64_t leaf_index);

/// Spender-side nullifier: checks k*G == K first (KeyMismatch otherwise).
Nullifier nullify(const Curve& curve, const Note& note, std::uint64_t leaf_index, const FieldElement& owner_key);

std::vector<CurvePoint> note_to_points(const Curve& curve, const Note& note);
/// Throws DecodingFailure for anything that is not an encoded note.
Note points_to_note(const Curve& curve, std::span<const CurvePoint> points);

}  // namespace sede
