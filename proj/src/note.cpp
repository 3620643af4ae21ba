#include "sede/note.hpp"

#include <algorithm>

#include "sede/error.hpp"
#include "sede/hash.hpp"

namespace sede {

std::size_t note_size(const Curve& curve) { return 8 + curve.point_size() + 2 * hash_field()->byte_length(); }

Bytes serialize_note(const Curve& curve, const Note& note) {
  Bytes out;
  out.reserve(note_size(curve));
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(note.value >> (8 * i)));
  // The identity is never a valid owner, but padding must keep the layout fixed.
  Bytes owner = note.owner.is_identity() ? Bytes(curve.point_size(), 0) : curve.encode_point(note.owner);
  out.insert(out.end(), owner.begin(), owner.end());
  auto blinding = note.blinding.to_bytes();
  auto id       = note.id.to_bytes();
  out.insert(out.end(), blinding.begin(), blinding.end());
  out.insert(out.end(), id.begin(), id.end());
  return out;
}

Note deserialize_note(const Curve& curve, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != note_size(curve)) fail(ErrorCode::MalformedData, "serialized note has wrong length");
  Note        note;
  std::size_t off = 0;
  for (; off < 8; ++off) note.value = (note.value << 8) | bytes[off];

  auto owner = bytes.subspan(off, curve.point_size());
  bool zero  = std::all_of(owner.begin(), owner.end(), [](std::uint8_t b) { return b == 0; });
  note.owner = zero ? CurvePoint::identity() : curve.decode_point(owner);
  off += curve.point_size();

  const std::size_t w = hash_field()->byte_length();
  note.blinding       = FieldElement::from_bytes(hash_field(), bytes.subspan(off, w));
  off += w;
  note.id = FieldElement::from_bytes(hash_field(), bytes.subspan(off, w));
  return note;
}

FieldElement member_id(const Curve& curve, const CurvePoint& member_pub) {
  return Hasher("sede/member-id").add(curve.encode_point(member_pub)).to_field();
}

Commitment commit(const Curve& curve, const Note& note) {
  return {Hasher("sede/commitment").add(serialize_note(curve, note)).to_field()};
}

Nullifier derive_nullifier(const Curve& curve, const Note& note, std::uint64_t leaf_index) {
  Commitment   c  = commit(curve, note);
  FieldElement nk = Hasher("sede/nullifier-key").add(note.id).add(note.blinding).add(curve.encode_point(note.owner)).to_field();
  FieldElement inner = Hasher("sede/nullifier-inner").add(nk).add(c.value).add(leaf_index).to_field();
  return {Hasher("sede/nullifier").add(c.value).add(leaf_index).add(inner).to_field()};
}

Nullifier nullify(const Curve& curve, const Note& note, std::uint64_t leaf_index, const FieldElement& owner_key) {
  if (curve.mul_base(owner_key) != note.owner) fail(ErrorCode::KeyMismatch, "spending key does not match note owner");
  return derive_nullifier(curve, note, leaf_index);
}

std::vector<CurvePoint> note_to_points(const Curve& curve, const Note& note) {
  return curve.encode_message(serialize_note(curve, note));
}

Note points_to_note(const Curve& curve, std::span<const CurvePoint> points) {
  try {
    return deserialize_note(curve, curve.decode_message(points));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DecodingFailure) throw;
    fail(ErrorCode::DecodingFailure, e.what());
  }
}

}  // namespace sede
