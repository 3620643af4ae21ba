#include "sede/hash.hpp"

#include <openssl/sha.h>

#include "sede/rng.hpp"

namespace sede {

Sha256Digest sha256(std::span<const std::uint8_t> data) {
  Sha256Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Sha256Digest sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

const FieldPtr& hash_field() {
  static const FieldPtr field = std::make_shared<const PrimeField>(
      BigInt("30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001", 16));
  return field;
}

Hasher::Hasher(std::string_view domain) { add(domain); }

Hasher& Hasher::add(std::span<const std::uint8_t> bytes) {
  std::uint64_t n = bytes.size();
  for (int i = 7; i >= 0; --i) buffer_.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  return *this;
}

Hasher& Hasher::add(std::string_view text) {
  return add(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Hasher& Hasher::add(std::uint64_t value) {
  std::array<std::uint8_t, 8> be{};
  for (int i = 0; i < 8; ++i) be[i] = static_cast<std::uint8_t>(value >> (8 * (7 - i)));
  return add(std::span<const std::uint8_t>(be));
}

Hasher& Hasher::add(const FieldElement& element) { return add(element.to_bytes()); }

Sha256Digest Hasher::digest() const { return sha256(buffer_); }

FieldElement Hasher::to_field() const {
  auto d = digest();
  return {hash_field(), bigint_from_bytes(d)};
}

// ---------------------------------------------------------------------------

Rng Rng::derive(std::uint64_t seed, std::string_view label, std::uint64_t counter) {
  auto d = Hasher("sede-rng").add(seed).add(label).add(counter).digest();
  std::uint64_t s = 0;
  for (int i = 0; i < 8; ++i) s = (s << 8) | d[i];
  return Rng(s);
}

BigInt Rng::below(const BigInt& bound) {
  if (bound <= 0) return 0;
  std::size_t bits  = mpz_sizeinbase(BigInt(bound - 1).get_mpz_t(), 2);
  std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt candidate = 0;
    for (std::size_t i = 0; i < words; ++i) {
      candidate <<= 64;
      std::uint64_t w = next_u64();
      candidate += BigInt(static_cast<unsigned long>(w >> 32)) << 32;
      candidate += static_cast<unsigned long>(w & 0xffffffffULL);
    }
    std::size_t excess = words * 64 - bits;
    candidate >>= excess;
    if (candidate < bound) return candidate;
  }
}

BigInt Rng::nonzero_below(const BigInt& bound) {
  for (;;) {
    BigInt v = below(bound);
    if (v != 0) return v;
  }
}

}  // namespace sede
