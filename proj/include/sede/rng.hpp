#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "sede/field.hpp"

namespace sede {

/// Seedable deterministic generator used for every random draw in the
/// library. mt19937_64 output is fixed by the standard, and sampling below
/// is done by hand, so draws are identical across platforms.
///
/// Not a cryptographic generator; this is a simulator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, label, counter) through SHA-256.
  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t counter = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, bound) by rejection sampling.
  BigInt below(const BigInt& bound);

  /// Uniform in [1, bound).
  BigInt nonzero_below(const BigInt& bound);

  FieldElement element(const FieldPtr& field) { return {field, below(field->modulus())}; }
  FieldElement nonzero_element(const FieldPtr& field) { return {field, nonzero_below(field->modulus())}; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sede
