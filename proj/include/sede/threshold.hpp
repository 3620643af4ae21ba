#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sede/curve.hpp"

namespace sede {

class Rng;

/// (t, n): any t of n guardians reconstruct; t - 1 learn nothing.
struct SharePolicy {
  std::size_t t = 1;
  std::size_t n = 1;

  /// Throws InvalidPolicy unless 1 <= t <= n < group order.
  void validate(const BigInt& group_order) const;

  friend bool operator==(const SharePolicy&, const SharePolicy&) = default;
};

/// A guardian's point (x_i, f(x_i)) on the dealer polynomial.
struct GuardianShare {
  FieldElement index;
  FieldElement share;

  friend bool operator==(const GuardianShare&, const GuardianShare&) = default;
};

struct GuardianKeyMaterial {
  SharePolicy                policy;
  std::vector<GuardianShare> shares;
  CurvePoint                 public_key;
};

/// Evaluates a random degree t-1 polynomial with f(0) = secret at x = 1..n.
/// Only the shares leave this function.
std::vector<GuardianShare> deal_shares(const FieldElement& secret, const SharePolicy& policy, Rng& rng);

/// Dealer setup for the guardian set: samples p_G, deals it, returns P_G and shares.
GuardianKeyMaterial generate_guardian_keys(const Curve& curve, const SharePolicy& policy, Rng& rng);

/// l_i(0) = prod_{m != i} x_m / (x_m - x_i) for the index at `position`.
FieldElement lagrange_at_zero(std::span<const FieldElement> indices, std::size_t position);

/// b_i = l_i(0) * y_i over the quorum's index set. Throws NotInQuorum.
FieldElement compute_contribution_scalar(const GuardianShare& share, std::span<const FieldElement> quorum_indices);

/// B_i = b_i * C.
CurvePoint compute_contribution_point(const Curve& curve, const GuardianShare& share,
                                      std::span<const FieldElement> quorum_indices, const CurvePoint& C);

/// f(0) from at least `threshold` shares. Throws InsufficientShares / DuplicateIndex.
FieldElement recover_secret(std::span<const GuardianShare> shares, std::size_t threshold);

}  // namespace sede
