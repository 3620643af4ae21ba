#include "sede/threshold.hpp"

#include <string>

#include "sede/error.hpp"
#include "sede/rng.hpp"

namespace sede {

void SharePolicy::validate(const BigInt& group_order) const {
  if (t < 1 || t > n) {
    fail(ErrorCode::InvalidPolicy, "threshold must satisfy 1 <= t <= n (t=" + std::to_string(t) +
                                       ", n=" + std::to_string(n) + ")");
  }
  if (BigInt(static_cast<unsigned long>(n)) >= group_order) {
    fail(ErrorCode::InvalidPolicy, "guardian count must be below the group order");
  }
}

std::vector<GuardianShare> deal_shares(const FieldElement& secret, const SharePolicy& policy, Rng& rng) {
  const auto& field = secret.field();
  policy.validate(field->modulus());

  std::vector<FieldElement> coeffs;
  coeffs.reserve(policy.t);
  coeffs.push_back(secret);
  for (std::size_t k = 1; k < policy.t; ++k) coeffs.push_back(rng.element(field));

  std::vector<GuardianShare> shares;
  shares.reserve(policy.n);
  for (std::size_t i = 1; i <= policy.n; ++i) {
    FieldElement x(field, static_cast<long>(i));
    // Horner
    FieldElement y = FieldElement::zero(field);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) y = y * x + *it;
    shares.push_back({x, y});
  }
  return shares;
}

GuardianKeyMaterial generate_guardian_keys(const Curve& curve, const SharePolicy& policy, Rng& rng) {
  policy.validate(curve.order());
  FieldElement secret = curve.random_scalar(rng);
  GuardianKeyMaterial km{policy, deal_shares(secret, policy, rng), curve.mul_base(secret)};
  return km;
}

FieldElement lagrange_at_zero(std::span<const FieldElement> indices, std::size_t position) {
  if (position >= indices.size()) fail(ErrorCode::InvalidArgument, "Lagrange position out of range");
  const auto&  xi  = indices[position];
  const auto&  fld = xi.field();
  FieldElement num = FieldElement::one(fld);
  FieldElement den = FieldElement::one(fld);
  for (std::size_t m = 0; m < indices.size(); ++m) {
    if (indices[m].is_zero()) fail(ErrorCode::InvalidArgument, "share index 0 is reserved for the secret");
    if (m == position) continue;
    if (indices[m] == xi) fail(ErrorCode::DuplicateIndex, "duplicate share index " + xi.value().get_str());
    num *= indices[m];
    den *= indices[m] - xi;
  }
  return num / den;
}

FieldElement compute_contribution_scalar(const GuardianShare& share, std::span<const FieldElement> quorum_indices) {
  for (std::size_t pos = 0; pos < quorum_indices.size(); ++pos) {
    if (quorum_indices[pos] == share.index) return lagrange_at_zero(quorum_indices, pos) * share.share;
  }
  fail(ErrorCode::NotInQuorum, "guardian " + share.index.value().get_str() + " is not in the quorum");
}

CurvePoint compute_contribution_point(const Curve& curve, const GuardianShare& share,
                                      std::span<const FieldElement> quorum_indices, const CurvePoint& C) {
  return curve.mul(compute_contribution_scalar(share, quorum_indices), C);
}

FieldElement recover_secret(std::span<const GuardianShare> shares, std::size_t threshold) {
  if (shares.empty() || shares.size() < threshold) {
    fail(ErrorCode::InsufficientShares, "have " + std::to_string(shares.size()) + " shares, need " +
                                            std::to_string(threshold));
  }
  std::vector<FieldElement> xs;
  xs.reserve(shares.size());
  for (const auto& s : shares) xs.push_back(s.index);

  FieldElement secret = FieldElement::zero(xs.front().field());
  for (std::size_t i = 0; i < shares.size(); ++i) secret += lagrange_at_zero(xs, i) * shares[i].share;
  return secret;
}

}  // namespace sede
