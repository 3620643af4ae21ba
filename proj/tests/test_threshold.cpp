#include <gtest/gtest.h>

#include <gmpxx.h>

#include <vector>

#include "sede/elgamal.hpp"
#include "sede/error.hpp"
#include "sede/rng.hpp"
#include "sede/threshold.hpp"

using namespace sede;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

/// All k-subsets of {0..n-1} as bitmasks.
std::vector<unsigned> subsets(unsigned n, unsigned k) {
  std::vector<unsigned> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (static_cast<unsigned>(__builtin_popcount(m)) == k) out.push_back(m);
  }
  return out;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& v, unsigned mask) {
  std::vector<T> out;
  for (unsigned i = 0; i < v.size(); ++i) {
    if (mask & (1u << i)) out.push_back(v[i]);
  }
  return out;
}

/// Lagrange coefficient at zero computed over the rationals, then mapped into the field.
FieldElement rational_lagrange(const FieldPtr& F, const std::vector<long>& xs, std::size_t i) {
  mpq_class l = 1;
  for (std::size_t m = 0; m < xs.size(); ++m) {
    if (m == i) continue;
    mpq_class f(mpz_class(xs[m]), mpz_class(xs[m] - xs[i]));
    f.canonicalize();
    l *= f;
  }
  FieldElement num(F, BigInt(l.get_num()));
  FieldElement den(F, BigInt(l.get_den()));
  return num / den;
}

}  // namespace

TEST(Threshold, LagrangeHandValues) {
  auto F = Curve::toy()->scalar_field();
  std::vector<FieldElement> one = {FieldElement(F, 1L)};
  EXPECT_EQ(lagrange_at_zero(one, 0), FieldElement::one(F));
  std::vector<FieldElement> xs = {FieldElement(F, 1L), FieldElement(F, 2L)};
  EXPECT_EQ(lagrange_at_zero(xs, 0), FieldElement(F, 2L));
  EXPECT_EQ(lagrange_at_zero(xs, 1), FieldElement(F, -1L));
  std::vector<FieldElement> dup = {FieldElement(F, 3L), FieldElement(F, 3L)};
  EXPECT_EQ(code_of([&] { (void)lagrange_at_zero(dup, 0); }), ErrorCode::DuplicateIndex);
}

TEST(Threshold, LagrangeMatchesRationalOracle) {
  for (auto c : {Curve::toy(), Curve::secp256k1()}) {
    auto F = c->scalar_field();
    for (unsigned n = 1; n <= 6; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        for (unsigned mask : subsets(n, k)) {
          std::vector<long>         xs;
          std::vector<FieldElement> fx;
          for (unsigned i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
              xs.push_back(i + 1);
              fx.emplace_back(F, static_cast<long>(i + 1));
            }
          }
          for (std::size_t i = 0; i < xs.size(); ++i) {
            ASSERT_EQ(lagrange_at_zero(fx, i), rational_lagrange(F, xs, i));
          }
        }
      }
    }
  }
}

TEST(Threshold, InterpolationRecoversConstantTerm) {
  auto F = Curve::toy()->scalar_field();
  Rng  rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t               deg = 1 + rng.below(5).get_si();
    std::vector<FieldElement> coef;
    for (std::size_t i = 0; i <= deg; ++i) coef.push_back(rng.element(F));
    std::vector<FieldElement> xs, ys;
    for (std::size_t i = 1; i <= deg + 1; ++i) {
      FieldElement x(F, static_cast<long>(i)), y = FieldElement::zero(F), xp = FieldElement::one(F);
      for (const auto& a : coef) {
        y  = y + a * xp;
        xp = xp * x;
      }
      xs.push_back(x);
      ys.push_back(y);
    }
    FieldElement s = FieldElement::zero(F);
    for (std::size_t i = 0; i < xs.size(); ++i) s = s + lagrange_at_zero(xs, i) * ys[i];
    ASSERT_EQ(s, coef[0]);
  }
}

TEST(Threshold, DegreeZeroSharesEqualSecret) {
  auto c = Curve::toy();
  Rng  rng(2);
  auto s = c->random_scalar(rng);
  for (const auto& sh : deal_shares(s, {1, 4}, rng)) EXPECT_EQ(sh.share, s);
}

TEST(Threshold, SharesUseIndicesOneToN) {
  auto c      = Curve::toy();
  Rng  rng(3);
  auto shares = deal_shares(c->random_scalar(rng), {2, 5}, rng);
  ASSERT_EQ(shares.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(shares[i].index, c->scalar(static_cast<long>(i + 1)));
}

TEST(Threshold, ExhaustiveQuorumsOnToyField) {
  auto c = Curve::toy();
  Rng  rng(4);
  for (unsigned n = 1; n <= 6; ++n) {
    for (unsigned t = 1; t <= n; ++t) {
      auto keys = generate_guardian_keys(*c, {t, n}, rng);
      auto r2   = c->random_scalar(rng);
      auto C    = c->mul_base(r2);
      auto want = c->mul(r2, keys.public_key);

      for (unsigned mask : subsets(n, t)) {
        auto quorum_shares = pick(keys.shares, mask);
        auto secret        = recover_secret(quorum_shares, t);
        ASSERT_EQ(c->mul_base(secret), keys.public_key);

        std::vector<FieldElement> idx;
        for (const auto& s : quorum_shares) idx.push_back(s.index);
        FieldElement b_sum = FieldElement::zero(c->scalar_field());
        CurvePoint   B_sum;
        for (const auto& s : quorum_shares) {
          b_sum = b_sum + compute_contribution_scalar(s, idx);
          B_sum = c->add(B_sum, compute_contribution_point(*c, s, idx, C));
        }
        ASSERT_EQ(b_sum, secret);
        ASSERT_EQ(B_sum, want);
      }
      if (t < 2) continue;
      for (unsigned mask : subsets(n, t - 1)) {
        auto sub = pick(keys.shares, mask);
        ASSERT_EQ(code_of([&] { (void)recover_secret(sub, t); }), ErrorCode::InsufficientShares);
        // Interpolating the short set anyway lands somewhere else.
        auto wrong = recover_secret(sub, t - 1);
        ASSERT_NE(c->mul_base(wrong), keys.public_key);
        std::vector<FieldElement> idx;
        for (const auto& s : sub) idx.push_back(s.index);
        CurvePoint B_sum;
        for (const auto& s : sub) B_sum = c->add(B_sum, compute_contribution_point(*c, s, idx, C));
        ASSERT_NE(B_sum, want);
        // A single guardian's contribution over the full quorum is not enough either.
        std::vector<FieldElement> full;
        for (const auto& s : keys.shares) full.push_back(s.index);
        ASSERT_NE(compute_contribution_point(*c, sub[0], full, C), want);
      }
    }
  }
}

TEST(Threshold, ContributionDependsOnQuorum) {
  auto c    = Curve::toy();
  Rng  rng(5);
  auto keys = generate_guardian_keys(*c, {2, 4}, rng);
  std::vector<FieldElement> q1 = {keys.shares[0].index, keys.shares[1].index};
  std::vector<FieldElement> q2 = {keys.shares[0].index, keys.shares[2].index};
  EXPECT_NE(compute_contribution_scalar(keys.shares[0], q1), compute_contribution_scalar(keys.shares[0], q2));
  std::vector<FieldElement> q3 = {keys.shares[1].index, keys.shares[2].index};
  EXPECT_EQ(code_of([&] { (void)compute_contribution_scalar(keys.shares[0], q3); }), ErrorCode::NotInQuorum);
  EXPECT_TRUE(compute_contribution_point(*c, keys.shares[0], q1, CurvePoint::identity()).is_identity());
}

TEST(Threshold, OverDeterminedRecovery) {
  auto c = Curve::secp256k1();
  Rng  rng(6);
  auto s      = c->random_scalar(rng);
  auto shares = deal_shares(s, {3, 6}, rng);
  EXPECT_EQ(recover_secret(shares, 3), s);
  std::vector<GuardianShare> four(shares.begin() + 1, shares.begin() + 5);
  EXPECT_EQ(recover_secret(four, 3), s);
  std::vector<GuardianShare> dup = {shares[0], shares[0], shares[1]};
  EXPECT_EQ(code_of([&] { (void)recover_secret(dup, 3); }), ErrorCode::DuplicateIndex);
}

TEST(Threshold, PolicyValidation) {
  BigInt n(65557);
  EXPECT_NO_THROW(SharePolicy({1, 1}).validate(n));
  EXPECT_EQ(code_of([&] { SharePolicy{0, 3}.validate(n); }), ErrorCode::InvalidPolicy);
  EXPECT_EQ(code_of([&] { SharePolicy{4, 3}.validate(n); }), ErrorCode::InvalidPolicy);
  EXPECT_EQ(code_of([&] { SharePolicy{1, 70000}.validate(n); }), ErrorCode::InvalidPolicy);
  Rng rng(7);
  EXPECT_EQ(code_of([&] { (void)deal_shares(Curve::toy()->scalar(1L), {3, 2}, rng); }), ErrorCode::InvalidPolicy);
}

TEST(Threshold, DealRecoverThousandSecrets) {
  auto c = Curve::toy();
  Rng  rng(8);
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 1 + rng.below(6).get_si();
    std::size_t t = 1 + rng.below(static_cast<long>(n)).get_si();
    auto        s = c->random_scalar(rng);
    auto shares   = deal_shares(s, {t, n}, rng);
    std::vector<GuardianShare> subset(shares.end() - static_cast<long>(t), shares.end());
    ASSERT_EQ(recover_secret(subset, t), s);
  }
}
