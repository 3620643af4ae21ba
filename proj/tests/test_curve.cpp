#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "sede/curve.hpp"
#include "sede/error.hpp"
#include "sede/note.hpp"
#include "sede/rng.hpp"
#include "support.hpp"

using namespace sede;
using sede::test::ToyOracle;
using sede::test::ToyPoint;

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

}  // namespace

TEST(ToyCurve, ParametersMatchOracle) {
  auto c = Curve::toy();
  EXPECT_EQ(c->params().p, ToyOracle::p);
  EXPECT_EQ(c->order(), ToyOracle::n);
  EXPECT_TRUE(ToyOracle::on_curve(ToyOracle::G.x, ToyOracle::G.y));
  EXPECT_EQ(test::to_toy(c->generator()), ToyOracle::G);
  // The oracle table wraps: n*G is the identity and no smaller multiple is.
  const auto& t = ToyOracle::multiples();
  EXPECT_TRUE(ToyOracle::add(t.back(), ToyOracle::G).inf);
  for (std::size_t k = 1; k < t.size(); ++k) ASSERT_FALSE(t[k].inf);
}

TEST(ToyCurve, ScalarMulMatchesRepeatedAdditionForEveryK) {
  auto        c = Curve::toy();
  const auto& t = ToyOracle::multiples();
  for (std::int64_t k = 0; k < ToyOracle::n; ++k) {
    ASSERT_EQ(test::to_toy(c->mul(BigInt(static_cast<long>(k)), c->generator())), t[k]) << "k=" << k;
  }
  EXPECT_TRUE(c->mul(BigInt(static_cast<long>(ToyOracle::n)), c->generator()).is_identity());
}

TEST(ToyCurve, GroupLawMatchesTableOnRandomPairs) {
  auto        c = Curve::toy();
  const auto& t = ToyOracle::multiples();
  Rng         rng(1);
  const long  n = ToyOracle::n;
  for (int i = 0; i < 200000; ++i) {
    long j = rng.below(n).get_si(), k = rng.below(n).get_si();
    auto P = test::from_toy(t[j]), Q = test::from_toy(t[k]);
    ASSERT_EQ(test::to_toy(c->add(P, Q)), t[(j + k) % n]);
    ASSERT_EQ(test::to_toy(c->sub(P, Q)), t[((j - k) % n + n) % n]);
  }
  // Doubling, inverses and the identity explicitly.
  for (long j = 0; j < n; j += 97) {
    auto P = test::from_toy(t[j]);
    ASSERT_EQ(test::to_toy(c->dbl(P)), t[(2 * j) % n]);
    ASSERT_TRUE(c->add(P, c->negate(P)).is_identity());
    ASSERT_EQ(c->add(P, CurvePoint::identity()), P);
    ASSERT_TRUE(c->contains(P));
  }
}

TEST(ToyCurve, AssociativeAndCommutative) {
  auto        c = Curve::toy();
  const auto& t = ToyOracle::multiples();
  Rng         rng(2);
  for (int i = 0; i < 5000; ++i) {
    auto P = test::from_toy(t[rng.below(ToyOracle::n).get_si()]);
    auto Q = test::from_toy(t[rng.below(ToyOracle::n).get_si()]);
    auto R = test::from_toy(t[rng.below(ToyOracle::n).get_si()]);
    ASSERT_EQ(c->add(c->add(P, Q), R), c->add(P, c->add(Q, R)));
    ASSERT_EQ(c->add(P, Q), c->add(Q, P));
  }
}

TEST(ToyCurve, KoblitzEncodingMatchesWindowScan) {
  auto        c     = Curve::toy();
  const auto& roots = ToyOracle::sqrt_table();
  const auto  kappa = static_cast<std::int64_t>(c->params().kappa);
  std::size_t failures = 0;
  for (std::int64_t m = 0; m <= c->max_message().get_si(); ++m) {
    std::optional<ToyPoint> expect;
    for (std::int64_t x = m * kappa; x < m * kappa + kappa && !expect; ++x) {
      std::int64_t rhs = ToyOracle::md(ToyOracle::md(ToyOracle::md(x * x) * x) + ToyOracle::md(ToyOracle::a * x) + ToyOracle::b);
      if (roots[rhs] >= 0) expect = ToyPoint{x, roots[rhs], false};
    }
    if (!expect) {
      ++failures;
      EXPECT_EQ(code_of([&] { (void)c->koblitz_encode(BigInt(static_cast<long>(m))); }), ErrorCode::EncodingFailure);
      continue;
    }
    CurvePoint X = c->koblitz_encode(BigInt(static_cast<long>(m)));
    ASSERT_EQ(test::to_toy(X), *expect) << "m=" << m;
    ASSERT_EQ(c->koblitz_decode(X), m);
  }
  // Roughly 2^-kappa of the windows are empty; none of the byte-sized ones may be.
  EXPECT_LT(failures, 2000u);
  for (int byte = 0; byte < 256; ++byte) {
    std::uint8_t b = static_cast<std::uint8_t>(byte);
    auto         X = c->koblitz_encode_chunk(std::span(&b, 1));
    ASSERT_EQ(c->koblitz_decode_chunk(X), Bytes{b});
  }
}

TEST(ToyCurve, ChunkCapacityAndNoteSize) {
  auto c = Curve::toy();
  EXPECT_EQ(c->chunk_capacity(), 1u);
  EXPECT_EQ(c->point_size(), 3u);
  EXPECT_EQ(note_size(*c), 75u);
  Note n{5, c->generator(), FieldElement::zero(hash_field()), FieldElement::zero(hash_field())};
  EXPECT_EQ(note_to_points(*c, n).size(), 77u);
}

TEST(Secp256k1, KnownMultiples) {
  auto c  = Curve::secp256k1();
  auto G2 = c->mul(BigInt(2), c->generator());
  EXPECT_EQ(bigint_to_hex(G2.x()), "c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5");
  EXPECT_EQ(bigint_to_hex(G2.y()), "1ae168fea63dc339a3c58419466ceaeef7f632653266d0e1236431a950cfe52a");
  auto G3 = c->mul(BigInt(3), c->generator());
  EXPECT_EQ(bigint_to_hex(G3.x()), "f9308a019258c31049344f85f89d5229b531c845836f99b08601f113bce036f9");
  EXPECT_EQ(bigint_to_hex(G3.y()), "388f7b0f632de8140fe337e62a37f3566500a99934c2231b6cb9fd7584b8e672");
  EXPECT_EQ(c->add(G2, c->generator()), G3);
  EXPECT_TRUE(c->mul(c->order(), c->generator()).is_identity());
  EXPECT_TRUE(c->mul(BigInt(0), c->generator()).is_identity());
  EXPECT_EQ(c->mul(BigInt(1), c->generator()), c->generator());
  EXPECT_EQ(c->mul(c->order() - 1, c->generator()), c->negate(c->generator()));
}

TEST(Secp256k1, ScalarMulIsHomomorphic) {
  auto c = Curve::secp256k1();
  Rng  rng(3);
  for (int i = 0; i < 50; ++i) {
    auto a = c->random_scalar(rng), b = c->random_scalar(rng);
    auto P = c->mul_base(a);
    ASSERT_TRUE(c->contains(P));
    EXPECT_EQ(c->add(c->mul_base(a), c->mul_base(b)), c->mul_base(a + b));
    EXPECT_EQ(c->mul(b, P), c->mul_base(a * b));
    EXPECT_TRUE(c->mul(c->order(), P).is_identity());
  }
}

TEST(Secp256k1, KoblitzRoundtripTenThousand) {
  auto c = Curve::secp256k1();
  EXPECT_EQ(c->chunk_capacity(), 31u);
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    Bytes chunk(31);
    for (auto& b : chunk) b = static_cast<std::uint8_t>(rng.next_u64());
    auto X = c->koblitz_encode_chunk(chunk);
    ASSERT_TRUE(c->contains(X));
    ASSERT_EQ(c->koblitz_decode_chunk(X), chunk);
  }
}

TEST(Curve, PointEncoding) {
  for (auto c : {Curve::toy(), Curve::secp256k1()}) {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
      auto P = c->mul_base(c->random_scalar(rng));
      auto e = c->encode_point(P);
      ASSERT_EQ(e.size(), c->point_size());
      ASSERT_TRUE(e[0] == 2 || e[0] == 3);
      EXPECT_EQ(e[0] & 1, static_cast<int>(mpz_odd_p(P.y().get_mpz_t()) ? 1 : 0));
      EXPECT_EQ(c->decode_point(e), P);
      EXPECT_EQ(c->point_from_hex(c->point_to_hex(P)), P);
    }
    EXPECT_EQ(c->encode_point(CurvePoint::identity()), Bytes{0});
    EXPECT_TRUE(c->decode_point(Bytes{0}).is_identity());
    EXPECT_THROW((void)c->decode_point(Bytes{4, 1, 2}), Error);
  }
  // An x with no point on the toy curve.
  auto        c     = Curve::toy();
  const auto& roots = ToyOracle::sqrt_table();
  for (std::int64_t x = 0; x < ToyOracle::p; ++x) {
    std::int64_t rhs = ToyOracle::md(ToyOracle::md(ToyOracle::md(x * x) * x) + ToyOracle::md(ToyOracle::a * x) + ToyOracle::b);
    if (roots[rhs] < 0) {
      Bytes e = {2, static_cast<std::uint8_t>(x >> 8), static_cast<std::uint8_t>(x)};
      EXPECT_EQ(code_of([&] { (void)c->decode_point(e); }), ErrorCode::NotOnCurve);
      break;
    }
  }
}

TEST(Curve, MessageFramingRoundtrip) {
  for (auto c : {Curve::toy(), Curve::secp256k1()}) {
    Rng rng(8);
    for (std::size_t len : {0u, 1u, 29u, 30u, 31u, 32u, 75u, 105u}) {
      Bytes msg(len);
      for (auto& b : msg) b = static_cast<std::uint8_t>(rng.next_u64());
      auto pts = c->encode_message(msg);
      EXPECT_EQ(pts.size(), (len + 2 + c->chunk_capacity() - 1) / c->chunk_capacity());
      EXPECT_EQ(c->decode_message(pts), msg);
      if (pts.size() > 1) {
        auto shorter = pts;
        shorter.pop_back();
        EXPECT_EQ(code_of([&] { (void)c->decode_message(shorter); }), ErrorCode::DecodingFailure);
      }
    }
    EXPECT_EQ(code_of([&] { (void)c->koblitz_decode(CurvePoint::identity()); }), ErrorCode::DecodingFailure);
  }
}

TEST(Curve, RejectsBadParameters) {
  auto params = Curve::toy()->params();
  params.gy += 1;
  EXPECT_EQ(code_of([&] { Curve{params}; }), ErrorCode::InvalidConfig);
  params = Curve::toy()->params();
  params.n += 2;
  EXPECT_EQ(code_of([&] { Curve{params}; }), ErrorCode::InvalidConfig);
  params       = Curve::toy()->params();
  params.kappa = 1;
  EXPECT_EQ(code_of([&] { Curve{params}; }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { (void)Curve::by_name("p256"); }), ErrorCode::InvalidConfig);
}

TEST(Curve, ParamsJsonRoundtrip) {
  for (auto c : {Curve::toy(), Curve::secp256k1()}) {
    auto text = curve_params_to_json(c->params());
    auto back = parse_curve_params(text);
    Curve again(back);
    EXPECT_EQ(again.generator(), c->generator());
    EXPECT_EQ(again.order(), c->order());
    EXPECT_EQ(again.params().kappa, c->params().kappa);
  }
}
