#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "sede/error.hpp"
#include "sede/field.hpp"
#include "sede/rng.hpp"

using namespace sede;

namespace {

std::int64_t md(std::int64_t v, std::int64_t p) { return ((v % p) + p) % p; }

void check_small_prime(std::int64_t p) {
  PrimeField f{BigInt(static_cast<long>(p))};

  std::vector<std::int64_t> root(p, -1);
  for (std::int64_t y = p - 1; y >= 0; --y) root[md(y * y, p)] = y;

  for (std::int64_t a = 0; a < p; ++a) {
    BigInt A(static_cast<long>(a));
    auto   s = f.sqrt(A);
    ASSERT_EQ(s.has_value(), root[a] >= 0) << "p=" << p << " a=" << a;
    if (s) {
      ASSERT_EQ(*s, root[a]) << "p=" << p << " a=" << a;
    }
    ASSERT_EQ(f.is_square(A), root[a] >= 0);
    if (a != 0) {
      ASSERT_EQ(md(f.inv(A).get_si() * a, p), 1) << "p=" << p << " a=" << a;
    }
  }
}

}  // namespace

TEST(Field, SqrtAndInverseExhaustiveSmallPrimes) {
  // 65407 and 65557 are the toy curve's p and n; 12289 = 3 * 2^12 + 1 puts
  // Tonelli-Shanks through a long 2-adic loop.
  for (std::int64_t p : {7, 13, 17, 97, 12289, 65407, 65557}) check_small_prime(p);
}

TEST(Field, ArithmeticMatchesMachineIntegers) {
  const std::int64_t p = 65407;
  auto               F = std::make_shared<const PrimeField>(BigInt(static_cast<long>(p)));
  Rng                rng(5);
  for (int i = 0; i < 20000; ++i) {
    std::int64_t a = rng.below(p).get_si(), b = rng.below(p).get_si();
    FieldElement A{F, a}, B{F, b};
    ASSERT_EQ((A + B).value(), md(a + b, p));
    ASSERT_EQ((A - B).value(), md(a - b, p));
    ASSERT_EQ((A * B).value(), md(a * b, p));
    ASSERT_EQ((-A).value(), md(-a, p));
    if (b != 0) {
      ASSERT_EQ(((A / B) * B).value(), a);
    }
  }
}

TEST(Field, AxiomsOnRandomTriplesLargeField) {
  auto F = std::make_shared<const PrimeField>(
      BigInt("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f", 16));
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    auto a = rng.element(F), b = rng.element(F), c = rng.element(F);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + FieldElement::zero(F), a);
    EXPECT_EQ(a * FieldElement::one(F), a);
    EXPECT_TRUE((a + (-a)).is_zero());
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), FieldElement::one(F));
    }
    auto sq = a * a;
    auto r  = F->sqrt(sq.value());
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(F->mul(*r, *r), sq.value());
    EXPECT_LE(*r, F->modulus() - *r);
  }
}

TEST(Field, CanonicalReduction) {
  auto F = std::make_shared<const PrimeField>(BigInt(97));
  EXPECT_EQ(FieldElement(F, 200L).value(), 6);
  EXPECT_EQ(FieldElement(F, -1L).value(), 96);
  EXPECT_EQ(FieldElement(F, BigInt(97)).value(), 0);
}

TEST(Field, InverseOfZeroFails) {
  auto F = std::make_shared<const PrimeField>(BigInt(97));
  try {
    (void)FieldElement::zero(F).inverse();
    FAIL() << "expected DivisionByZero";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(Field, StrictByteDecoding) {
  auto F = std::make_shared<const PrimeField>(BigInt(251));
  EXPECT_EQ(FieldElement::from_bytes(F, Bytes{250}).value(), 250);
  EXPECT_THROW((void)FieldElement::from_bytes(F, Bytes{251}), Error);
  EXPECT_EQ(FieldElement(F, 7L).to_bytes(), Bytes{7});
}

TEST(Field, MixingFieldsFails) {
  auto F = std::make_shared<const PrimeField>(BigInt(97));
  auto G = std::make_shared<const PrimeField>(BigInt(101));
  EXPECT_THROW((void)(FieldElement(F, 1L) + FieldElement(G, 1L)), Error);
}

TEST(Field, HexAndBytesHelpers) {
  EXPECT_EQ(to_hex(Bytes{0x00, 0xab, 0x10}), "00ab10");
  EXPECT_EQ(from_hex("00AB10"), (Bytes{0x00, 0xab, 0x10}));
  EXPECT_THROW(from_hex("abc"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
  EXPECT_EQ(bigint_to_bytes(BigInt(258), 4), (Bytes{0, 0, 1, 2}));
  EXPECT_THROW(bigint_to_bytes(BigInt(65536), 2), Error);
  EXPECT_EQ(bigint_from_bytes(Bytes{1, 0}), 256);
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());

  Rng    r(3);
  BigInt bound(10);
  std::vector<int> hist(10, 0);
  for (int i = 0; i < 10000; ++i) {
    BigInt v = r.below(bound);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, bound);
    ++hist[v.get_si()];
  }
  for (int h : hist) EXPECT_GT(h, 800);
  for (int i = 0; i < 1000; ++i) EXPECT_NE(r.nonzero_below(BigInt(2)), 0);
}

TEST(Rng, DerivedStreamsAreSeparated) {
  EXPECT_EQ(Rng::derive(1, "tx", 0).next_u64(), Rng::derive(1, "tx", 0).next_u64());
  EXPECT_NE(Rng::derive(1, "tx", 0).next_u64(), Rng::derive(1, "tx", 1).next_u64());
  EXPECT_NE(Rng::derive(1, "tx", 0).next_u64(), Rng::derive(1, "notes", 0).next_u64());
  EXPECT_NE(Rng::derive(1, "tx", 0).next_u64(), Rng::derive(2, "tx", 0).next_u64());
}
