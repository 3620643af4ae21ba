#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sede/codec.hpp"
#include "sede/error.hpp"
#include "sede/merkle.hpp"
#include "sede/note.hpp"
#include "sede/rng.hpp"
#include "support.hpp"

using namespace sede;

namespace {

Note random_note(const Curve& c, Rng& rng) {
  auto k = c.random_scalar(rng);
  auto K = c.mul_base(k);
  return {rng.next_u64(), K, rng.element(hash_field()), member_id(c, K)};
}

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

TEST(Note, SizesPerCurve) {
  EXPECT_EQ(note_size(*Curve::toy()), 75u);
  EXPECT_EQ(note_size(*Curve::secp256k1()), 105u);
  Rng rng(1);
  EXPECT_EQ(note_to_points(*Curve::secp256k1(), random_note(*Curve::secp256k1(), rng)).size(), 4u);
  EXPECT_EQ(note_to_points(*Curve::toy(), random_note(*Curve::toy(), rng)).size(), 77u);
}

TEST(Note, SerializationLayout) {
  auto c = Curve::secp256k1();
  Note n{0x0102030405060708ULL, c->generator(), FieldElement(hash_field(), 9L), FieldElement(hash_field(), 10L)};
  auto b = serialize_note(*c, n);
  ASSERT_EQ(b.size(), 105u);
  EXPECT_EQ(Bytes(b.begin(), b.begin() + 8), (Bytes{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(Bytes(b.begin() + 8, b.begin() + 41), c->encode_point(c->generator()));
  EXPECT_EQ(b[72], 9);
  EXPECT_EQ(b[104], 10);
  EXPECT_EQ(deserialize_note(*c, b), n);
  b.pop_back();
  EXPECT_EQ(code_of([&] { (void)deserialize_note(*c, b); }), ErrorCode::MalformedData);
}

TEST(Note, PointRoundtrip) {
  for (auto c : {Curve::toy(), Curve::secp256k1()}) {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
      Note n = random_note(*c, rng);
      ASSERT_EQ(points_to_note(*c, note_to_points(*c, n)), n);
    }
    // Degenerate padding note: zero value, identity owner, zero fields.
    Note z{0, CurvePoint::identity(), FieldElement::zero(hash_field()), FieldElement::zero(hash_field())};
    EXPECT_EQ(points_to_note(*c, note_to_points(*c, z)), z);
  }
}

TEST(Note, CommitmentAndNullifierProperties) {
  auto c = Curve::secp256k1();
  Rng  rng(3);
  auto k = c->random_scalar(rng);
  Note n{10, c->mul_base(k), rng.element(hash_field()), member_id(*c, c->mul_base(k))};
  EXPECT_EQ(commit(*c, n), commit(*c, n));
  Note other = n;
  other.blinding += FieldElement::one(hash_field());
  EXPECT_NE(commit(*c, n), commit(*c, other));

  EXPECT_EQ(nullify(*c, n, 4, k), nullify(*c, n, 4, k));
  EXPECT_EQ(nullify(*c, n, 4, k), derive_nullifier(*c, n, 4));
  EXPECT_NE(derive_nullifier(*c, n, 4), derive_nullifier(*c, n, 5));
  EXPECT_NE(derive_nullifier(*c, n, 4), derive_nullifier(*c, other, 4));
  EXPECT_EQ(code_of([&] { (void)nullify(*c, n, 4, k + c->scalar(1L)); }), ErrorCode::KeyMismatch);
}

TEST(Note, FrozenReferenceVectors) {
  const auto path = std::filesystem::path(SEDE_GOLDEN_DIR) / "note_vectors.json";
  Json       got  = Json::array();
  for (auto c : {Curve::toy(), Curve::secp256k1()}) {
    Rng rng(Rng::derive(7, "vectors", c->name() == "toy" ? 0 : 1));
    for (int i = 0; i < 4; ++i) {
      Note n = random_note(*c, rng);
      got.push_back({{"curve", c->name()},
                     {"note", to_hex(serialize_note(*c, n))},
                     {"commitment", commit(*c, n).value.to_hex()},
                     {"nullifier_at_3", derive_nullifier(*c, n, 3).value.to_hex()},
                     {"member_id", member_id(*c, n.owner).to_hex()}});
    }
  }
  if (test::update_golden()) {
    std::ofstream(path) << got.dump(2) << '\n';
    GTEST_SKIP() << "rewrote " << path;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  Json want = Json::parse(test::slurp(path));
  EXPECT_EQ(got, want);
  // The vectors also decode back to the same notes.
  for (const auto& v : want) {
    auto c = Curve::by_name(v["curve"].get<std::string>());
    Note n = deserialize_note(*c, from_hex(v["note"].get<std::string>()));
    EXPECT_EQ(commit(*c, n).value.to_hex(), v["commitment"].get<std::string>());
  }
}

TEST(Merkle, EmptyAndFirstInsert) {
  MerkleTree tree(8);
  EXPECT_EQ(tree.root(), test::full_merkle_root({}, 8));
  auto empty = tree.root();
  Rng  rng(4);
  tree.insert({rng.element(hash_field())});
  EXPECT_NE(tree.root(), empty);
  EXPECT_TRUE(tree.is_known_root(empty));
}

TEST(Merkle, RootMatchesFullRecomputeAfterEveryInsert) {
  MerkleTree tree(8, 4);
  Rng        rng(5);
  for (int i = 0; i < 256; ++i) {
    auto before = tree.root();
    EXPECT_EQ(tree.insert({rng.element(hash_field())}), static_cast<std::uint64_t>(i));
    ASSERT_EQ(tree.root(), test::full_merkle_root(tree.leaves(), 8)) << "after " << i + 1;
    ASSERT_NE(tree.root(), before);
  }
  EXPECT_EQ(code_of([&] { tree.insert({FieldElement::one(hash_field())}); }), ErrorCode::TreeFull);
}

TEST(Merkle, PathsStayValidAfterInserts) {
  MerkleTree tree(8);
  Rng        rng(6);
  for (int i = 0; i < 40; ++i) {
    tree.insert({rng.element(hash_field())});
    for (std::uint64_t j = 0; j < tree.size(); ++j) {
      auto path = tree.prove(j);
      ASSERT_TRUE(verify_path(tree.root(), tree.leaves()[j], path));
      Commitment wrong{tree.leaves()[j].value + FieldElement::one(hash_field())};
      ASSERT_FALSE(verify_path(tree.root(), wrong, path));
      auto moved  = path;
      moved.index = j ^ 1;
      ASSERT_FALSE(verify_path(tree.root(), tree.leaves()[j], moved));
    }
  }
  EXPECT_EQ(tree.find(tree.leaves()[7]), 7u);
  EXPECT_FALSE(tree.find({FieldElement::zero(hash_field())}).has_value());
}

TEST(Merkle, RootWindow) {
  MerkleTree tree(8, 3);
  Rng        rng(7);
  std::vector<FieldElement> roots = {tree.root()};
  for (int i = 0; i < 6; ++i) {
    tree.insert({rng.element(hash_field())});
    roots.push_back(tree.root());
  }
  // Current root plus the three before it.
  for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_EQ(tree.is_known_root(roots[i]), i + 4 >= roots.size()) << i;
}
