#include <gtest/gtest.h>

#include <string>

#include "sede/field.hpp"
#include "sede/hash.hpp"

using namespace sede;

TEST(Hash, Sha256KnownVectors) {
  EXPECT_EQ(to_hex(sha256(std::string_view(""))), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(to_hex(sha256(std::string_view("abc"))), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(sha256(std::string_view("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(Hash, FramingIsLengthPrefixedBigEndian) {
  Hasher h("dom");
  h.add(std::string_view("xy")).add(std::uint64_t{0x0102});
  Bytes expected = {0, 0, 0, 0, 0, 0, 0, 3, 'd', 'o', 'm', 0, 0, 0, 0, 0, 0, 0, 2, 'x', 'y',
                    0, 0, 0, 0, 0, 0, 0, 8, 0,   0,   0,   0, 0, 0, 1, 2};
  EXPECT_EQ(h.bytes(), expected);
  EXPECT_EQ(h.digest(), sha256(expected));
}

TEST(Hash, ToFieldIsDigestModuloBn254Order) {
  Hasher h("sede/test");
  h.add(std::string_view("payload"));
  BigInt expected_r("21888242871839275222246405745257275088548364400416034343698204186575808495617", 10);
  EXPECT_EQ(hash_field()->modulus(), expected_r);
  BigInt d = bigint_from_bytes(h.digest());
  BigInt m = d % expected_r;
  EXPECT_EQ(h.to_field().value(), m);
}

TEST(Hash, DomainsSeparate) {
  EXPECT_NE(Hasher("a").add(std::string_view("b")).digest(), Hasher("ab").digest());
  EXPECT_NE(Hasher("a").digest(), Hasher("b").digest());
}
