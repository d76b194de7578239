// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "clonebench/bitstring.hpp"
#include "clonebench/error.hpp"
#include "clonebench/rng.hpp"
#include "clonebench/serialization.hpp"

namespace clonebench {
namespace {

TEST(BitString, TextFormsAreMsbFirst) {
  const BitString b = BitString::from_binary("0110");
  EXPECT_FALSE(b.get(0));
  EXPECT_TRUE(b.get(1));
  EXPECT_TRUE(b.get(2));
  EXPECT_FALSE(b.get(3));
  EXPECT_EQ(b.to_hex(), "6");
  EXPECT_EQ(BitString::from_hex("6"), b);
  EXPECT_EQ(BitString::from_u64(0x6, 4), b);
  EXPECT_EQ(b.to_u64(), 6u);
}

TEST(BitString, HexRoundTripAcrossWordBoundaries) {
  Rng rng(1);
  for (std::size_t n : {1u, 63u, 64u, 65u, 127u, 128u, 300u}) {
    const BitString b = rng.bits(n);
    EXPECT_EQ(BitString::from_hex(b.to_hex(), n), b) << n;
    EXPECT_EQ(BitString::from_binary(b.to_binary()), b) << n;
  }
}

TEST(BitString, RejectsNonzeroPaddingAndBadDigits) {
  EXPECT_THROW(BitString::from_hex("7", 3), Error);
  EXPECT_NO_THROW(BitString::from_hex("6", 3));
  EXPECT_THROW(BitString::from_hex("xz"), Error);
  EXPECT_THROW(BitString::from_binary("012"), Error);
}

TEST(BitString, SliceAppendAndDotWindow) {
  Rng rng(2);
  const BitString a = rng.bits(150);
  BitString joined = a.slice(0, 70);
  joined.append(a.slice(70, 80));
  EXPECT_EQ(joined, a);

  const BitString w = rng.bits(200);
  for (std::size_t off = 0; off + a.size() <= w.size(); off += 7) {
    int parity = 0;
    for (std::size_t i = 0; i < a.size(); ++i) parity ^= a.get(i) & w.get(off + i);
    EXPECT_EQ(a.dot_window(w, off), parity != 0) << off;
  }
}

TEST(BitString, HammingDistance) {
  const BitString a = BitString::from_binary("10110");
  const BitString b = BitString::from_binary("00111");
  EXPECT_EQ(hamming_distance(a, b), 2u);
  EXPECT_DOUBLE_EQ(fractional_hamming_distance(a, b), 0.4);
  EXPECT_THROW(hamming_distance(a, BitString(4)), Error);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, NamedSplitIgnoresStreamPosition) {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 10; ++i) b.next_u64();
  EXPECT_EQ(a.split("x").next_u64(), b.split("x").next_u64());
  EXPECT_NE(a.split("x").next_u64(), a.split("y").next_u64());
  EXPECT_NE(a.split(std::uint64_t{0}).seed(), a.split(std::uint64_t{1}).seed());
}

TEST(Rng, UniformIndexCoversRange) {
  Rng rng(3);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform_index(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Serialization, SchemaVersionChecked) {
  EXPECT_NO_THROW(check_schema_version({{"schema_version", kSchemaVersion}}));
  try {
    check_schema_version({{"schema_version", 99}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataError);
  }
  EXPECT_THROW(check_schema_version(nlohmann::json::object()), Error);
}

TEST(Serialization, U32Hex) {
  EXPECT_EQ(u32_to_hex(0xdeadbeef), "deadbeef");
  EXPECT_EQ(u32_to_hex(1), "00000001");
  EXPECT_EQ(hex_to_u32("deadbeef"), 0xdeadbeefu);
}

TEST(Serialization, MissingFileIsDataError) {
  try {
    read_json_file("/nonexistent/clonebench.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataError);
  }
}

}  // namespace
}  // namespace clonebench
