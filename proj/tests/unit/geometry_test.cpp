#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wmemo/geometry.hpp"

namespace wmemo {
namespace {

TEST(Geometry, DefaultsDescribe32kTwoWay) {
  const CacheGeometry g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_EQ(g.tag_bits, 18u);
  EXPECT_EQ(g.index_bits, 9u);
  EXPECT_EQ(g.offset_bits, 5u);
  EXPECT_EQ(g.low_bits(), 14u);
  EXPECT_EQ(std::uint64_t{g.sets} * g.ways * g.line_bytes, 32u * 1024u);
}

TEST(Geometry, ValidateRejectsBrokenInvariants) {
  CacheGeometry g;
  g.tag_bits = 17;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = CacheGeometry{};
  g.line_bytes = 64;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = CacheGeometry{};
  g.sets = 256;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = CacheGeometry{};
  g.ways = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = CacheGeometry{};
  g.instr_stride_bytes = 12;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  EXPECT_THROW(CacheGeometry::from_widths(8, 5, 9, 2), std::invalid_argument);
}

TEST(Geometry, DecomposeExamples) {
  const CacheGeometry g;
  EXPECT_EQ(decompose(0x0, g), (AddressParts{0, 0, 0}));
  EXPECT_EQ(decompose(0x42, g), (AddressParts{0, 2, 2}));
  EXPECT_EQ(decompose(0x7FFC, g), (AddressParts{1, 0x1FF, 0x1C}));
}

TEST(Geometry, ComposeExamplesAndErrors) {
  const CacheGeometry g;
  EXPECT_EQ(compose({0, 0, 0}, g), 0x0u);
  EXPECT_EQ(compose({0, 2, 2}, g), 0x42u);
  EXPECT_EQ(compose({1, 0x1FF, 0x1C}, g), 0x7FFCu);
  EXPECT_THROW(compose({1u << 18, 0, 0}, g), std::out_of_range);
  EXPECT_THROW(compose({0, 512, 0}, g), std::out_of_range);
  EXPECT_THROW(compose({0, 0, 32}, g), std::out_of_range);
}

TEST(Geometry, SameLine) {
  const CacheGeometry g;
  EXPECT_TRUE(same_line(0x100, 0x11F, g));
  EXPECT_FALSE(same_line(0x11C, 0x120, g));
  EXPECT_FALSE(same_line(0x100, 0x4100, g));
  // Same index, different tag.
  EXPECT_EQ(oracle::slice(0x100, g).index, oracle::slice(0x4100, g).index);
}

TEST(Geometry, DecomposeMatchesDivisionOracleExhaustively16Bit) {
  const auto g = CacheGeometry::from_widths(16, 5, 9, 2);
  for (std::uint64_t a = 0; a < (1u << 16); ++a) {
    const AddressParts p = decompose(a, g);
    const oracle::Parts o = oracle::slice(a, g);
    ASSERT_EQ(p.tag, o.tag) << a;
    ASSERT_EQ(p.index, o.index) << a;
    ASSERT_EQ(p.offset, o.offset) << a;
  }
}

TEST(Geometry, RoundTripRandom32Bit) {
  const CacheGeometry g;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1'000'000; ++i) {
    const Addr a = rng() & g.address_mask();
    ASSERT_EQ(compose(decompose(a, g), g), a);
  }
}

TEST(Geometry, SameLineAgreesWithSliceOracle) {
  const auto g = CacheGeometry::from_widths(12, 3, 4, 4);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) {
    const Addr a = rng() & g.address_mask();
    const Addr b = (rng() & 1) ? (a ^ (rng() & 0xF)) : rng() & g.address_mask();
    const auto pa = oracle::slice(a, g), pb = oracle::slice(b, g);
    ASSERT_EQ(same_line(a, b, g), pa.tag == pb.tag && pa.index == pb.index);
  }
}

}  // namespace
}  // namespace wmemo
