#include <gtest/gtest.h>

#include <set>

#include "adspread/random.hpp"

namespace adspread {
namespace {

// Known-answer vectors published with the Random123 library.
TEST(Philox, MatchesReferenceVectors) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (Philox4x32Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (Philox4x32Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (Philox4x32Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(PhiloxStream, SameAddressSameSequence) {
  PhiloxStream a(StreamKey{42, 7}, StreamPurpose::Threshold, 3, 0);
  PhiloxStream b(StreamKey{42, 7}, StreamPurpose::Threshold, 3, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
}

TEST(PhiloxStream, DistinctAddressesDiffer) {
  std::set<std::uint64_t> first;
  first.insert(PhiloxStream(StreamKey{1, 0}, StreamPurpose::Threshold, 0, 0)());
  first.insert(PhiloxStream(StreamKey{2, 0}, StreamPurpose::Threshold, 0, 0)());
  first.insert(PhiloxStream(StreamKey{1, 1}, StreamPurpose::Threshold, 0, 0)());
  first.insert(PhiloxStream(StreamKey{1, 0}, StreamPurpose::TieBreak, 0, 0)());
  first.insert(PhiloxStream(StreamKey{1, 0}, StreamPurpose::Threshold, 1, 0)());
  first.insert(PhiloxStream(StreamKey{1, 0}, StreamPurpose::Threshold, 0, 1)());
  EXPECT_EQ(first.size(), 6u);
}

TEST(PhiloxStream, UniformMeanAndRange) {
  PhiloxStream rng(StreamKey{9, 0}, StreamPurpose::Sampling, 0, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.003);
}

TEST(PhiloxStream, UniformIndexCoversRange) {
  PhiloxStream rng(StreamKey{5, 0}, StreamPurpose::Sampling, 0, 0);
  std::array<int, 3> counts{};
  for (int i = 0; i < 30000; ++i) ++counts[uniform_index(rng, 3)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 300);
}

TEST(PhiloxStream, StandardNormalMoments) {
  PhiloxStream rng(StreamKey{11, 0}, StreamPurpose::Sampling, 0, 0);
  double s1 = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.015);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(DeriveSeed, SeparatesTagsAndIndices) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t tag = 0; tag < 4; ++tag) {
    for (std::uint64_t i = 0; i < 4; ++i) seeds.insert(derive_seed(123, tag, i));
  }
  EXPECT_EQ(seeds.size(), 16u);
  EXPECT_EQ(derive_seed(123, 1, 2), derive_seed(123, 1, 2));
}

}  // namespace
}  // namespace adspread
