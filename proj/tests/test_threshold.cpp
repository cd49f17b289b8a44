#include <gtest/gtest.h>

#include "aoi/threshold.hpp"

namespace aoi {
namespace {

TEST(ThresholdPolicy, FiniteThreshold) {
  const auto policy = ThresholdPolicy::at(4);
  EXPECT_FALSE(policy.is_never());
  EXPECT_EQ(policy.value(), 4);
  EXPECT_FALSE(policy.stores(3, true));
  EXPECT_TRUE(policy.stores(4, true));
  EXPECT_TRUE(policy.stores(400, true));
  EXPECT_FALSE(policy.stores(400, false));
}

TEST(ThresholdPolicy, NeverStores) {
  const auto policy = ThresholdPolicy::never();
  EXPECT_TRUE(policy.is_never());
  for (int v = 1; v < 1000; v += 37) EXPECT_FALSE(policy.stores(v, true));
}

TEST(ThresholdPolicy, RejectsThresholdBelowTwo) {
  EXPECT_THROW(ThresholdPolicy::at(1), std::invalid_argument);
  EXPECT_THROW(ThresholdPolicy::at(0), std::invalid_argument);
  EXPECT_THROW(ThresholdPolicy::at(-3), std::invalid_argument);
}

TEST(ThresholdPolicy, TextRoundTrip) {
  EXPECT_EQ(ThresholdPolicy::at(17).to_string(), "17");
  EXPECT_EQ(ThresholdPolicy::never().to_string(), "inf");
  EXPECT_EQ(ThresholdPolicy::parse("17"), ThresholdPolicy::at(17));
  EXPECT_EQ(ThresholdPolicy::parse("inf"), ThresholdPolicy::never());
  EXPECT_EQ(ThresholdPolicy::parse("never"), ThresholdPolicy::never());
}

TEST(ThresholdPolicy, ParseRejectsGarbage) {
  for (const char* bad : {"", "1", "2.5", "abc", "-4", "3x"}) {
    EXPECT_THROW(ThresholdPolicy::parse(bad), std::invalid_argument) << bad;
  }
}

}  // namespace
}  // namespace aoi
