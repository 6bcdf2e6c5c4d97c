#include <gtest/gtest.h>

#include "property_checks.hpp"

TEST(Properties, MonotoneInRetrievalSize) {
  EXPECT_EQ(property::monotone_in_retrieval_size(101), 0u);
}

TEST(Properties, NonrelevanceLeavesValuesEqual) {
  EXPECT_EQ(property::nonrelevance_leaves_values_equal(102), 0u);
}

TEST(Properties, StrictlyIncreasingInRelevance) {
  EXPECT_EQ(property::strictly_increasing_in_relevance(103), 0u);
}

TEST(Properties, SwapUpNeverHurts) {
  EXPECT_EQ(property::swap_up_never_hurts(104), 0u);
}

TEST(Properties, ConcaveInContiguousSwapDepth) {
  EXPECT_EQ(property::concave_in_contiguous_swap_depth(105), 0u);
}

TEST(Properties, LexirecallIsATotalPreorder) {
  EXPECT_EQ(property::lexirecall_total_preorder(106), 0u);
}

