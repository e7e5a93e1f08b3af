#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "postedit/alignment.hpp"
#include "postedit/error.hpp"
#include "postedit/text.hpp"

using namespace postedit;

TEST(Matrix, ParseAndFormatRoundTrip) {
  auto m = parse_matrix("2 3\n0.1 0.25 1\n-2 0 3.5\n");
  EXPECT_EQ(m.n_src(), 2u);
  EXPECT_EQ(m.n_tgt(), 3u);
  EXPECT_DOUBLE_EQ(m(1, 2), 3.5);
  EXPECT_EQ(parse_matrix(format_matrix(m)), m);
}

TEST(Matrix, RejectsBadInput) {
  for (const char* bad : {"", "2 2\n1 2\n3\n", "1 1\nnan\n", "0 3\n", "1 2\n1 x\n", "1 1\n1\n2\n"})
    EXPECT_THROW(parse_matrix(bad), Error) << bad;
  EXPECT_THROW(SimilarityMatrix::from_rows({{1.0}, {1.0, 2.0}}), Error);
}

TEST(Normalize, RowsAndColumnsSumToOne) {
  auto m = SimilarityMatrix::from_rows({{1, 2, 3}, {1000, 0, -1000}});
  auto r = normalize(m, Axis::Rows);
  auto c = normalize(m, Axis::Columns);
  for (std::size_t i = 0; i < 2; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 3; ++j) s += r(i, j);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(c(0, j) + c(1, j), 1.0, 1e-12);
  EXPECT_NEAR(r(1, 0), 1.0, 1e-12);
  EXPECT_NEAR(r(0, 2), oracle::row_softmax({{1, 2, 3}}, 0, 2), 1e-12);
}

TEST(Greedy, TieBreakSmallestIndices) {
  auto m = SimilarityMatrix::from_rows({{1, 1}, {1, 1}});
  AlignmentLinkSet want = {{0, 0}, {1, 1}};
  EXPECT_EQ(greedy_align(m, 0.0), want);
}

TEST(Greedy, FloorIsStrict) {
  auto m = SimilarityMatrix::from_rows({{0.5, 0.2}, {0.2, 0.5}});
  EXPECT_TRUE(greedy_align(m, 0.5).empty());
  EXPECT_EQ(greedy_align(m, 0.3).size(), 2u);
}

TEST(Greedy, NotHungarian) {
  // Greedy takes 0.9 first even though the other pairing sums higher.
  auto m = SimilarityMatrix::from_rows({{0.9, 0.8}, {0.8, 0.1}});
  AlignmentLinkSet want = {{0, 0}, {1, 1}};
  EXPECT_EQ(greedy_align(m, 0.0), want);
}

TEST(Intersect, ThresholdValidation) {
  auto m = SimilarityMatrix::from_rows({{1}});
  EXPECT_THROW(intersect_align(m, 0.0), Error);
  EXPECT_THROW(intersect_align(m, 1.0), Error);
  AlignmentLinkSet want = {{0, 0}};
  EXPECT_EQ(intersect_align(m, 0.5), want);
}

TEST(Intersect, AllowsManyToMany) {
  auto m = SimilarityMatrix::from_rows({{0, 0}, {0, 0}});
  EXPECT_EQ(intersect_align(m, 0.3).size(), 4u);
  EXPECT_TRUE(intersect_align(m, 0.5).empty());
}

TEST(ProjectSpan, CoversLinkedTargets) {
  AlignmentLinkSet links = {{0, 3}, {1, 1}, {2, 2}};
  auto span = project_span(links, {0, 2});
  ASSERT_TRUE(span);
  EXPECT_EQ(*span, std::make_pair(std::size_t{1}, std::size_t{4}));
  EXPECT_FALSE(project_span(links, {3, 5}));
}

TEST(Dice, Bigrams) {
  EXPECT_DOUBLE_EQ(dice_bigram("night", "nacht"), 0.25);
  EXPECT_DOUBLE_EQ(dice_bigram("Bank", "bank"), 1.0);
  EXPECT_DOUBLE_EQ(dice_bigram("a", "a"), 1.0);
  EXPECT_DOUBLE_EQ(dice_bigram("a", "b"), 0.0);
}

TEST(Decode, FollowsConfig) {
  auto src = tokenize("bank rate");
  auto tgt = tokenize("Bank Rate");
  auto m = default_similarity(src, tgt);
  AlignmentConfig cfg;
  AlignmentLinkSet want = {{0, 0}, {1, 1}};
  EXPECT_EQ(decode(m, cfg), want);
  cfg.decoder = Decoder::Intersect;
  cfg.intersect_threshold = 0.5;
  EXPECT_EQ(decode(m, cfg), want);
}
