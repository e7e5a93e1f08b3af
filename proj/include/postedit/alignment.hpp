#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "postedit/text.hpp"

namespace postedit {

// Dense row-major score grid: rows are source tokens, columns target tokens.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // Throws Error(MalformedMatrix) on zero dimensions.
  SimilarityMatrix(std::size_t n_src, std::size_t n_tgt, double fill = 0.0);
  // Throws Error(MalformedMatrix) on ragged, empty, or non-finite input.
  static SimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t n_src() const { return n_src_; }
  std::size_t n_tgt() const { return n_tgt_; }
  bool empty() const { return n_src_ == 0; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_tgt_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * n_tgt_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * n_tgt_, n_tgt_};
  }
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const SimilarityMatrix&,
                         const SimilarityMatrix&) = default;

 private:
  std::size_t n_src_ = 0;
  std::size_t n_tgt_ = 0;
  std::vector<double> entries_;
};

// Matrix file: first line "n_src n_tgt", then n_src lines of n_tgt
// space-separated decimals. Throws Error(MalformedMatrix).
SimilarityMatrix parse_matrix(std::string_view contents);
// Shortest round-trip decimal rendering of every entry.
std::string format_matrix(const SimilarityMatrix& matrix);

struct AlignmentLink {
  std::size_t src = 0;
  std::size_t tgt = 0;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
  friend auto operator<=>(const AlignmentLink&, const AlignmentLink&) = default;
};

using AlignmentLinkSet = std::set<AlignmentLink>;

enum class Axis { Rows, Columns };

// Numerically stable softmax along `axis`. Each denominator is summed in
// ascending value order, so permuting the other axis cannot perturb it.
SimilarityMatrix normalize(const SimilarityMatrix& matrix, Axis axis);

// Keeps (i, j) when both the row- and column-normalized scores exceed
// `threshold`. Throws Error(InvalidThreshold) unless 0 < threshold < 1.
AlignmentLinkSet intersect_align(const SimilarityMatrix& matrix,
                                 double threshold);

// Repeatedly takes the largest raw score whose row and column are both
// unused and which is strictly above `floor`. Ties go to the smallest
// source index, then the smallest target index.
AlignmentLinkSet greedy_align(const SimilarityMatrix& matrix, double floor);

// Smallest target token range covering every target linked from
// `src_range`, or nullopt when nothing is linked.
std::optional<std::pair<std::size_t, std::size_t>> project_span(
    const AlignmentLinkSet& links,
    std::pair<std::size_t, std::size_t> src_range);

class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual SimilarityMatrix score(std::span<const Token> source,
                                 std::span<const Token> target) const = 0;
};

// Dice coefficient over case-folded character-bigram sets.
class DiceBigramSimilarity final : public SimilarityProvider {
 public:
  SimilarityMatrix score(std::span<const Token> source,
                         std::span<const Token> target) const override;
};

double dice_bigram(std::string_view a, std::string_view b);

SimilarityMatrix default_similarity(std::span<const Token> source,
                                    std::span<const Token> target);

enum class Decoder { Greedy, Intersect };

struct AlignmentConfig {
  Decoder decoder = Decoder::Greedy;
  double intersect_threshold = 0.001;
  double greedy_floor = 0.0;
};

AlignmentLinkSet decode(const SimilarityMatrix& matrix,
                        const AlignmentConfig& config);

}  // namespace postedit
