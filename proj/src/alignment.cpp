#include "postedit/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <unicode/utf8.h>

#include "postedit/error.hpp"

namespace postedit {

SimilarityMatrix::SimilarityMatrix(std::size_t n_src, std::size_t n_tgt,
                                   double fill)
    : n_src_(n_src), n_tgt_(n_tgt), entries_(n_src * n_tgt, fill) {
  if (n_src == 0 || n_tgt == 0)
    throw Error(ErrorCode::MalformedMatrix, "matrix dimensions must be positive");
}

SimilarityMatrix SimilarityMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorCode::MalformedMatrix, "matrix dimensions must be positive");
  SimilarityMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.n_tgt_)
      throw Error(ErrorCode::MalformedMatrix, "ragged matrix row " + std::to_string(i));
    for (std::size_t j = 0; j < m.n_tgt_; ++j) {
      if (!std::isfinite(rows[i][j]))
        throw Error(ErrorCode::MalformedMatrix, "non-finite matrix entry");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw Error(ErrorCode::MalformedMatrix,
                "not a number: '" + std::string(field) + "'");
  return value;
}

}  // namespace

SimilarityMatrix parse_matrix(std::string_view contents) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    auto line = contents.substr(pos, nl - pos);
    if (!split_fields(line).empty()) lines.push_back(line);
    pos = nl + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::MalformedMatrix, "empty matrix file");

  auto header = split_fields(lines.front());
  if (header.size() != 2)
    throw Error(ErrorCode::MalformedMatrix, "header must be 'n_src n_tgt'");
  auto n_src = parse_number<std::size_t>(header[0]);
  auto n_tgt = parse_number<std::size_t>(header[1]);
  if (lines.size() - 1 != n_src)
    throw Error(ErrorCode::MalformedMatrix,
                "expected " + std::to_string(n_src) + " rows, found " +
                    std::to_string(lines.size() - 1));

  std::vector<std::vector<double>> rows;
  rows.reserve(n_src);
  for (std::size_t i = 0; i < n_src; ++i) {
    auto fields = split_fields(lines[i + 1]);
    if (fields.size() != n_tgt)
      throw Error(ErrorCode::MalformedMatrix,
                  "row " + std::to_string(i) + " has " +
                      std::to_string(fields.size()) + " entries");
    std::vector<double> row;
    row.reserve(n_tgt);
    for (auto f : fields) row.push_back(parse_number<double>(f));
    rows.push_back(std::move(row));
  }
  return SimilarityMatrix::from_rows(rows);
}

std::string format_matrix(const SimilarityMatrix& matrix) {
  std::string out = std::to_string(matrix.n_src()) + " " +
                    std::to_string(matrix.n_tgt()) + "\n";
  char buffer[64];
  for (std::size_t i = 0; i < matrix.n_src(); ++i) {
    for (std::size_t j = 0; j < matrix.n_tgt(); ++j) {
      if (j) out += ' ';
      auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, matrix(i, j));
      out.append(buffer, ptr);
    }
    out += '\n';
  }
  return out;
}

namespace {

// Softmax over a strided line of the matrix.
void softmax_line(const SimilarityMatrix& in, SimilarityMatrix& out,
                  std::size_t fixed, Axis axis) {
  const std::size_t len = axis == Axis::Rows ? in.n_tgt() : in.n_src();
  auto at = [&](std::size_t k) -> std::pair<std::size_t, std::size_t> {
    return axis == Axis::Rows ? std::pair{fixed, k} : std::pair{k, fixed};
  };

  double max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < len; ++k) {
    auto [i, j] = at(k);
    max_value = std::max(max_value, in(i, j));
  }
  std::vector<double> exps(len);
  for (std::size_t k = 0; k < len; ++k) {
    auto [i, j] = at(k);
    exps[k] = std::exp(in(i, j) - max_value);
  }
  std::vector<double> sorted = exps;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double e : sorted) total += e;
  for (std::size_t k = 0; k < len; ++k) {
    auto [i, j] = at(k);
    out(i, j) = exps[k] / total;
  }
}

}  // namespace

SimilarityMatrix normalize(const SimilarityMatrix& matrix, Axis axis) {
  if (matrix.empty())
    throw Error(ErrorCode::MalformedMatrix, "matrix dimensions must be positive");
  SimilarityMatrix out(matrix.n_src(), matrix.n_tgt());
  const std::size_t lines = axis == Axis::Rows ? matrix.n_src() : matrix.n_tgt();
  for (std::size_t k = 0; k < lines; ++k) softmax_line(matrix, out, k, axis);
  return out;
}

AlignmentLinkSet intersect_align(const SimilarityMatrix& matrix,
                                 double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorCode::InvalidThreshold,
                "threshold must lie in (0, 1), got " + std::to_string(threshold));
  auto src_to_tgt = normalize(matrix, Axis::Rows);
  auto tgt_to_src = normalize(matrix, Axis::Columns);
  AlignmentLinkSet links;
  for (std::size_t i = 0; i < matrix.n_src(); ++i)
    for (std::size_t j = 0; j < matrix.n_tgt(); ++j)
      if (src_to_tgt(i, j) > threshold && tgt_to_src(i, j) > threshold)
        links.insert({i, j});
  return links;
}

AlignmentLinkSet greedy_align(const SimilarityMatrix& matrix, double floor) {
  if (matrix.empty())
    throw Error(ErrorCode::MalformedMatrix, "matrix dimensions must be positive");
  std::vector<bool> row_used(matrix.n_src(), false);
  std::vector<bool> col_used(matrix.n_tgt(), false);
  AlignmentLinkSet links;

  for (;;) {
    std::optional<AlignmentLink> best;
    double best_value = 0.0;
    for (std::size_t i = 0; i < matrix.n_src(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < matrix.n_tgt(); ++j) {
        if (col_used[j]) continue;
        double value = matrix(i, j);
        if (!(value > floor)) continue;
        // Strict comparison keeps the first cell in row-major order on ties.
        if (!best || value > best_value) {
          best = AlignmentLink{i, j};
          best_value = value;
        }
      }
    }
    if (!best) break;
    links.insert(*best);
    row_used[best->src] = true;
    col_used[best->tgt] = true;
  }
  return links;
}

std::optional<std::pair<std::size_t, std::size_t>> project_span(
    const AlignmentLinkSet& links,
    std::pair<std::size_t, std::size_t> src_range) {
  std::optional<std::size_t> lo, hi;
  for (const auto& link : links) {
    if (link.src < src_range.first || link.src >= src_range.second) continue;
    if (!lo || link.tgt < *lo) lo = link.tgt;
    if (!hi || link.tgt > *hi) hi = link.tgt;
  }
  if (!lo) return std::nullopt;
  return std::pair{*lo, *hi + 1};
}

namespace {

std::set<std::pair<UChar32, UChar32>> bigrams(std::string_view text) {
  std::vector<UChar32> cps;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    cps.push_back(c);
  }
  std::set<std::pair<UChar32, UChar32>> out;
  for (std::size_t k = 1; k < cps.size(); ++k) out.emplace(cps[k - 1], cps[k]);
  return out;
}

}  // namespace

double dice_bigram(std::string_view a, std::string_view b) {
  auto fa = fold_case(a);
  auto fb = fold_case(b);
  auto ba = bigrams(fa);
  auto bb = bigrams(fb);
  // Single code point tokens have no bigrams; score them by identity.
  if (ba.empty() || bb.empty()) return (ba.empty() && bb.empty() && fa == fb) ? 1.0 : 0.0;
  std::size_t common = 0;
  for (const auto& g : ba) common += bb.count(g);
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(ba.size() + bb.size());
}

SimilarityMatrix DiceBigramSimilarity::score(std::span<const Token> source,
                                             std::span<const Token> target) const {
  SimilarityMatrix m(source.size(), target.size());
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j)
      m(i, j) = dice_bigram(source[i].surface, target[j].surface);
  return m;
}

SimilarityMatrix default_similarity(std::span<const Token> source,
                                    std::span<const Token> target) {
  return DiceBigramSimilarity{}.score(source, target);
}

AlignmentLinkSet decode(const SimilarityMatrix& matrix,
                        const AlignmentConfig& config) {
  return config.decoder == Decoder::Greedy
             ? greedy_align(matrix, config.greedy_floor)
             : intersect_align(matrix, config.intersect_threshold);
}

}  // namespace postedit
