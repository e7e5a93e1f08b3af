#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace postedit {

// Half-open range [start, end). Offsets are UTF-8 byte offsets into the
// owning text; both ends always fall on code point boundaries.
struct TextSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool empty() const { return start == end; }
  bool overlaps(const TextSpan& other) const {
    return start < other.end && other.start < end;
  }

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
  friend auto operator<=>(const TextSpan&, const TextSpan&) = default;
};

// Normalized page coordinates.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  bool valid() const;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Token {
  std::string surface;
  TextSpan span;
  std::optional<BoundingBox> bbox;

  friend bool operator==(const Token&, const Token&) = default;
};

// Unicode helpers (ICU backed).

bool is_valid_utf8(std::string_view text);
// NFC normalization. Throws Error(InvalidText) on malformed UTF-8.
std::string nfc(std::string_view text);
// Full Unicode case fold. Scripts without case (Devanagari) pass through.
std::string fold_case(std::string_view text);
// Strips leading and trailing Unicode whitespace.
std::string_view trim(std::string_view text);

// Tokenization

// Splits on whitespace; every punctuation code point (including the
// danda and double danda) becomes its own token. `lang` is accepted for
// interface stability; the rules are script-agnostic.
std::vector<Token> tokenize(std::string_view text, std::string_view lang = {});

std::vector<std::string> token_surfaces(const std::vector<Token>& tokens);

// Rebuilds text from tokens using the original inter-token gaps of
// `reference`. Identity when `tokens == tokenize(reference)`.
std::string detokenize(const std::vector<Token>& tokens,
                       std::string_view reference);

// Sentence segmentation

class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::set<std::string> entries)
      : entries_(std::move(entries)) {}

  // One abbreviation per line; blank lines and '#' comments ignored.
  static AbbreviationList parse(std::string_view contents);
  static AbbreviationList load(const std::string& path);

  bool contains(std::string_view word) const {
    return entries_.find(std::string(word)) != entries_.end();
  }
  bool empty() const { return entries_.empty(); }
  const std::set<std::string>& entries() const { return entries_; }

 private:
  std::set<std::string> entries_;
};

using SentenceSpan = TextSpan;

// Splits after '.', '!', '?', U+0964 or U+0965 when followed by
// whitespace or end of text, unless the word ending at the terminator is
// a listed abbreviation. Spans exclude surrounding whitespace.
std::vector<SentenceSpan> split_sentences(
    std::string_view text, std::string_view lang = {},
    const AbbreviationList& abbreviations = {});

// Transliteration

// SLP1 to Devanagari. Whitespace and ASCII digits pass through; any other
// character outside the SLP1 alphabet throws InvalidSLP1Character.
std::string slp1_to_devanagari(std::string_view input);

}  // namespace postedit
