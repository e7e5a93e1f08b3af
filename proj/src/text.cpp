#include "postedit/text.hpp"

#include <fstream>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "postedit/error.hpp"

namespace postedit {

namespace {

struct CodePoint {
  UChar32 value;
  std::size_t start;
  std::size_t end;
};

// Decodes the code point at `pos`. Malformed sequences are reported as
// U+FFFD covering one byte so scanners always make progress.
CodePoint next_code_point(std::string_view text, std::size_t pos) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c;
  U8_NEXT(bytes, i, static_cast<int32_t>(text.size()), c);
  if (c < 0) c = 0xFFFD;
  return {c, pos, static_cast<std::size_t>(i)};
}

CodePoint previous_code_point(std::string_view text, std::size_t pos) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c;
  U8_PREV(bytes, 0, i, c);
  if (c < 0) c = 0xFFFD;
  return {c, static_cast<std::size_t>(i), pos};
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }
bool is_punct(UChar32 c) { return u_ispunct(c); }

bool is_sentence_terminator(UChar32 c) {
  return c == '.' || c == '!' || c == '?' || c == 0x0964 || c == 0x0965;
}

bool is_opening_punct(UChar32 c) {
  auto category = u_charType(c);
  return category == U_START_PUNCTUATION ||
         category == U_INITIAL_PUNCTUATION || c == '"' || c == '\'';
}

}  // namespace

bool BoundingBox::valid() const {
  return x >= 0 && y >= 0 && w >= 0 && h >= 0 && x + w <= 1.0 &&
         y + h <= 1.0;
}

bool is_valid_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

std::string nfc(std::string_view text) {
  if (!is_valid_utf8(text))
    throw Error(ErrorCode::InvalidText, "text is not valid UTF-8");
  UErrorCode status = U_ZERO_ERROR;
  const auto* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status))
    throw Error(ErrorCode::InvalidText, u_errorName(status));
  auto input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (normalizer->isNormalized(input, status) && U_SUCCESS(status))
    return std::string(text);
  icu::UnicodeString output;
  status = U_ZERO_ERROR;
  normalizer->normalize(input, output, status);
  if (U_FAILURE(status))
    throw Error(ErrorCode::InvalidText, u_errorName(status));
  std::string result;
  output.toUTF8String(result);
  return result;
}

std::string fold_case(std::string_view text) {
  auto input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  input.foldCase();
  std::string result;
  input.toUTF8String(result);
  return result;
}

std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto cp = next_code_point(text, begin);
    if (!is_space(cp.value)) break;
    begin = cp.end;
  }
  std::size_t end = text.size();
  while (end > begin) {
    auto cp = previous_code_point(text, end);
    if (!is_space(cp.value)) break;
    end = cp.start;
  }
  return text.substr(begin, end - begin);
}

std::vector<Token> tokenize(std::string_view text, std::string_view /*lang*/) {
  std::vector<Token> tokens;
  std::size_t word_start = 0;
  bool in_word = false;

  auto close_word = [&](std::size_t end) {
    if (in_word) {
      tokens.push_back(
          {std::string(text.substr(word_start, end - word_start)),
           {word_start, end},
           std::nullopt});
      in_word = false;
    }
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto cp = next_code_point(text, pos);
    if (is_space(cp.value)) {
      close_word(cp.start);
    } else if (is_punct(cp.value)) {
      close_word(cp.start);
      tokens.push_back({std::string(text.substr(cp.start, cp.end - cp.start)),
                        {cp.start, cp.end},
                        std::nullopt});
    } else if (!in_word) {
      in_word = true;
      word_start = cp.start;
    }
    pos = cp.end;
  }
  close_word(text.size());
  return tokens;
}

std::vector<std::string> token_surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string detokenize(const std::vector<Token>& tokens,
                       std::string_view reference) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& token : tokens) {
    out.append(reference.substr(cursor, token.span.start - cursor));
    out.append(token.surface);
    cursor = token.span.end;
  }
  if (cursor < reference.size()) out.append(reference.substr(cursor));
  return out;
}

AbbreviationList AbbreviationList::parse(std::string_view contents) {
  std::set<std::string> entries;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    entries.emplace(word);
  }
  return AbbreviationList(std::move(entries));
}

AbbreviationList AbbreviationList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::vector<SentenceSpan> split_sentences(
    std::string_view text, std::string_view /*lang*/,
    const AbbreviationList& abbreviations) {
  std::vector<SentenceSpan> sentences;
  std::optional<std::size_t> sentence_start;
  std::size_t last_non_space_end = 0;

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto cp = next_code_point(text, pos);
    pos = cp.end;
    if (is_space(cp.value)) continue;
    if (!sentence_start) sentence_start = cp.start;
    last_non_space_end = cp.end;

    if (!is_sentence_terminator(cp.value)) continue;
    bool at_boundary = cp.end == text.size() ||
                       is_space(next_code_point(text, cp.end).value);
    if (!at_boundary) continue;

    if (!abbreviations.empty()) {
      std::size_t word_start = cp.start;
      while (word_start > *sentence_start) {
        auto prev = previous_code_point(text, word_start);
        if (is_space(prev.value)) break;
        word_start = prev.start;
      }
      while (word_start < cp.start) {
        auto first = next_code_point(text, word_start);
        if (!is_opening_punct(first.value)) break;
        word_start = first.end;
      }
      if (abbreviations.contains(
              text.substr(word_start, cp.end - word_start)))
        continue;
    }
    sentences.push_back({*sentence_start, cp.end});
    sentence_start.reset();
  }
  if (sentence_start) sentences.push_back({*sentence_start, last_non_space_end});
  return sentences;
}

}  // namespace postedit
