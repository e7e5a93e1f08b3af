#include <gtest/gtest.h>

#include "postedit/error.hpp"
#include "postedit/text.hpp"

using namespace postedit;

namespace {

std::vector<std::string> pieces(std::string_view text, const AbbreviationList& abbr = {}) {
  std::vector<std::string> out;
  for (const auto& s : split_sentences(text, {}, abbr)) out.emplace_back(text.substr(s.start, s.size()));
  return out;
}

}  // namespace

TEST(Tokenize, SplitsPunctuationAndDanda) {
  auto toks = token_surfaces(tokenize("बैंक ने दर बढ़ाई। ठीक, है?"));
  std::vector<std::string> want = {"बैंक", "ने", "दर", "बढ़ाई", "।", "ठीक", ",", "है", "?"};
  EXPECT_EQ(toks, want);
}

TEST(Tokenize, SpansAreByteOffsets) {
  std::string text = "नई  नीति.";
  auto toks = tokenize(text);
  ASSERT_EQ(toks.size(), 3u);
  for (const auto& t : toks) EXPECT_EQ(text.substr(t.span.start, t.span.size()), t.surface);
  EXPECT_EQ(toks[1].span.start, std::string("नई  ").size());
}

TEST(Tokenize, DetokenizeIsIdentity) {
  for (std::string text : {"a  b\tc.", " lead and trail ", "", "रेपो दर, 6.5%।"})
    EXPECT_EQ(detokenize(tokenize(text), text), text);
}

TEST(Unicode, Nfc) {
  // U+095C is a composition exclusion: NFC gives DA + NUKTA.
  std::string decomposed = "\xE0\xA4\xA1\xE0\xA4\xBC";
  EXPECT_EQ(nfc("\xE0\xA5\x9C"), decomposed);
  EXPECT_EQ(nfc("e\xCC\x81"), "\xC3\xA9");
  EXPECT_THROW(nfc("\xFF"), Error);
  EXPECT_FALSE(is_valid_utf8("\xC3"));
}

TEST(Unicode, FoldCase) {
  EXPECT_EQ(fold_case("Bank RATE"), "bank rate");
  EXPECT_EQ(fold_case("Straße"), "strasse");
  EXPECT_EQ(fold_case("बैंक"), "बैंक");
}

TEST(Sentences, TerminatorsAndAbbreviations) {
  EXPECT_EQ(pieces("One. Two! Three? चार। पाँच॥ छह"),
            (std::vector<std::string>{"One.", "Two!", "Three?", "चार।", "पाँच॥", "छह"}));
  EXPECT_EQ(pieces("Version 2.5 shipped. Done."), (std::vector<std::string>{"Version 2.5 shipped.", "Done."}));
  AbbreviationList abbr = AbbreviationList::parse("# titles\nDr.\nडॉ.\n");
  EXPECT_EQ(pieces("Dr. Rao came. डॉ. राव आए।", abbr),
            (std::vector<std::string>{"Dr. Rao came.", "डॉ. राव आए।"}));
  EXPECT_EQ(pieces("Dr. Rao came."), (std::vector<std::string>{"Dr.", "Rao came."}));
  EXPECT_TRUE(pieces("   ").empty());
}

TEST(Slp1, WordsAndPassthrough) {
  EXPECT_EQ(slp1_to_devanagari("rAmaH vanam gacCati"), "रामः वनम् गच्छति");
  EXPECT_EQ(slp1_to_devanagari("SrI"), "श्री");
  EXPECT_EQ(slp1_to_devanagari("12"), "12");
  EXPECT_EQ(slp1_to_devanagari(""), "");
}

TEST(Slp1, RejectsForeignCharacters) {
  try {
    slp1_to_devanagari("rAma$");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSLP1Character);
  }
  EXPECT_THROW(slp1_to_devanagari("राम"), Error);
}
