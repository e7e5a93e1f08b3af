#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "postedit/text.hpp"

namespace postedit {

struct LexiconEntry {
  std::vector<std::string> source_term;  // token surfaces
  std::vector<std::string> target_terms;  // alternatives, [0] is canonical
  std::string domain;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
  friend auto operator<=>(const TokenRange&, const TokenRange&) = default;
};

struct LexiconMatch {
  TokenRange range;
  const LexiconEntry* entry = nullptr;
};

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string name, std::string source_lang, std::string target_lang,
          std::vector<LexiconEntry> entries);

  // Parses TSV lines "source<TAB>target[|alt...][<TAB>domain]". Blank
  // lines and '#' comments are skipped. Entries sharing a source term are
  // merged and duplicate targets dropped.
  // Throws MalformedLine or Error(EmptyLexicon).
  static Lexicon parse(std::string_view contents, std::string name,
                       std::string source_lang = {},
                       std::string target_lang = {});
  static Lexicon load(const std::string& path, std::string source_lang = {},
                      std::string target_lang = {});

  // Serializes back to the TSV form accepted by `parse`.
  std::string to_tsv() const;

  const std::string& name() const { return name_; }
  const std::string& source_lang() const { return source_lang_; }
  const std::string& target_lang() const { return target_lang_; }
  const std::vector<LexiconEntry>& entries() const { return entries_; }

  // Entries whose folded first token is `folded_first`, longest first.
  const std::vector<std::size_t>& candidates(const std::string& folded_first) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.name_ == b.name_ && a.source_lang_ == b.source_lang_ &&
           a.target_lang_ == b.target_lang_ && a.entries_ == b.entries_;
  }

 private:
  void build_index();

  std::string name_;
  std::string source_lang_;
  std::string target_lang_;
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

// Left-to-right longest match over case-folded token surfaces. Matches
// never overlap; the scan resumes after each match.
std::vector<LexiconMatch> find_matches(const std::vector<Token>& tokens,
                                       const Lexicon& lexicon);

}  // namespace postedit
