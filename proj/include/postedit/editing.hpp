#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "postedit/audit.hpp"
#include "postedit/lexicon.hpp"
#include "postedit/model.hpp"
#include "postedit/tm.hpp"

namespace postedit {

// One run of non-matching tokens between two texts.
struct DiffHunk {
  std::string old_text;  // "" for a pure insertion
  std::string new_text;  // "" for a pure deletion
  TokenRange old_tokens;
  TokenRange new_tokens;
  // Region of the old text to overwrite with `replacement` when patching.
  // Both extend to the neighbouring unchanged tokens, so surrounding
  // whitespace is carried along.
  TextSpan old_region;
  std::string replacement;

  friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

// Token-level LCS diff. Adjacent non-matching tokens on either side merge
// into one hunk.
std::vector<DiffHunk> diff_segments(std::string_view old_text, std::string_view new_text,
                                    std::string_view lang = {});

// Applies hunks produced by `diff_segments(old_text, ...)`. Reproduces the
// new text exactly whenever unchanged tokens kept their spacing.
std::string patch(std::string_view old_text, const std::vector<DiffHunk>& hunks);

enum class ReplacementScope { CurrentPage, UneditedPages, AllPages };

std::string_view to_string(ReplacementScope scope);
std::optional<ReplacementScope> parse_scope(std::string_view name);

struct ReplacementRule {
  std::string rule_id;
  std::vector<std::string> find;  // token surfaces, matched case-sensitively
  std::string replace;
  Provenance provenance = Provenance::GlobalReplacement;

  friend bool operator==(const ReplacementRule&, const ReplacementRule&) = default;
};

// Builds a rule with a deterministic id derived from its content.
// Throws Error(InvalidArgument) when `find` tokenizes to nothing.
ReplacementRule make_rule(std::string_view find, std::string_view replace,
                          Provenance provenance, std::string_view lang = {});

struct Occurrence {
  std::string segment_id;
  TextSpan span;
  std::string before_text;
  std::string after_text;
  std::string rule_id;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct PreviewReport {
  std::map<int, std::vector<Occurrence>> pages;
  std::size_t total_count = 0;

  friend bool operator==(const PreviewReport&, const PreviewReport&) = default;
};

// Page indices a scope selects, ascending.
std::vector<int> scope_pages(const Project& project, ReplacementScope scope,
                             int current_page);

// Every whole-token occurrence the rules would replace, without mutating.
// Matching is left to right and non-overlapping; on a tie the earlier
// rule wins. Occurrences whose text already equals the replacement are
// not reported.
PreviewReport preview(const std::vector<ReplacementRule>& rules, ReplacementScope scope,
                      const Project& project, int current_page);

// Performs exactly the replacements `preview` reports, highlights them
// with the rule provenance, and returns how many were made.
std::size_t apply(const std::vector<ReplacementRule>& rules, ReplacementScope scope,
                  Project& project, int current_page, const EditStamp& stamp);

// Rules derived from each target segment's edits since the last save.
// Pure insertions are skipped and identical rules merged.
std::vector<ReplacementRule> collect_page_edits(const Project& project, int page_index);

// Collects the page's edits, stores them in the project TM, moves every
// segment baseline to its current text and logs PageSaved.
std::vector<ReplacementRule> save_page(Project& project, int page_index,
                                       const EditStamp& stamp);

// Adds every hunk with a non-empty old side. Returns the number added.
std::size_t record_tm(TranslationMemory& tm, const std::vector<DiffHunk>& edits,
                      std::string_view source_project, std::int64_t timestamp_ms);

// Converts TM entries to TM-provenance rules and applies them to all
// pages. An empty TM is a no-op returning 0.
std::size_t apply_tm(const TranslationMemory& tm, Project& project, const EditStamp& stamp);

}  // namespace postedit
