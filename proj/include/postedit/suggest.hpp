#pragma once

#include <string>
#include <vector>

#include "postedit/alignment.hpp"
#include "postedit/lexicon.hpp"
#include "postedit/model.hpp"

namespace postedit {

struct Suggestion {
  std::string segment_id;  // target segment
  TextSpan target_span;
  std::string current_text;
  std::string proposed_text;
  LexiconEntry entry;
  TokenRange source_span;
  std::string lexicon;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

// Word links for a sentence pair. Uses the supplied matrix when its shape
// still matches the token counts, otherwise the default scorer.
AlignmentLinkSet word_links(const Project& project, const Segment& source,
                            const Segment& target, const AlignmentConfig& config);

// Proposes `entry.target_terms[0]` wherever a source-side lexicon match
// projects onto target text that is not already one of the entry's terms.
std::vector<Suggestion> suggest(const Segment& source, const Segment& target,
                                const AlignmentLinkSet& links, const Lexicon& lexicon);

// Suggestions for every linked sentence pair on a page across all of the
// project's lexicons, in target order.
std::vector<Suggestion> page_suggestions(const Project& project, int page_index,
                                         const AlignmentConfig& config = {});

// Replaces the suggested span and marks it with a dictionary highlight.
// Throws Error(StaleSuggestion) and leaves the project untouched if the
// span no longer holds `current_text`.
void apply_suggestion(Project& project, const Suggestion& suggestion,
                      const EditStamp& stamp);

}  // namespace postedit
