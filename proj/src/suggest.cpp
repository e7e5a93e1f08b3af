#include "postedit/suggest.hpp"

#include <algorithm>

#include "postedit/error.hpp"

namespace postedit {

AlignmentLinkSet word_links(const Project& project, const Segment& source,
                            const Segment& target, const AlignmentConfig& config) {
  if (source.tokens.empty() || target.tokens.empty()) return {};
  auto it = project.matrices.find(source.id);
  if (it != project.matrices.end() && it->second.n_src() == source.tokens.size() &&
      it->second.n_tgt() == target.tokens.size())
    return decode(it->second, config);
  return decode(default_similarity(source.tokens, target.tokens), config);
}

std::vector<Suggestion> suggest(const Segment& source, const Segment& target,
                                const AlignmentLinkSet& links, const Lexicon& lexicon) {
  std::vector<Suggestion> out;
  for (const auto& match : find_matches(source.tokens, lexicon)) {
    auto projected = project_span(links, {match.range.begin, match.range.end});
    if (!projected || projected->second > target.tokens.size()) continue;
    TextSpan span{target.tokens[projected->first].span.start,
                  target.tokens[projected->second - 1].span.end};
    auto current = target.text.substr(span.start, span.size());
    auto folded = fold_case(trim(current));
    const auto& terms = match.entry->target_terms;
    bool satisfied = std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
      return fold_case(t) == folded;
    });
    if (satisfied) continue;
    out.push_back({target.id, span, std::move(current), terms.front(), *match.entry,
                   match.range, lexicon.name()});
  }
  return out;
}

std::vector<Suggestion> page_suggestions(const Project& project, int page_index,
                                         const AlignmentConfig& config) {
  const auto& page = project.page(page_index);
  std::vector<Suggestion> out;
  for (const auto& [source_id, target_id] : sentence_links(page)) {
    const auto* source = page.find_source(source_id);
    const auto* target = page.find_target(target_id);
    if (!source || !target) continue;
    if (source->tokens.empty() || target->tokens.empty()) continue;
    auto links = word_links(project, *source, *target, config);
    for (const auto& [name, lexicon] : project.lexicons) {
      auto found = suggest(*source, *target, links, lexicon);
      out.insert(out.end(), std::make_move_iterator(found.begin()),
                 std::make_move_iterator(found.end()));
    }
  }
  return out;
}

void apply_suggestion(Project& project, const Suggestion& suggestion,
                      const EditStamp& stamp) {
  SegmentLocation where;
  try {
    where = locate_segment(project, suggestion.segment_id);
  } catch (const Error&) {
    throw Error(ErrorCode::StaleSuggestion, "segment no longer exists");
  }
  auto& segment = segment_at(project, where);
  const auto& span = suggestion.target_span;
  if (span.end > segment.text.size() ||
      segment.text.compare(span.start, span.size(), suggestion.current_text) != 0)
    throw Error(ErrorCode::StaleSuggestion,
                "segment " + segment.id + " changed since the suggestion was computed");
  const auto proposed = nfc(suggestion.proposed_text);
  if (proposed == suggestion.current_text)
    throw Error(ErrorCode::StaleSuggestion, "suggestion is already satisfied");

  project.log.record({EventKind::SuggestionApplied, where.page_index, stamp.author,
                      stamp.timestamp_ms});

  std::string updated = segment.text.substr(0, span.start) + proposed +
                        segment.text.substr(span.end);
  rewrite_segment(segment, nfc(updated),
                  where.is_target ? project.target_lang : project.source_lang);
  // Drop anything the new text now touches, then mark it.
  TextSpan marked{span.start, span.start + proposed.size()};
  std::erase_if(segment.highlights,
                [&](const Highlight& h) { return h.span.overlaps(marked); });
  std::string rule_id = "dict:" + suggestion.lexicon + ":";
  for (std::size_t i = 0; i < suggestion.entry.source_term.size(); ++i) {
    if (i) rule_id += ' ';
    rule_id += suggestion.entry.source_term[i];
  }
  segment.highlights.push_back({marked, Provenance::DictionaryReplacement, rule_id});
  std::sort(segment.highlights.begin(), segment.highlights.end(),
            [](const Highlight& a, const Highlight& b) { return a.span < b.span; });

  project.edits.push_back({where.page_index, segment.id, suggestion.current_text, proposed,
                           EditKind::Dictionary, stamp.author, stamp.timestamp_ms});
  ++project.version;
}

}  // namespace postedit
