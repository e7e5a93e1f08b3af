#include "postedit/editing.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include "postedit/error.hpp"

namespace postedit {

namespace {

std::string span_text(std::string_view text, const std::vector<Token>& tokens,
                      std::size_t begin, std::size_t end) {
  if (begin >= end) return {};
  auto start = tokens[begin].span.start;
  return std::string(text.substr(start, tokens[end - 1].span.end - start));
}

// Matched (old, new) token index pairs of one longest common subsequence.
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(const std::vector<Token>& a,
                                                           const std::vector<Token>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::uint32_t> suffix((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return suffix[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      at(i, j) = a[i].surface == b[j].surface ? at(i + 1, j + 1) + 1
                                              : std::max(at(i + 1, j), at(i, j + 1));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i].surface == b[j].surface) {
      pairs.emplace_back(i++, j++);
    } else if (at(i + 1, j) >= at(i, j + 1)) {
      ++i;
    } else {
      ++j;
    }
  }
  return pairs;
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 1469598103934665603ull) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return out;
}

bool matches_at(const std::vector<Token>& tokens, std::size_t p,
                const std::vector<std::string>& find) {
  if (p + find.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < find.size(); ++k)
    if (tokens[p + k].surface != find[k]) return false;
  return true;
}

// Occurrences of the rules in one segment, in text order.
std::vector<Occurrence> scan_segment(const Segment& segment,
                                     const std::vector<ReplacementRule>& rules) {
  std::vector<Occurrence> found;
  const auto& tokens = segment.tokens;
  std::size_t p = 0;
  while (p < tokens.size()) {
    const ReplacementRule* hit = nullptr;
    for (const auto& rule : rules) {
      if (matches_at(tokens, p, rule.find)) {
        hit = &rule;
        break;
      }
    }
    if (!hit) {
      ++p;
      continue;
    }
    TextSpan span{tokens[p].span.start, tokens[p + hit->find.size() - 1].span.end};
    auto before = segment.text.substr(span.start, span.size());
    if (before != hit->replace)
      found.push_back({segment.id, span, std::move(before), hit->replace, hit->rule_id});
    p += hit->find.size();
  }
  return found;
}

void validate_rules(const std::vector<ReplacementRule>& rules) {
  if (rules.empty()) throw Error(ErrorCode::InvalidArgument, "no replacement rules given");
  for (const auto& r : rules)
    if (r.find.empty())
      throw Error(ErrorCode::InvalidArgument, "rule " + r.rule_id + " has an empty find sequence");
}

}  // namespace

std::vector<DiffHunk> diff_segments(std::string_view old_text, std::string_view new_text,
                                    std::string_view lang) {
  auto old_tokens = tokenize(old_text, lang);
  auto new_tokens = tokenize(new_text, lang);
  auto pairs = lcs_pairs(old_tokens, new_tokens);

  const std::size_t n = old_tokens.size(), m = new_tokens.size();
  std::vector<DiffHunk> hunks;
  // Walk the gaps between consecutive matches, with sentinels at both ends.
  std::optional<std::pair<std::size_t, std::size_t>> prev;
  for (std::size_t k = 0; k <= pairs.size(); ++k) {
    std::size_t old_begin = prev ? prev->first + 1 : 0;
    std::size_t new_begin = prev ? prev->second + 1 : 0;
    std::size_t old_end = k < pairs.size() ? pairs[k].first : n;
    std::size_t new_end = k < pairs.size() ? pairs[k].second : m;

    if (old_begin < old_end || new_begin < new_end) {
      DiffHunk h;
      h.old_text = span_text(old_text, old_tokens, old_begin, old_end);
      h.new_text = span_text(new_text, new_tokens, new_begin, new_end);
      h.old_tokens = {old_begin, old_end};
      h.new_tokens = {new_begin, new_end};
      std::size_t region_start = prev ? old_tokens[prev->first].span.end : 0;
      std::size_t region_end = k < pairs.size() ? old_tokens[pairs[k].first].span.start
                                                : old_text.size();
      std::size_t repl_start = prev ? new_tokens[prev->second].span.end : 0;
      std::size_t repl_end = k < pairs.size() ? new_tokens[pairs[k].second].span.start
                                              : new_text.size();
      h.old_region = {region_start, region_end};
      h.replacement = std::string(new_text.substr(repl_start, repl_end - repl_start));
      hunks.push_back(std::move(h));
    }
    if (k < pairs.size()) prev = pairs[k];
  }
  return hunks;
}

std::string patch(std::string_view old_text, const std::vector<DiffHunk>& hunks) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& h : hunks) {
    if (h.old_region.start < cursor || h.old_region.end > old_text.size())
      throw Error(ErrorCode::InvalidArgument, "hunks out of order or out of range");
    out.append(old_text.substr(cursor, h.old_region.start - cursor));
    out.append(h.replacement);
    cursor = h.old_region.end;
  }
  out.append(old_text.substr(cursor));
  return out;
}

std::string_view to_string(ReplacementScope scope) {
  switch (scope) {
    case ReplacementScope::CurrentPage: return "CurrentPage";
    case ReplacementScope::UneditedPages: return "UneditedPages";
    case ReplacementScope::AllPages: return "AllPages";
  }
  return "AllPages";
}

std::optional<ReplacementScope> parse_scope(std::string_view name) {
  if (name == "CurrentPage") return ReplacementScope::CurrentPage;
  if (name == "UneditedPages") return ReplacementScope::UneditedPages;
  if (name == "AllPages") return ReplacementScope::AllPages;
  return std::nullopt;
}

ReplacementRule make_rule(std::string_view find, std::string_view replace,
                          Provenance provenance, std::string_view lang) {
  auto find_nfc = nfc(find);
  ReplacementRule rule;
  rule.find = token_surfaces(tokenize(find_nfc, lang));
  if (rule.find.empty())
    throw Error(ErrorCode::InvalidArgument, "replacement rule needs a non-empty find text");
  rule.replace = nfc(replace);
  rule.provenance = provenance;

  auto hash = fnv1a(to_string(provenance));
  for (const auto& t : rule.find) hash = fnv1a(t, fnv1a("\x1f", hash));
  hash = fnv1a(rule.replace, fnv1a("\x1e", hash));
  rule.rule_id = (provenance == Provenance::TmReplacement ? "tm-" : "g-") + hex64(hash);
  return rule;
}

std::vector<int> scope_pages(const Project& project, ReplacementScope scope,
                             int current_page) {
  if (scope != ReplacementScope::AllPages) project.page(current_page);
  std::vector<int> out;
  for (const auto& page : project.pages) {
    bool selected = false;
    switch (scope) {
      case ReplacementScope::CurrentPage:
        selected = page.index == current_page;
        break;
      case ReplacementScope::UneditedPages:
        selected = page.index == current_page || page.status == PageStatus::Unedited;
        break;
      case ReplacementScope::AllPages:
        selected = true;
        break;
    }
    if (selected) out.push_back(page.index);
  }
  return out;
}

PreviewReport preview(const std::vector<ReplacementRule>& rules, ReplacementScope scope,
                      const Project& project, int current_page) {
  validate_rules(rules);
  PreviewReport report;
  for (int index : scope_pages(project, scope, current_page)) {
    std::vector<Occurrence> page_hits;
    for (const auto& segment : project.page(index).target_segments) {
      auto hits = scan_segment(segment, rules);
      page_hits.insert(page_hits.end(), std::make_move_iterator(hits.begin()),
                       std::make_move_iterator(hits.end()));
    }
    if (page_hits.empty()) continue;
    report.total_count += page_hits.size();
    report.pages.emplace(index, std::move(page_hits));
  }
  return report;
}

std::size_t apply(const std::vector<ReplacementRule>& rules, ReplacementScope scope,
                  Project& project, int current_page, const EditStamp& stamp) {
  auto report = preview(rules, scope, project, current_page);

  std::map<std::string, const ReplacementRule*> by_id;
  for (const auto& r : rules) by_id.emplace(r.rule_id, &r);

  // Stage every rewritten segment first so a rejected log entry leaves
  // the project untouched.
  struct Staged {
    int page_index;
    std::size_t position;
    Segment segment;
  };
  std::vector<Staged> staged;
  std::vector<EditRecord> records;
  std::vector<LogEvent> events;

  for (const auto& [page_index, occurrences] : report.pages) {
    const auto& page = project.page(page_index);
    std::map<std::string, std::int64_t> per_rule;
    std::size_t k = 0;
    for (std::size_t pos = 0; pos < page.target_segments.size() && k < occurrences.size(); ++pos) {
      const auto& original = page.target_segments[pos];
      if (occurrences[k].segment_id != original.id) continue;

      std::string text;
      std::vector<Highlight> highlights;
      std::size_t cursor = 0;
      std::vector<TextSpan> replaced;
      std::vector<std::size_t> added_lengths;
      std::vector<Highlight> added;
      for (; k < occurrences.size() && occurrences[k].segment_id == original.id; ++k) {
        const auto& occ = occurrences[k];
        const auto* rule = by_id.at(occ.rule_id);
        text.append(original.text, cursor, occ.span.start - cursor);
        std::size_t new_start = text.size();
        text.append(occ.after_text);
        if (!occ.after_text.empty())
          added.push_back({{new_start, text.size()}, rule->provenance, rule->rule_id});
        replaced.push_back(occ.span);
        added_lengths.push_back(occ.after_text.size());
        cursor = occ.span.end;
        ++per_rule[occ.rule_id];
        records.push_back({page_index, original.id, occ.before_text, occ.after_text,
                           rule->provenance == Provenance::TmReplacement ? EditKind::TM
                                                                         : EditKind::Global,
                           stamp.author, stamp.timestamp_ms});
      }
      text.append(original.text, cursor, std::string::npos);

      // Keep untouched highlights, shifted by the length change before them.
      for (const auto& h : original.highlights) {
        bool touched = std::any_of(replaced.begin(), replaced.end(),
                                   [&](const TextSpan& r) { return h.span.overlaps(r); });
        if (touched) continue;
        std::ptrdiff_t delta = 0;
        for (std::size_t r = 0; r < replaced.size(); ++r) {
          if (replaced[r].end <= h.span.start)
            delta += static_cast<std::ptrdiff_t>(added_lengths[r]) -
                     static_cast<std::ptrdiff_t>(replaced[r].size());
        }
        Highlight moved = h;
        moved.span.start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(h.span.start) + delta);
        moved.span.end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(h.span.end) + delta);
        highlights.push_back(std::move(moved));
      }
      highlights.insert(highlights.end(), added.begin(), added.end());
      std::sort(highlights.begin(), highlights.end(),
                [](const Highlight& a, const Highlight& b) { return a.span < b.span; });

      Segment updated = original;
      updated.text = std::move(text);
      updated.tokens = tokenize(updated.text, project.target_lang);
      updated.highlights = std::move(highlights);
      staged.push_back({page_index, pos, std::move(updated)});
    }
    for (const auto& [rule_id, count] : per_rule) {
      LogEvent e{EventKind::ReplacementApplied, page_index, stamp.author, stamp.timestamp_ms};
      e.scope = std::string(to_string(scope));
      e.rule_id = rule_id;
      e.count = count;
      events.push_back(std::move(e));
    }
  }

  EventLog log = project.log;
  for (auto& e : events) log.record(std::move(e));

  project.log = std::move(log);
  for (auto& s : staged)
    project.page(s.page_index).target_segments[s.position] = std::move(s.segment);
  project.edits.insert(project.edits.end(), records.begin(), records.end());
  ++project.version;
  return report.total_count;
}

std::vector<ReplacementRule> collect_page_edits(const Project& project, int page_index) {
  const auto& page = project.page(page_index);
  std::vector<ReplacementRule> rules;
  for (const auto& segment : page.target_segments) {
    if (segment.kind != SegmentKind::Text || segment.baseline == segment.text) continue;
    for (const auto& hunk : diff_segments(segment.baseline, segment.text, project.target_lang)) {
      if (hunk.old_text.empty()) continue;
      auto rule = make_rule(hunk.old_text, hunk.new_text, Provenance::GlobalReplacement,
                            project.target_lang);
      if (std::find(rules.begin(), rules.end(), rule) == rules.end())
        rules.push_back(std::move(rule));
    }
  }
  return rules;
}

std::vector<ReplacementRule> save_page(Project& project, int page_index,
                                       const EditStamp& stamp) {
  auto rules = collect_page_edits(project, page_index);
  project.log.record({EventKind::PageSaved, page_index, stamp.author, stamp.timestamp_ms});
  auto& page = project.page(page_index);
  for (auto& segment : page.target_segments) {
    if (segment.baseline == segment.text) continue;
    record_tm(project.tm, diff_segments(segment.baseline, segment.text, project.target_lang),
              project.id, stamp.timestamp_ms);
    segment.baseline = segment.text;
  }
  ++project.version;
  return rules;
}

std::size_t record_tm(TranslationMemory& tm, const std::vector<DiffHunk>& edits,
                      std::string_view source_project, std::int64_t timestamp_ms) {
  std::size_t added = 0;
  for (const auto& h : edits) {
    if (h.old_text.empty()) continue;
    if (tm.add({h.old_text, h.new_text, std::string(source_project), timestamp_ms})) ++added;
  }
  return added;
}

std::size_t apply_tm(const TranslationMemory& tm, Project& project, const EditStamp& stamp) {
  if (tm.empty() || project.pages.empty()) return 0;
  std::vector<ReplacementRule> rules;
  for (const auto& e : tm.entries()) {
    auto rule = make_rule(e.old_fragment, e.new_fragment, Provenance::TmReplacement,
                          project.target_lang);
    if (std::find(rules.begin(), rules.end(), rule) == rules.end())
      rules.push_back(std::move(rule));
  }
  return apply(rules, ReplacementScope::AllPages, project, 1, stamp);
}

}  // namespace postedit
