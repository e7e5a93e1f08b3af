#include "postedit/model.hpp"

#include <algorithm>
#include <set>

#include "postedit/error.hpp"

namespace postedit {

namespace {

constexpr std::pair<PageStatus, std::string_view> kStatusNames[] = {
    {PageStatus::Unedited, "Unedited"},
    {PageStatus::Edited, "Edited"},
    {PageStatus::Verified, "Verified"},
    {PageStatus::Proofread, "Proofread"},
};

constexpr std::pair<Role, std::string_view> kRoleNames[] = {
    {Role::Corrector, "Corrector"},
    {Role::Verifier, "Verifier"},
    {Role::Proofreader, "Proofreader"},
};

constexpr std::pair<Provenance, std::string_view> kProvenanceNames[] = {
    {Provenance::GlobalReplacement, "GlobalReplacement"},
    {Provenance::DictionaryReplacement, "DictionaryReplacement"},
    {Provenance::TmReplacement, "TmReplacement"},
};

template <typename E, std::size_t N>
std::string_view name_of(const std::pair<E, std::string_view> (&table)[N], E value) {
  for (const auto& [v, name] : table)
    if (v == value) return name;
  return "Unknown";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const std::pair<E, std::string_view> (&table)[N],
                          std::string_view name) {
  for (const auto& [v, n] : table)
    if (n == name) return v;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(PageStatus status) { return name_of(kStatusNames, status); }
std::string_view to_string(Role role) { return name_of(kRoleNames, role); }
std::string_view to_string(Provenance p) { return name_of(kProvenanceNames, p); }
std::optional<PageStatus> parse_page_status(std::string_view name) {
  return value_of(kStatusNames, name);
}
std::optional<Role> parse_role(std::string_view name) { return value_of(kRoleNames, name); }
std::optional<Provenance> parse_provenance(std::string_view name) {
  return value_of(kProvenanceNames, name);
}

std::string_view highlight_color(Provenance provenance) {
  switch (provenance) {
    case Provenance::GlobalReplacement: return "yellow";
    case Provenance::DictionaryReplacement: return "green";
    case Provenance::TmReplacement: return "blue";
  }
  return "yellow";
}

std::string_view css_class(Provenance provenance) {
  switch (provenance) {
    case Provenance::GlobalReplacement: return "global";
    case Provenance::DictionaryReplacement: return "dictionary";
    case Provenance::TmReplacement: return "tm";
  }
  return "global";
}

const Segment* Page::find_source(std::string_view id) const {
  for (const auto& s : source_segments)
    if (s.id == id) return &s;
  return nullptr;
}

const Segment* Page::find_target(std::string_view id) const {
  for (const auto& s : target_segments)
    if (s.id == id) return &s;
  return nullptr;
}

Segment* Page::find_target(std::string_view id) {
  for (auto& s : target_segments)
    if (s.id == id) return &s;
  return nullptr;
}

Page& Project::page(int index) {
  return const_cast<Page&>(std::as_const(*this).page(index));
}

const Page& Project::page(int index) const {
  if (index < 1 || static_cast<std::size_t>(index) > pages.size())
    throw Error(ErrorCode::UnknownPage, "no page " + std::to_string(index));
  return pages[static_cast<std::size_t>(index - 1)];
}

SegmentLocation locate_segment(const Project& project, std::string_view segment_id) {
  for (const auto& page : project.pages) {
    for (std::size_t i = 0; i < page.target_segments.size(); ++i)
      if (page.target_segments[i].id == segment_id) return {page.index, true, i};
    for (std::size_t i = 0; i < page.source_segments.size(); ++i)
      if (page.source_segments[i].id == segment_id) return {page.index, false, i};
  }
  throw Error(ErrorCode::UnknownSegment, "no segment '" + std::string(segment_id) + "'");
}

Segment& segment_at(Project& project, const SegmentLocation& where) {
  auto& page = project.page(where.page_index);
  return where.is_target ? page.target_segments.at(where.position)
                         : page.source_segments.at(where.position);
}

const Segment& segment_at(const Project& project, const SegmentLocation& where) {
  const auto& page = project.page(where.page_index);
  return where.is_target ? page.target_segments.at(where.position)
                         : page.source_segments.at(where.position);
}

Segment make_segment(std::string id, std::string_view text, std::string_view lang,
                     std::optional<std::string> origin_id) {
  Segment s;
  s.id = std::move(id);
  s.text = nfc(text);
  s.tokens = tokenize(s.text, lang);
  s.origin_id = std::move(origin_id);
  s.baseline = s.text;
  return s;
}

void rewrite_segment(Segment& segment, std::string new_text, std::string_view lang) {
  const std::string& old_text = segment.text;
  std::size_t prefix = 0;
  const std::size_t limit = std::min(old_text.size(), new_text.size());
  while (prefix < limit && old_text[prefix] == new_text[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < limit - prefix &&
         old_text[old_text.size() - 1 - suffix] == new_text[new_text.size() - 1 - suffix])
    ++suffix;

  const std::size_t changed_end = old_text.size() - suffix;
  const auto delta = static_cast<std::ptrdiff_t>(new_text.size()) -
                     static_cast<std::ptrdiff_t>(old_text.size());
  std::vector<Highlight> kept;
  for (auto h : segment.highlights) {
    if (h.span.end <= prefix) {
      kept.push_back(std::move(h));
    } else if (h.span.start >= changed_end) {
      h.span.start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(h.span.start) + delta);
      h.span.end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(h.span.end) + delta);
      kept.push_back(std::move(h));
    }
  }
  segment.highlights = std::move(kept);
  segment.text = std::move(new_text);
  segment.tokens = segment.kind == SegmentKind::Placeholder
                       ? std::vector<Token>{}
                       : tokenize(segment.text, lang);
}

void set_segment_text(Project& project, int page_index, std::string_view segment_id,
                      std::string_view new_text, const EditStamp& stamp) {
  auto& page = project.page(page_index);
  Segment* segment = page.find_target(segment_id);
  bool is_target = segment != nullptr;
  if (!segment) {
    for (auto& s : page.source_segments)
      if (s.id == segment_id) segment = &s;
  }
  if (!segment)
    throw Error(ErrorCode::UnknownSegment,
                "no segment '" + std::string(segment_id) + "' on page " +
                    std::to_string(page_index));
  if (segment->kind == SegmentKind::Placeholder)
    throw Error(ErrorCode::PlaceholderSegment, "placeholder segments are not editable");

  auto normalized = nfc(new_text);
  if (normalized != segment->text) {
    project.log.record({EventKind::EditApplied, page_index, stamp.author, stamp.timestamp_ms});
    project.edits.push_back({page_index, segment->id, segment->text, normalized,
                             EditKind::Manual, stamp.author, stamp.timestamp_ms});
    rewrite_segment(*segment, std::move(normalized),
                    is_target ? project.target_lang : project.source_lang);
  }
  ++project.version;
}

bool may_transition(PageStatus status, Role role) {
  switch (role) {
    case Role::Corrector: return status == PageStatus::Unedited;
    case Role::Verifier: return status == PageStatus::Edited;
    case Role::Proofreader: return status == PageStatus::Verified;
  }
  return false;
}

void transition_status(Project& project, int page_index, Role role,
                       const EditStamp& stamp) {
  auto& page = project.page(page_index);
  if (!may_transition(page.status, role))
    throw Error(ErrorCode::IllegalTransition,
                std::string(to_string(role)) + " cannot advance a page that is " +
                    std::string(to_string(page.status)));
  auto next = static_cast<PageStatus>(static_cast<int>(page.status) + 1);
  LogEvent event{EventKind::StatusChanged, page_index, stamp.author, stamp.timestamp_ms};
  event.status = std::string(to_string(next));
  project.log.record(std::move(event));
  page.status = next;
  ++project.version;
}

std::vector<SentenceLink> sentence_links(const Page& page) {
  std::vector<SentenceLink> links;
  for (const auto& t : page.target_segments)
    if (t.origin_id) links.emplace_back(*t.origin_id, t.id);
  return links;
}

void check_invariants(const Project& project) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "invariant violated: " + what);
  };
  std::set<std::string> ids;
  for (std::size_t p = 0; p < project.pages.size(); ++p) {
    const auto& page = project.pages[p];
    if (page.index != static_cast<int>(p + 1))
      fail("page indices must be contiguous from 1");
    auto check_segment = [&](const Segment& s, std::string_view lang) {
      if (!ids.insert(s.id).second) fail("duplicate segment id " + s.id);
      if (s.kind == SegmentKind::Text && s.tokens != tokenize(s.text, lang))
        fail("stale tokens in " + s.id);
      if (s.kind == SegmentKind::Placeholder && !s.tokens.empty())
        fail("placeholder with tokens: " + s.id);
      if (s.bbox && !s.bbox->valid()) fail("bounding box out of range in " + s.id);
      std::vector<TextSpan> spans;
      for (const auto& h : s.highlights) {
        if (h.span.start > h.span.end || h.span.end > s.text.size())
          fail("highlight out of bounds in " + s.id);
        spans.push_back(h.span);
      }
      std::sort(spans.begin(), spans.end());
      for (std::size_t i = 1; i < spans.size(); ++i)
        if (spans[i - 1].overlaps(spans[i])) fail("overlapping highlights in " + s.id);
    };
    for (const auto& s : page.source_segments) check_segment(s, project.source_lang);
    for (const auto& s : page.target_segments) {
      check_segment(s, project.target_lang);
      if (s.origin_id && !page.find_source(*s.origin_id))
        fail("target " + s.id + " links to a source outside its page");
    }
  }
}

}  // namespace postedit
