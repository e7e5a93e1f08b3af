#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "postedit/alignment.hpp"
#include "postedit/audit.hpp"
#include "postedit/lexicon.hpp"
#include "postedit/text.hpp"
#include "postedit/tm.hpp"

namespace postedit {

enum class PageStatus { Unedited, Edited, Verified, Proofread };
enum class Role { Corrector, Verifier, Proofreader };
enum class Provenance { GlobalReplacement, DictionaryReplacement, TmReplacement };

std::string_view to_string(PageStatus status);
std::string_view to_string(Role role);
std::string_view to_string(Provenance provenance);
std::optional<PageStatus> parse_page_status(std::string_view name);
std::optional<Role> parse_role(std::string_view name);
std::optional<Provenance> parse_provenance(std::string_view name);

// UI color for a provenance: yellow, green or blue.
std::string_view highlight_color(Provenance provenance);
// Style class shared by the HTML export and the web UI: global, dictionary, tm.
std::string_view css_class(Provenance provenance);

struct Highlight {
  TextSpan span;
  Provenance provenance = Provenance::GlobalReplacement;
  std::string rule_id;

  friend bool operator==(const Highlight&, const Highlight&) = default;
};

enum class SegmentKind { Text, Placeholder };

struct Segment {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::optional<std::string> origin_id;
  std::vector<Highlight> highlights;
  std::optional<BoundingBox> bbox;
  // Text at the last page save (or ingestion); edits are diffed against it.
  std::string baseline;
  // Placeholders stand in for images, equations and tables. They carry an
  // opaque label as text, have no tokens and cannot be edited.
  SegmentKind kind = SegmentKind::Text;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Page {
  int index = 1;
  std::optional<std::string> source_render;
  std::vector<Segment> source_segments;
  std::vector<Segment> target_segments;
  PageStatus status = PageStatus::Unedited;

  const Segment* find_source(std::string_view id) const;
  const Segment* find_target(std::string_view id) const;
  Segment* find_target(std::string_view id);

  friend bool operator==(const Page&, const Page&) = default;
};

struct Project {
  std::string id;
  std::string name;
  std::string source_lang;
  std::string target_lang;
  std::vector<Page> pages;
  std::vector<std::string> lexicon_names;
  std::uint64_t version = 1;
  std::int64_t created_at_ms = 0;

  std::map<std::string, Lexicon> lexicons;
  // Supplied similarity matrices keyed by source segment id.
  std::map<std::string, SimilarityMatrix> matrices;
  TranslationMemory tm;
  EventLog log;
  std::vector<EditRecord> edits;
  // Opaque bundle files carried through save/load (page renders).
  std::map<std::string, std::string> assets;

  // Throws Error(UnknownPage).
  Page& page(int index);
  const Page& page(int index) const;

  friend bool operator==(const Project&, const Project&) = default;
};

struct SegmentLocation {
  int page_index = 0;
  bool is_target = true;
  std::size_t position = 0;
};

// Searches every page. Throws Error(UnknownSegment).
SegmentLocation locate_segment(const Project& project, std::string_view segment_id);
Segment& segment_at(Project& project, const SegmentLocation& where);
const Segment& segment_at(const Project& project, const SegmentLocation& where);

// Builds a text segment with NFC text, tokens and baseline populated.
Segment make_segment(std::string id, std::string_view text, std::string_view lang,
                     std::optional<std::string> origin_id = std::nullopt);

// Rewrites a segment's text and re-tokenizes it. Highlights that overlap
// the changed region are dropped; those after it are shifted.
void rewrite_segment(Segment& segment, std::string new_text, std::string_view lang);

// Replaces a segment's text (NFC-normalized), logs a Manual edit, and
// bumps the version. Identical text still bumps the version but records
// no edit.
void set_segment_text(Project& project, int page_index, std::string_view segment_id,
                      std::string_view new_text, const EditStamp& stamp);

// Corrector: Unedited->Edited, Verifier: Edited->Verified,
// Proofreader: Verified->Proofread. Anything else is IllegalTransition.
void transition_status(Project& project, int page_index, Role role,
                       const EditStamp& stamp);

// Whether `role` may advance a page currently in `status`.
bool may_transition(PageStatus status, Role role);

using SentenceLink = std::pair<std::string, std::string>;  // (source id, target id)

// One pair per target segment with an origin, in target order.
std::vector<SentenceLink> sentence_links(const Page& page);

// Validates the structural invariants; throws Error(InvalidArgument)
// describing the first violation.
void check_invariants(const Project& project);

}  // namespace postedit
