#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "postedit/error.hpp"
#include "postedit/model.hpp"

using namespace postedit;

namespace {

Project two_pages() {
  return fixtures::simple_project("m", {{"One. Two.", "एक। दो।"}, {"[[figure 2]] Three.", "[[figure 2]] तीन।"}});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Ingest, IdsLinksAndPlaceholders) {
  auto p = two_pages();
  ASSERT_EQ(p.pages.size(), 2u);
  const auto& p1 = p.page(1);
  ASSERT_EQ(p1.target_segments.size(), 2u);
  EXPECT_EQ(p1.target_segments[1].id, "p1t2");
  EXPECT_EQ(p1.target_segments[1].origin_id, "p1s2");
  EXPECT_EQ(sentence_links(p1), (std::vector<SentenceLink>{{"p1s1", "p1t1"}, {"p1s2", "p1t2"}}));
  const auto& p2 = p.page(2);
  ASSERT_EQ(p2.target_segments.size(), 2u);
  EXPECT_EQ(p2.target_segments[0].kind, SegmentKind::Placeholder);
  EXPECT_TRUE(p2.target_segments[0].tokens.empty());
  EXPECT_EQ(p.page(1).status, PageStatus::Unedited);
  check_invariants(p);
}

TEST(Edit, VersionAndEditRecord) {
  auto p = two_pages();
  auto v = p.version;
  set_segment_text(p, 1, "p1t1", "एक!", fixtures::at(1));
  EXPECT_EQ(p.version, v + 1);
  ASSERT_EQ(p.edits.size(), 1u);
  EXPECT_EQ(p.edits[0].old_text, "एक।");
  EXPECT_EQ(p.edits[0].kind, EditKind::Manual);
  set_segment_text(p, 1, "p1t1", "एक!", fixtures::at(2));
  EXPECT_EQ(p.version, v + 2);
  EXPECT_EQ(p.edits.size(), 1u);
}

TEST(Edit, Errors) {
  auto p = two_pages();
  EXPECT_EQ(code_of([&] { set_segment_text(p, 9, "p1t1", "x", fixtures::at(1)); }), ErrorCode::UnknownPage);
  EXPECT_EQ(code_of([&] { set_segment_text(p, 1, "p1t9", "x", fixtures::at(1)); }), ErrorCode::UnknownSegment);
  EXPECT_EQ(code_of([&] { set_segment_text(p, 2, "p2t1", "x", fixtures::at(1)); }),
            ErrorCode::PlaceholderSegment);
  EXPECT_EQ(code_of([&] { set_segment_text(p, 1, "p1t1", "\xFF", fixtures::at(1)); }), ErrorCode::InvalidText);
}

TEST(Edit, HighlightsShiftOrDrop) {
  Segment s = make_segment("t", "aa bb cc", "hi");
  s.highlights = {{{0, 2}, Provenance::GlobalReplacement, "r"}, {{6, 8}, Provenance::TmReplacement, "r2"}};
  rewrite_segment(s, "aa bbbb cc", "hi");
  ASSERT_EQ(s.highlights.size(), 2u);
  EXPECT_EQ(s.highlights[1].span, (TextSpan{8, 10}));
  rewrite_segment(s, "xx bbbb cc", "hi");
  ASSERT_EQ(s.highlights.size(), 1u);
  EXPECT_EQ(s.highlights[0].provenance, Provenance::TmReplacement);
}

TEST(Status, Workflow) {
  auto p = two_pages();
  EXPECT_EQ(code_of([&] { transition_status(p, 1, Role::Verifier, fixtures::at(1)); }),
            ErrorCode::IllegalTransition);
  transition_status(p, 1, Role::Corrector, fixtures::at(2));
  EXPECT_EQ(p.page(1).status, PageStatus::Edited);
  EXPECT_EQ(code_of([&] { transition_status(p, 1, Role::Corrector, fixtures::at(3)); }),
            ErrorCode::IllegalTransition);
  transition_status(p, 1, Role::Verifier, fixtures::at(4));
  transition_status(p, 1, Role::Proofreader, fixtures::at(5));
  EXPECT_EQ(p.page(1).status, PageStatus::Proofread);
  EXPECT_FALSE(may_transition(PageStatus::Proofread, Role::Proofreader));
  EXPECT_EQ(p.log.events().back().kind, EventKind::StatusChanged);
  EXPECT_EQ(p.log.events().back().status, "Proofread");
}

TEST(Names, RoundTrip) {
  for (auto s : {PageStatus::Unedited, PageStatus::Edited, PageStatus::Verified, PageStatus::Proofread})
    EXPECT_EQ(parse_page_status(to_string(s)), s);
  for (auto pr : {Provenance::GlobalReplacement, Provenance::DictionaryReplacement, Provenance::TmReplacement})
    EXPECT_EQ(parse_provenance(to_string(pr)), pr);
  EXPECT_EQ(highlight_color(Provenance::GlobalReplacement), "yellow");
  EXPECT_EQ(highlight_color(Provenance::DictionaryReplacement), "green");
  EXPECT_EQ(highlight_color(Provenance::TmReplacement), "blue");
  EXPECT_FALSE(parse_role("Admin"));
}
