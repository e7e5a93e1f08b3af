#include <gtest/gtest.h>

#include "postedit/audit.hpp"
#include "postedit/error.hpp"

using namespace postedit;

namespace {

LogEvent ev(EventKind k, std::optional<int> page, const std::string& who, std::int64_t ms) {
  LogEvent e;
  e.kind = k;
  e.page_index = page;
  e.author = who;
  e.timestamp_ms = ms;
  return e;
}

}  // namespace

TEST(EventLog, RejectsBackwardsAndNegativeTime) {
  EventLog log;
  log.record(ev(EventKind::PageOpened, 1, "a", 100));
  EXPECT_THROW(log.record(ev(EventKind::PageSaved, 1, "a", 99)), Error);
  log.record(ev(EventKind::PageOpened, 1, "b", 50));  // other author, fine
  EXPECT_THROW(log.record(ev(EventKind::PageOpened, 1, "c", -1)), Error);
  EXPECT_EQ(log.size(), 2u);
}

TEST(EventLog, JsonlRoundTrip) {
  EventLog log;
  log.record(ev(EventKind::SessionStarted, std::nullopt, "a", 0));
  auto r = ev(EventKind::ReplacementApplied, 2, "a", 10);
  r.scope = "AllPages";
  r.rule_id = "g-1";
  r.count = 4;
  log.record(r);
  auto s = ev(EventKind::StatusChanged, 2, "a", 11);
  s.status = "Edited";
  log.record(s);
  EXPECT_EQ(EventLog::from_jsonl(log.to_jsonl()), log);
  EXPECT_THROW(parse_json_line("{\"kind\":\"Nope\",\"author\":\"a\",\"ts\":1}"), Error);
  EXPECT_THROW(parse_json_line("not json"), Error);
}

TEST(PageTime, IntervalsEndAtSameAuthorsNextEvent) {
  EventLog log;
  log.record(ev(EventKind::PageOpened, 1, "a", 0));
  log.record(ev(EventKind::PageOpened, 2, "b", 5000));  // does not close a's interval
  log.record(ev(EventKind::EditApplied, 1, "a", 30000));
  log.record(ev(EventKind::PageOpened, 3, "a", 40000));  // trailing, contributes nothing
  EXPECT_EQ(page_time(log, 1), 30000);
  EXPECT_EQ(page_time(log, 1, 10000), 10000);
  EXPECT_EQ(page_time(log, 2), 0);
  EXPECT_EQ(page_time(log, 3), 0);
}

TEST(Summary, CountsEditsPerPage) {
  EventLog log;
  log.record(ev(EventKind::PageOpened, 2, "a", 0));
  log.record(ev(EventKind::EditApplied, 2, "a", 1000));
  log.record(ev(EventKind::SuggestionApplied, 2, "a", 2000));
  auto r = ev(EventKind::ReplacementApplied, 1, "a", 3000);
  r.count = 7;
  log.record(r);
  auto got = summary(log);
  std::vector<PageStats> want = {{1, 7, 0}, {2, 2, 1000}};
  EXPECT_EQ(got, want);
}

TEST(EditRecord, RoundTrip) {
  EditRecord r{3, "p3t1", "old \"q\"", "नया", EditKind::Dictionary, "ravi", 42};
  EXPECT_EQ(parse_edit_record(to_json_line(r)), r);
  EXPECT_EQ(parse_edit_kind("TM"), EditKind::TM);
}
