#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace postedit {

enum class EventKind {
  PageOpened,
  PageSaved,
  EditApplied,
  ReplacementApplied,
  SuggestionApplied,
  StatusChanged,
  SessionStarted,
  SessionEnded,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct LogEvent {
  EventKind kind = EventKind::SessionStarted;
  std::optional<int> page_index;
  std::string author;
  std::int64_t timestamp_ms = 0;

  // ReplacementApplied payload.
  std::string scope;
  std::string rule_id;
  std::int64_t count = 0;
  // StatusChanged payload.
  std::string status;

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

// Serializes one event as a single-line JSON object.
std::string to_json_line(const LogEvent& event);
// Throws Error(MalformedEvent).
LogEvent parse_json_line(std::string_view line);

// Append-only event sequence. Rejects negative timestamps and timestamps
// earlier than the same author's previous event.
class EventLog {
 public:
  void record(LogEvent event);

  const std::vector<LogEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  std::string to_jsonl() const;
  static EventLog from_jsonl(std::string_view contents);

  // Appends every event past `already_written` to `path`.
  void append_to_file(const std::string& path, std::size_t already_written) const;
  static EventLog read_file(const std::string& path);

  friend bool operator==(const EventLog& a, const EventLog& b) {
    return a.events_ == b.events_;
  }

 private:
  std::vector<LogEvent> events_;
  std::map<std::string, std::int64_t> last_timestamp_;
};

inline constexpr std::int64_t kDefaultIdleCapMs = 10 * 60 * 1000;

// Active time on a page: every PageOpened(page) interval runs until the
// same author's next event of any kind, capped at `idle_cap_ms`. An
// interval with no following event contributes nothing.
std::int64_t page_time(const EventLog& log, int page_index,
                       std::int64_t idle_cap_ms = kDefaultIdleCapMs);

struct PageStats {
  int page_index = 0;
  std::int64_t edit_count = 0;
  std::int64_t active_time_ms = 0;

  friend bool operator==(const PageStats&, const PageStats&) = default;
};

// Per-page edit counts and active time, ordered by page index.
std::vector<PageStats> summary(const EventLog& log,
                               std::int64_t idle_cap_ms = kDefaultIdleCapMs);

enum class EditKind { Manual, Global, Dictionary, TM };

std::string_view to_string(EditKind kind);
std::optional<EditKind> parse_edit_kind(std::string_view name);

struct EditRecord {
  int page_index = 0;
  std::string segment_id;
  std::string old_text;
  std::string new_text;
  EditKind kind = EditKind::Manual;
  std::string author;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const EditRecord&, const EditRecord&) = default;
};

std::string to_json_line(const EditRecord& record);
EditRecord parse_edit_record(std::string_view line);

// Author and wall-clock time attached to every mutation.
struct EditStamp {
  std::string author;
  std::int64_t timestamp_ms = 0;

  static EditStamp now(std::string author);
};

}  // namespace postedit
