#include "postedit/audit.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "postedit/error.hpp"

namespace postedit {

using nlohmann::json;

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::PageOpened, "PageOpened"},
    {EventKind::PageSaved, "PageSaved"},
    {EventKind::EditApplied, "EditApplied"},
    {EventKind::ReplacementApplied, "ReplacementApplied"},
    {EventKind::SuggestionApplied, "SuggestionApplied"},
    {EventKind::StatusChanged, "StatusChanged"},
    {EventKind::SessionStarted, "SessionStarted"},
    {EventKind::SessionEnded, "SessionEnded"},
};

constexpr std::pair<EditKind, std::string_view> kEditNames[] = {
    {EditKind::Manual, "Manual"},
    {EditKind::Global, "Global"},
    {EditKind::Dictionary, "Dictionary"},
    {EditKind::TM, "TM"},
};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (auto [k, name] : kEventNames)
    if (k == kind) return name;
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (auto [k, n] : kEventNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(EditKind kind) {
  for (auto [k, name] : kEditNames)
    if (k == kind) return name;
  return "Unknown";
}

std::optional<EditKind> parse_edit_kind(std::string_view name) {
  for (auto [k, n] : kEditNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string to_json_line(const LogEvent& event) {
  json j;
  j["kind"] = to_string(event.kind);
  j["page"] = event.page_index ? json(*event.page_index) : json(nullptr);
  j["author"] = event.author;
  j["ts"] = event.timestamp_ms;
  if (event.kind == EventKind::ReplacementApplied) {
    j["scope"] = event.scope;
    j["rule_id"] = event.rule_id;
    j["count"] = event.count;
  }
  if (event.kind == EventKind::StatusChanged) j["status"] = event.status;
  return j.dump();
}

LogEvent parse_json_line(std::string_view line) {
  try {
    auto j = json::parse(line);
    LogEvent event;
    auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::MalformedEvent, "unknown event kind");
    event.kind = *kind;
    if (j.contains("page") && !j["page"].is_null())
      event.page_index = j["page"].get<int>();
    event.author = j.at("author").get<std::string>();
    event.timestamp_ms = j.at("ts").get<std::int64_t>();
    if (event.kind == EventKind::ReplacementApplied) {
      event.scope = j.value("scope", "");
      event.rule_id = j.value("rule_id", "");
      event.count = j.value("count", std::int64_t{0});
    }
    if (event.kind == EventKind::StatusChanged)
      event.status = j.value("status", "");
    return event;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedEvent, e.what());
  }
}

void EventLog::record(LogEvent event) {
  if (event.timestamp_ms < 0)
    throw Error(ErrorCode::MalformedEvent, "negative timestamp");
  if (event.count < 0)
    throw Error(ErrorCode::MalformedEvent, "negative replacement count");
  if (event.page_index && *event.page_index < 1)
    throw Error(ErrorCode::MalformedEvent, "page index must be positive");
  auto it = last_timestamp_.find(event.author);
  if (it != last_timestamp_.end() && event.timestamp_ms < it->second)
    throw Error(ErrorCode::MalformedEvent,
                "timestamp goes backwards for author '" + event.author + "'");
  last_timestamp_[event.author] = event.timestamp_ms;
  events_.push_back(std::move(event));
}

std::string EventLog::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

EventLog EventLog::from_jsonl(std::string_view contents) {
  EventLog log;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.record(parse_json_line(line));
  }
  return log;
}

void EventLog::append_to_file(const std::string& path,
                              std::size_t already_written) const {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  for (std::size_t i = already_written; i < events_.size(); ++i)
    out << to_json_line(events_[i]) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

EventLog EventLog::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_jsonl(buffer.str());
}

std::int64_t page_time(const EventLog& log, int page_index,
                       std::int64_t idle_cap_ms) {
  if (idle_cap_ms <= 0)
    throw Error(ErrorCode::InvalidArgument, "idle cap must be positive");
  const auto& events = log.events();
  std::int64_t total = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& open = events[i];
    if (open.kind != EventKind::PageOpened || open.page_index != page_index)
      continue;
    for (std::size_t k = i + 1; k < events.size(); ++k) {
      if (events[k].author != open.author) continue;
      total += std::min(events[k].timestamp_ms - open.timestamp_ms, idle_cap_ms);
      break;
    }
  }
  return total;
}

std::vector<PageStats> summary(const EventLog& log, std::int64_t idle_cap_ms) {
  std::map<int, std::int64_t> edits;
  for (const auto& e : log.events()) {
    if (!e.page_index) continue;
    auto& count = edits[*e.page_index];
    switch (e.kind) {
      case EventKind::EditApplied:
      case EventKind::SuggestionApplied:
        ++count;
        break;
      case EventKind::ReplacementApplied:
        count += e.count;
        break;
      default:
        break;
    }
  }
  std::vector<PageStats> out;
  out.reserve(edits.size());
  for (auto [page, count] : edits)
    out.push_back({page, count, page_time(log, page, idle_cap_ms)});
  return out;
}

std::string to_json_line(const EditRecord& record) {
  json j;
  j["page"] = record.page_index;
  j["segment"] = record.segment_id;
  j["old"] = record.old_text;
  j["new"] = record.new_text;
  j["kind"] = to_string(record.kind);
  j["author"] = record.author;
  j["ts"] = record.timestamp_ms;
  return j.dump();
}

EditRecord parse_edit_record(std::string_view line) {
  try {
    auto j = json::parse(line);
    EditRecord r;
    r.page_index = j.at("page").get<int>();
    r.segment_id = j.at("segment").get<std::string>();
    r.old_text = j.at("old").get<std::string>();
    r.new_text = j.at("new").get<std::string>();
    auto kind = parse_edit_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::MalformedEvent, "unknown edit kind");
    r.kind = *kind;
    r.author = j.at("author").get<std::string>();
    r.timestamp_ms = j.at("ts").get<std::int64_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedEvent, e.what());
  }
}

EditStamp EditStamp::now(std::string author) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
  return {std::move(author), static_cast<std::int64_t>(ms)};
}

}  // namespace postedit
