#include "postedit/tm.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "postedit/error.hpp"
#include "postedit/text.hpp"

namespace postedit {

namespace {

constexpr std::string_view kHeader = "old\tnew\tproject\ttimestamp";

std::string escape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view field, std::size_t line) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out += field[i];
      continue;
    }
    if (++i == field.size()) throw MalformedLine(line, "dangling escape");
    switch (field[i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default: throw MalformedLine(line, "unknown escape sequence");
    }
  }
  return out;
}

}  // namespace

bool TranslationMemory::add(TmEntry entry) {
  if (contains(entry.old_fragment, entry.new_fragment)) return false;
  entries_.push_back(std::move(entry));
  return true;
}

bool TranslationMemory::contains(std::string_view old_fragment,
                                 std::string_view new_fragment) const {
  for (const auto& e : entries_)
    if (e.old_fragment == old_fragment && e.new_fragment == new_fragment) return true;
  return false;
}

std::string TranslationMemory::to_tsv() const {
  std::string out(kHeader);
  out += '\n';
  for (const auto& e : entries_) {
    out += escape(e.old_fragment) + '\t' + escape(e.new_fragment) + '\t' +
           escape(e.source_project) + '\t' + std::to_string(e.timestamp_ms) + '\n';
  }
  return out;
}

TranslationMemory TranslationMemory::from_tsv(std::string_view contents) {
  TranslationMemory tm;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line == kHeader) continue;
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) throw MalformedLine(line_no, "expected 4 tab-separated columns");

    std::int64_t ts = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), ts);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size())
      throw MalformedLine(line_no, "timestamp is not an integer");

    TmEntry entry{unescape(fields[0], line_no), unescape(fields[1], line_no),
                  unescape(fields[2], line_no), ts};
    if (!is_valid_utf8(entry.old_fragment) || !is_valid_utf8(entry.new_fragment))
      throw MalformedLine(line_no, "invalid UTF-8");
    if (entry.old_fragment.empty()) throw MalformedLine(line_no, "empty old fragment");
    tm.add(std::move(entry));
  }
  return tm;
}

void TranslationMemory::export_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out << to_tsv();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

TranslationMemory TranslationMemory::import_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_tsv(buffer.str());
}

}  // namespace postedit
