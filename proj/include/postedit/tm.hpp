#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace postedit {

struct TmEntry {
  std::string old_fragment;
  std::string new_fragment;
  std::string source_project;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const TmEntry&, const TmEntry&) = default;
};

// Target-to-target fragment edits, unique on (old, new), in insertion order.
class TranslationMemory {
 public:
  // Returns false when the (old, new) pair is already present.
  bool add(TmEntry entry);
  bool contains(std::string_view old_fragment, std::string_view new_fragment) const;

  const std::vector<TmEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // TSV with header "old\tnew\tproject\ttimestamp". Tabs, newlines and
  // backslashes inside fields are written as \t, \n and \\.
  std::string to_tsv() const;
  // Throws MalformedLine.
  static TranslationMemory from_tsv(std::string_view contents);

  void export_file(const std::string& path) const;
  static TranslationMemory import_file(const std::string& path);

  friend bool operator==(const TranslationMemory&, const TranslationMemory&) = default;

 private:
  std::vector<TmEntry> entries_;
};

}  // namespace postedit
