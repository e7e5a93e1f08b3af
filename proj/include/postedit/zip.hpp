#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace postedit::zip {

struct Entry {
  std::string name;
  std::string data;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Writes a zip archive with entries in the given order. Every entry gets
// the same fixed DOS timestamp (1980-01-01 00:00) so identical inputs give
// identical bytes. Entries are deflated unless that would not save space.
std::string write(const std::vector<Entry>& entries);

// Reads stored and deflated entries through the central directory and
// verifies their CRCs. Throws Error(CorruptArchive).
std::vector<Entry> read(std::string_view archive);

}  // namespace postedit::zip
