#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "postedit/audit.hpp"
#include "postedit/bundle.hpp"
#include "postedit/model.hpp"
#include "postedit/zip.hpp"

namespace fixtures {

using Files = std::map<std::string, std::string>;

inline std::string zip_files(const Files& files) {
  std::vector<postedit::zip::Entry> entries;
  for (const auto& [name, data] : files) entries.push_back({name, data});
  return postedit::zip::write(entries);
}

struct PageText {
  std::string source;
  std::string target;
};

inline nlohmann::json manifest(const std::string& id, const std::vector<PageText>& pages,
                               const std::string& src = "en", const std::string& tgt = "hi") {
  nlohmann::json m;
  m["format_version"] = 1;
  m["project"] = {{"id", id}, {"name", id}, {"source_lang", src}, {"target_lang", tgt},
                  {"created_at", 1700000000000}};
  m["page_count"] = pages.size();
  m["pages"] = nlohmann::json::array();
  for (std::size_t i = 0; i < pages.size(); ++i) {
    char dir[32];
    std::snprintf(dir, sizeof dir, "pages/%03zu/", i + 1);
    m["pages"].push_back({{"index", i + 1},
                          {"source", std::string(dir) + "source.txt"},
                          {"target", std::string(dir) + "target.txt"}});
  }
  m["lexicons"] = nlohmann::json::array();
  return m;
}

inline Files page_files(const std::vector<PageText>& pages) {
  Files files;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    char dir[32];
    std::snprintf(dir, sizeof dir, "pages/%03zu/", i + 1);
    files[std::string(dir) + "source.txt"] = pages[i].source;
    files[std::string(dir) + "target.txt"] = pages[i].target;
  }
  return files;
}

// Bundle with only page texts.
inline std::string simple_bundle(const std::string& id, const std::vector<PageText>& pages) {
  auto files = page_files(pages);
  files["manifest.json"] = manifest(id, pages).dump();
  return zip_files(files);
}

inline postedit::Project simple_project(const std::string& id, const std::vector<PageText>& pages) {
  return postedit::load_bundle(simple_bundle(id, pages));
}

inline postedit::EditStamp at(std::int64_t ms, const std::string& author = "asha") {
  return {author, ms};
}

inline std::vector<std::string> target_texts(const postedit::Project& p) {
  std::vector<std::string> out;
  for (const auto& page : p.pages)
    for (const auto& s : page.target_segments) out.push_back(s.text);
  return out;
}

}  // namespace fixtures
