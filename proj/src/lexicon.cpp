#include "postedit/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "postedit/error.hpp"

namespace postedit {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::string folded_key(const std::vector<std::string>& tokens) {
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key += '\x1f';
    key += fold_case(t);
  }
  return key;
}

}  // namespace

Lexicon::Lexicon(std::string name, std::string source_lang,
                 std::string target_lang, std::vector<LexiconEntry> entries)
    : name_(std::move(name)),
      source_lang_(std::move(source_lang)),
      target_lang_(std::move(target_lang)),
      entries_(std::move(entries)) {
  for (const auto& e : entries_)
    if (e.source_term.empty() || e.target_terms.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "lexicon entries need a source term and a target term");
  build_index();
}

void Lexicon::build_index() {
  index_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    index_[fold_case(entries_[i].source_term.front())].push_back(i);
  for (auto& [key, ids] : index_)
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return entries_[a].source_term.size() > entries_[b].source_term.size();
    });
}

const std::vector<std::size_t>& Lexicon::candidates(
    const std::string& folded_first) const {
  static const std::vector<std::size_t> none;
  auto it = index_.find(folded_first);
  return it == index_.end() ? none : it->second;
}

Lexicon Lexicon::parse(std::string_view contents, std::string name,
                       std::string source_lang, std::string target_lang) {
  std::vector<LexiconEntry> entries;
  std::map<std::string, std::size_t> by_source;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view raw = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty() || trim(raw).front() == '#') continue;

    if (!is_valid_utf8(raw)) throw MalformedLine(line_no, "invalid UTF-8");
    auto columns = split(raw, '\t');
    if (columns.size() < 2 || columns.size() > 3)
      throw MalformedLine(line_no, "expected 2 or 3 tab-separated columns");

    auto source_text = nfc(trim(columns[0]));
    auto source_tokens = token_surfaces(tokenize(source_text, source_lang));
    if (source_tokens.empty()) throw MalformedLine(line_no, "empty source term");

    std::vector<std::string> targets;
    for (auto alt : split(columns[1], '|')) {
      auto t = nfc(trim(alt));
      if (!t.empty() && std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(std::move(t));
    }
    if (targets.empty()) throw MalformedLine(line_no, "empty target term");
    std::string domain = columns.size() == 3 ? std::string(trim(columns[2])) : "";

    auto key = folded_key(source_tokens);
    auto found = by_source.find(key);
    if (found == by_source.end()) {
      by_source.emplace(key, entries.size());
      entries.push_back({std::move(source_tokens), std::move(targets), std::move(domain)});
    } else {
      auto& merged = entries[found->second].target_terms;
      for (auto& t : targets)
        if (std::find(merged.begin(), merged.end(), t) == merged.end())
          merged.push_back(std::move(t));
    }
  }
  if (entries.empty())
    throw Error(ErrorCode::EmptyLexicon, "lexicon '" + name + "' has no entries");
  return Lexicon(std::move(name), std::move(source_lang), std::move(target_lang),
                 std::move(entries));
}

Lexicon Lexicon::load(const std::string& path, std::string source_lang,
                      std::string target_lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto stem = path.substr(path.find_last_of('/') + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.resize(dot);
  return parse(buffer.str(), stem, std::move(source_lang), std::move(target_lang));
}

std::string Lexicon::to_tsv() const {
  std::string out;
  for (const auto& e : entries_) {
    for (std::size_t i = 0; i < e.source_term.size(); ++i) {
      if (i) out += ' ';
      out += e.source_term[i];
    }
    out += '\t';
    for (std::size_t i = 0; i < e.target_terms.size(); ++i) {
      if (i) out += '|';
      out += e.target_terms[i];
    }
    if (!e.domain.empty()) {
      out += '\t';
      out += e.domain;
    }
    out += '\n';
  }
  return out;
}

std::vector<LexiconMatch> find_matches(const std::vector<Token>& tokens,
                                       const Lexicon& lexicon) {
  std::vector<std::string> folded;
  folded.reserve(tokens.size());
  for (const auto& t : tokens) folded.push_back(fold_case(t.surface));

  std::vector<LexiconMatch> matches;
  std::size_t p = 0;
  while (p < tokens.size()) {
    const LexiconEntry* hit = nullptr;
    for (auto id : lexicon.candidates(folded[p])) {
      const auto& entry = lexicon.entries()[id];
      const auto n = entry.source_term.size();
      if (p + n > tokens.size()) continue;
      bool equal = true;
      for (std::size_t k = 1; k < n && equal; ++k)
        equal = fold_case(entry.source_term[k]) == folded[p + k];
      if (equal) {
        hit = &entry;
        break;
      }
    }
    if (hit) {
      matches.push_back({{p, p + hit->source_term.size()}, hit});
      p += hit->source_term.size();
    } else {
      ++p;
    }
  }
  return matches;
}

}  // namespace postedit
