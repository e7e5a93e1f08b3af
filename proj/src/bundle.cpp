#include "postedit/bundle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "postedit/error.hpp"
#include "postedit/zip.hpp"

namespace postedit {

using nlohmann::json;

namespace {

constexpr std::string_view kManifestName = "manifest.json";
constexpr std::string_view kStateName = "project.json";
constexpr std::string_view kAlignmentDir = "alignments/";
constexpr std::string_view kMatrixSuffix = ".mat";

using FileMap = std::map<std::string, std::string, std::less<>>;

FileMap read_archive(std::string_view zip_bytes) {
  FileMap files;
  for (auto& entry : zip::read(zip_bytes)) files[entry.name] = std::move(entry.data);
  return files;
}

const std::string& require_file(const FileMap& files, const std::string& name) {
  auto it = files.find(name);
  if (it == files.end())
    throw Error(ErrorCode::MissingReferencedFile, "bundle is missing " + name);
  return it->second;
}

std::string page_dir(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pages/%03d/", index);
  return buf;
}

std::string stem_of(std::string_view path) {
  auto slash = path.find_last_of('/');
  auto name = path.substr(slash == std::string_view::npos ? 0 : slash + 1);
  auto dot = name.rfind('.');
  return std::string(dot == std::string_view::npos ? name : name.substr(0, dot));
}

json box_to_json(const BoundingBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BoundingBox box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw Error(ErrorCode::MalformedManifest, "bounding box must be [x, y, w, h]");
  BoundingBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!b.valid()) throw Error(ErrorCode::MalformedManifest, "bounding box out of range");
  return b;
}

struct RawSegment {
  std::string text;
  bool placeholder = false;
};

// Page text -> sentences, with "[[...]]" runs kept whole as placeholders.
std::vector<RawSegment> segment_page(std::string_view raw, std::string_view lang,
                                     const AbbreviationList& abbreviations) {
  const std::string text = nfc(raw);
  std::vector<RawSegment> out;
  auto split_plain = [&](std::string_view chunk) {
    for (const auto& span : split_sentences(chunk, lang, abbreviations))
      out.push_back({std::string(chunk.substr(span.start, span.size())), false});
  };
  std::string_view view = text;
  std::size_t pos = 0;
  while (pos < view.size()) {
    auto open = view.find("[[", pos);
    auto close = open == std::string_view::npos ? open : view.find("]]", open + 2);
    if (close == std::string_view::npos) {
      split_plain(view.substr(pos));
      break;
    }
    split_plain(view.substr(pos, open - pos));
    out.push_back({std::string(view.substr(open, close + 2 - open)), true});
    pos = close + 2;
  }
  return out;
}

Segment build_segment(std::string id, const RawSegment& raw, std::string_view lang,
                      std::optional<std::string> origin) {
  if (!raw.placeholder) return make_segment(std::move(id), raw.text, lang, std::move(origin));
  Segment s;
  s.id = std::move(id);
  s.text = raw.text;
  s.baseline = raw.text;
  s.kind = SegmentKind::Placeholder;
  s.origin_id = std::move(origin);
  return s;
}

json segment_to_json(const Segment& s) {
  json j;
  j["id"] = s.id;
  j["text"] = s.text;
  j["baseline"] = s.baseline;
  j["kind"] = s.kind == SegmentKind::Placeholder ? "placeholder" : "text";
  if (s.origin_id) j["origin"] = *s.origin_id;
  if (s.bbox) j["bbox"] = box_to_json(*s.bbox);
  json highlights = json::array();
  for (const auto& h : s.highlights)
    highlights.push_back({{"start", h.span.start},
                          {"end", h.span.end},
                          {"provenance", to_string(h.provenance)},
                          {"rule", h.rule_id}});
  j["highlights"] = std::move(highlights);
  json token_boxes = json::object();
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    if (s.tokens[i].bbox) token_boxes[std::to_string(i)] = box_to_json(*s.tokens[i].bbox);
  if (!token_boxes.empty()) j["token_boxes"] = std::move(token_boxes);
  return j;
}

Segment segment_from_json(const json& j, std::string_view lang) {
  Segment s;
  s.id = j.at("id").get<std::string>();
  s.text = j.at("text").get<std::string>();
  if (!is_valid_utf8(s.text)) throw Error(ErrorCode::MalformedManifest, "segment text is not UTF-8");
  s.baseline = j.value("baseline", s.text);
  s.kind = j.value("kind", "text") == "placeholder" ? SegmentKind::Placeholder : SegmentKind::Text;
  if (s.kind == SegmentKind::Text) s.tokens = tokenize(s.text, lang);
  if (j.contains("origin")) s.origin_id = j["origin"].get<std::string>();
  if (j.contains("bbox")) s.bbox = box_from_json(j["bbox"]);
  for (const auto& h : j.value("highlights", json::array())) {
    auto provenance = parse_provenance(h.at("provenance").get<std::string>());
    if (!provenance) throw Error(ErrorCode::MalformedManifest, "unknown highlight provenance");
    s.highlights.push_back({{h.at("start").get<std::size_t>(), h.at("end").get<std::size_t>()},
                            *provenance,
                            h.value("rule", "")});
  }
  if (j.contains("token_boxes")) {
    for (const auto& [key, box] : j["token_boxes"].items()) {
      auto idx = std::stoul(key);
      if (idx >= s.tokens.size())
        throw Error(ErrorCode::MalformedManifest, "token box index out of range");
      s.tokens[idx].bbox = box_from_json(box);
    }
  }
  return s;
}

void load_shared_files(Project& project, const BundleManifest& manifest, const FileMap& files) {
  for (const auto& path : manifest.lexicons) {
    auto lexicon = Lexicon::parse(require_file(files, path), stem_of(path), project.source_lang,
                                  project.target_lang);
    project.lexicon_names.push_back(lexicon.name());
    project.lexicons.insert_or_assign(lexicon.name(), std::move(lexicon));
  }
  for (const auto& path : manifest.tm) {
    auto tm = TranslationMemory::from_tsv(require_file(files, path));
    for (const auto& entry : tm.entries()) project.tm.add(entry);
  }
  for (const auto& path : manifest.logs) {
    auto log = EventLog::from_jsonl(require_file(files, path));
    for (const auto& event : log.events()) project.log.record(event);
  }
}

std::map<std::string, SimilarityMatrix> load_matrices(const FileMap& files) {
  std::map<std::string, SimilarityMatrix> out;
  for (const auto& [name, data] : files) {
    if (!name.starts_with(kAlignmentDir) || !name.ends_with(kMatrixSuffix)) continue;
    auto id = name.substr(kAlignmentDir.size(),
                          name.size() - kAlignmentDir.size() - kMatrixSuffix.size());
    try {
      out.emplace(id, parse_matrix(data));
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedMatrix, name + ": " + e.what());
    }
  }
  return out;
}

BundleManifest read_manifest(const FileMap& files) {
  auto it = files.find(kManifestName);
  if (it == files.end()) throw Error(ErrorCode::MissingManifest, "bundle has no manifest.json");
  auto manifest = BundleManifest::parse(it->second);
  for (const auto& path : manifest.referenced_files()) require_file(files, path);
  return manifest;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Project ingest(const BundleManifest& manifest, const FileMap& files,
               const IngestOptions& options) {
  Project project;
  project.id = manifest.id;
  project.name = manifest.name;
  project.source_lang = manifest.source_lang;
  project.target_lang = manifest.target_lang;
  project.created_at_ms = manifest.created_at_ms.value_or(now_ms());

  AbbreviationList abbreviations =
      manifest.abbreviations ? AbbreviationList::parse(require_file(files, *manifest.abbreviations))
                             : options.abbreviations;

  auto pages = manifest.pages;
  std::sort(pages.begin(), pages.end(),
            [](const PageManifest& a, const PageManifest& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const auto& entry = pages[i];
    if (entry.index != static_cast<int>(i + 1))
      throw Error(ErrorCode::MalformedManifest, "page indices must be contiguous from 1");
    Page page;
    page.index = entry.index;
    page.source_render = entry.source_render;
    if (entry.source_render) project.assets[*entry.source_render] = files.at(*entry.source_render);

    std::vector<RawSegment> source_raw;
    if (entry.source) {
      const auto& text = require_file(files, *entry.source);
      if (!is_valid_utf8(text)) throw Error(ErrorCode::InvalidText, *entry.source + " is not UTF-8");
      source_raw = segment_page(text, project.source_lang, abbreviations);
    }
    const auto& target_text = require_file(files, entry.target);
    if (!is_valid_utf8(target_text))
      throw Error(ErrorCode::InvalidText, entry.target + " is not UTF-8");
    auto target_raw = segment_page(target_text, project.target_lang, abbreviations);

    const std::string prefix = "p" + std::to_string(page.index);
    for (std::size_t k = 0; k < source_raw.size(); ++k) {
      auto seg = build_segment(prefix + "s" + std::to_string(k + 1), source_raw[k],
                               project.source_lang, std::nullopt);
      if (k < entry.source_boxes.size()) seg.bbox = entry.source_boxes[k];
      page.source_segments.push_back(std::move(seg));
    }
    for (std::size_t k = 0; k < target_raw.size(); ++k) {
      std::optional<std::string> origin;
      if (k < page.source_segments.size()) origin = page.source_segments[k].id;
      page.target_segments.push_back(build_segment(prefix + "t" + std::to_string(k + 1),
                                                   target_raw[k], project.target_lang, origin));
    }
    project.pages.push_back(std::move(page));
  }

  load_shared_files(project, manifest, files);

  for (auto& [source_id, matrix] : load_matrices(files)) {
    const Segment* source = nullptr;
    const Segment* target = nullptr;
    for (const auto& page : project.pages) {
      if ((source = page.find_source(source_id))) {
        for (const auto& t : page.target_segments)
          if (t.origin_id == source_id) target = &t;
        break;
      }
    }
    if (!source || !target)
      throw Error(ErrorCode::MalformedMatrix,
                  "matrix for " + source_id + " has no matching sentence pair");
    if (matrix.n_src() != source->tokens.size() || matrix.n_tgt() != target->tokens.size())
      throw Error(ErrorCode::MalformedMatrix,
                  "matrix for " + source_id + " is " + std::to_string(matrix.n_src()) + "x" +
                      std::to_string(matrix.n_tgt()) + " but the pair has " +
                      std::to_string(source->tokens.size()) + "x" +
                      std::to_string(target->tokens.size()) + " tokens");
    project.matrices.emplace(source_id, std::move(matrix));
  }
  return project;
}

Project restore(const BundleManifest& manifest, const FileMap& files) {
  json state;
  try {
    state = json::parse(require_file(files, *manifest.state));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, std::string("project state: ") + e.what());
  }
  Project project;
  project.id = manifest.id;
  project.name = manifest.name;
  project.source_lang = manifest.source_lang;
  project.target_lang = manifest.target_lang;
  try {
    project.created_at_ms = state.at("created_at").get<std::int64_t>();
    project.version = state.at("version").get<std::uint64_t>();
    for (const auto& p : state.at("pages")) {
      Page page;
      page.index = p.at("index").get<int>();
      auto status = parse_page_status(p.at("status").get<std::string>());
      if (!status) throw Error(ErrorCode::MalformedManifest, "unknown page status");
      page.status = *status;
      if (p.contains("source_render")) page.source_render = p["source_render"].get<std::string>();
      for (const auto& s : p.at("source_segments"))
        page.source_segments.push_back(segment_from_json(s, project.source_lang));
      for (const auto& s : p.at("target_segments"))
        page.target_segments.push_back(segment_from_json(s, project.target_lang));
      project.pages.push_back(std::move(page));
    }
    for (const auto& path : state.value("assets", json::array())) {
      auto name = path.get<std::string>();
      project.assets[name] = require_file(files, name);
    }
    if (state.contains("edits")) {
      const auto& edits = require_file(files, state["edits"].get<std::string>());
      std::size_t pos = 0;
      while (pos < edits.size()) {
        auto nl = edits.find('\n', pos);
        if (nl == std::string::npos) nl = edits.size();
        if (nl > pos) project.edits.push_back(parse_edit_record(edits.substr(pos, nl - pos)));
        pos = nl + 1;
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, std::string("project state: ") + e.what());
  }

  load_shared_files(project, manifest, files);
  project.matrices = load_matrices(files);
  check_invariants(project);
  return project;
}

}  // namespace

BundleManifest BundleManifest::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what());
  }
  BundleManifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kBundleFormatVersion)
      throw Error(ErrorCode::UnsupportedVersion,
                  "bundle format " + std::to_string(m.format_version) + " is not supported");
    const auto& p = j.at("project");
    m.id = p.at("id").get<std::string>();
    m.name = p.value("name", m.id);
    m.source_lang = p.at("source_lang").get<std::string>();
    m.target_lang = p.at("target_lang").get<std::string>();
    if (p.contains("created_at")) m.created_at_ms = p["created_at"].get<std::int64_t>();
    for (const auto& page : j.at("pages")) {
      PageManifest pm;
      pm.index = page.at("index").get<int>();
      if (page.contains("source")) pm.source = page["source"].get<std::string>();
      if (page.contains("source_render")) pm.source_render = page["source_render"].get<std::string>();
      pm.target = page.at("target").get<std::string>();
      for (const auto& b : page.value("source_boxes", json::array()))
        pm.source_boxes.push_back(box_from_json(b));
      m.pages.push_back(std::move(pm));
    }
    if (j.contains("page_count") && j["page_count"].get<std::size_t>() != m.pages.size())
      throw Error(ErrorCode::MalformedManifest, "page_count does not match the page list");
    m.lexicons = j.value("lexicons", std::vector<std::string>{});
    m.tm = j.value("tm", std::vector<std::string>{});
    m.logs = j.value("logs", std::vector<std::string>{});
    if (j.contains("abbreviations")) m.abbreviations = j["abbreviations"].get<std::string>();
    if (j.contains("state")) m.state = j["state"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what());
  }
  if (m.id.empty()) throw Error(ErrorCode::MalformedManifest, "project id is empty");
  return m;
}

std::string BundleManifest::to_json() const {
  json j;
  j["format_version"] = format_version;
  json p{{"id", id}, {"name", name}, {"source_lang", source_lang}, {"target_lang", target_lang}};
  if (created_at_ms) p["created_at"] = *created_at_ms;
  j["project"] = std::move(p);
  j["page_count"] = pages.size();
  json page_list = json::array();
  for (const auto& pm : pages) {
    json e{{"index", pm.index}, {"target", pm.target}};
    if (pm.source) e["source"] = *pm.source;
    if (pm.source_render) e["source_render"] = *pm.source_render;
    if (!pm.source_boxes.empty()) {
      json boxes = json::array();
      for (const auto& b : pm.source_boxes) boxes.push_back(box_to_json(b));
      e["source_boxes"] = std::move(boxes);
    }
    page_list.push_back(std::move(e));
  }
  j["pages"] = std::move(page_list);
  j["lexicons"] = lexicons;
  j["tm"] = tm;
  j["logs"] = logs;
  if (abbreviations) j["abbreviations"] = *abbreviations;
  if (state) j["state"] = *state;
  return j.dump(2) + "\n";
}

std::vector<std::string> BundleManifest::referenced_files() const {
  std::vector<std::string> out;
  for (const auto& p : pages) {
    if (p.source) out.push_back(*p.source);
    if (p.source_render) out.push_back(*p.source_render);
    out.push_back(p.target);
  }
  out.insert(out.end(), lexicons.begin(), lexicons.end());
  out.insert(out.end(), tm.begin(), tm.end());
  out.insert(out.end(), logs.begin(), logs.end());
  if (abbreviations) out.push_back(*abbreviations);
  if (state) out.push_back(*state);
  return out;
}

Project load_bundle(std::string_view zip_bytes, const IngestOptions& options) {
  auto files = read_archive(zip_bytes);
  auto manifest = read_manifest(files);
  return ingest(manifest, files, options);
}

Project load_project(std::string_view zip_bytes, const IngestOptions& options) {
  auto files = read_archive(zip_bytes);
  auto manifest = read_manifest(files);
  return manifest.state ? restore(manifest, files) : ingest(manifest, files, options);
}

std::string save_project(const Project& project) {
  FileMap files;
  BundleManifest manifest;
  manifest.id = project.id;
  manifest.name = project.name;
  manifest.source_lang = project.source_lang;
  manifest.target_lang = project.target_lang;
  manifest.created_at_ms = project.created_at_ms;
  manifest.state = std::string(kStateName);

  json state;
  state["version"] = project.version;
  state["created_at"] = project.created_at_ms;
  json pages = json::array();
  for (const auto& page : project.pages) {
    const auto dir = page_dir(page.index);
    PageManifest pm;
    pm.index = page.index;
    pm.source_render = page.source_render;
    pm.target = dir + "target.txt";
    auto join = [](const std::vector<Segment>& segments) {
      std::string out;
      for (const auto& s : segments) out += s.text + "\n";
      return out;
    };
    files[pm.target] = join(page.target_segments);
    if (!page.source_segments.empty() || !page.source_render) {
      pm.source = dir + "source.txt";
      files[*pm.source] = join(page.source_segments);
    }
    manifest.pages.push_back(std::move(pm));

    json p;
    p["index"] = page.index;
    p["status"] = to_string(page.status);
    if (page.source_render) p["source_render"] = *page.source_render;
    json sources = json::array(), targets = json::array();
    for (const auto& s : page.source_segments) sources.push_back(segment_to_json(s));
    for (const auto& s : page.target_segments) targets.push_back(segment_to_json(s));
    p["source_segments"] = std::move(sources);
    p["target_segments"] = std::move(targets);
    pages.push_back(std::move(p));
  }
  state["pages"] = std::move(pages);

  json assets = json::array();
  for (const auto& [name, data] : project.assets) {
    files[name] = data;
    assets.push_back(name);
  }
  state["assets"] = std::move(assets);

  for (const auto& name : project.lexicon_names) {
    auto it = project.lexicons.find(name);
    if (it == project.lexicons.end()) continue;
    auto path = "lexicons/" + name + ".tsv";
    files[path] = it->second.to_tsv();
    manifest.lexicons.push_back(path);
  }
  if (!project.tm.empty()) {
    files["tm/project.tsv"] = project.tm.to_tsv();
    manifest.tm.push_back("tm/project.tsv");
  }
  if (!project.log.empty()) {
    files["logs/events.jsonl"] = project.log.to_jsonl();
    manifest.logs.push_back("logs/events.jsonl");
  }
  if (!project.edits.empty()) {
    std::string edits;
    for (const auto& r : project.edits) edits += to_json_line(r) + "\n";
    files["logs/edits.jsonl"] = std::move(edits);
    state["edits"] = "logs/edits.jsonl";
  }
  for (const auto& [id, matrix] : project.matrices)
    files[std::string(kAlignmentDir) + id + std::string(kMatrixSuffix)] = format_matrix(matrix);

  files[std::string(kStateName)] = state.dump(2) + "\n";
  files[std::string(kManifestName)] = manifest.to_json();

  std::vector<zip::Entry> entries;
  entries.reserve(files.size());
  for (auto& [name, data] : files) entries.push_back({name, data});
  return zip::write(entries);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace postedit
