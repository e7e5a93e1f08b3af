#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "postedit/model.hpp"
#include "postedit/text.hpp"

namespace postedit {

inline constexpr int kBundleFormatVersion = 1;

struct PageManifest {
  int index = 1;
  std::optional<std::string> source;         // page text
  std::optional<std::string> source_render;  // page image
  std::string target;
  // Optional per-sentence source boxes, in sentence order.
  std::vector<BoundingBox> source_boxes;
};

// manifest.json at the archive root.
struct BundleManifest {
  int format_version = kBundleFormatVersion;
  std::string id;
  std::string name;
  std::string source_lang;
  std::string target_lang;
  std::optional<std::int64_t> created_at_ms;
  std::vector<PageManifest> pages;
  std::vector<std::string> lexicons;
  std::vector<std::string> tm;
  std::vector<std::string> logs;
  std::optional<std::string> abbreviations;
  // Set on archives written by save_project: full editing state.
  std::optional<std::string> state;

  // Throws Error(MalformedManifest) or Error(UnsupportedVersion).
  static BundleManifest parse(std::string_view json_text);
  std::string to_json() const;
  // Every file path the manifest names.
  std::vector<std::string> referenced_files() const;
};

struct IngestOptions {
  // Used when the bundle carries no abbreviation list of its own.
  AbbreviationList abbreviations;
};

// Builds a fresh project from an MT bundle: page texts are split into
// sentences, segments get ids p{page}s{n} / p{page}t{n}, the n-th target
// sentence is linked to the n-th source sentence, and every page starts
// Unedited. Throws Error with MissingManifest, UnsupportedVersion,
// MissingReferencedFile, MalformedMatrix or CorruptArchive.
Project load_bundle(std::string_view zip_bytes, const IngestOptions& options = {});

// Deterministic archive of the whole project: stable key and file order,
// fixed archive timestamps.
std::string save_project(const Project& project);

// Restores an archive from save_project; plain MT bundles are ingested.
Project load_project(std::string_view zip_bytes, const IngestOptions& options = {});

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace postedit
