#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>

#include "fixtures.hpp"
#include "postedit/bundle.hpp"
#include "postedit/editing.hpp"
#include "postedit/error.hpp"
#include "postedit/export.hpp"
#include "postedit/snapshot.hpp"
#include "postedit/zip.hpp"

using namespace postedit;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

const std::vector<fixtures::PageText> kPages = {{"One. Two.", "एक। दो।"}, {"Three.", "तीन।"}};

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "postedit-test-XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Zip, RoundTripAndCorruption) {
  std::vector<zip::Entry> entries = {{"a.txt", "hello"}, {"dir/b.bin", std::string(5000, 'x')}, {"empty", ""}};
  auto bytes = zip::write(entries);
  EXPECT_EQ(zip::read(bytes), entries);
  EXPECT_EQ(zip::write(entries), bytes);
  EXPECT_EQ(code_of([&] { zip::read("not a zip"); }), ErrorCode::CorruptArchive);
  auto broken = bytes;
  broken[40] ^= 0x5a;
  EXPECT_EQ(code_of([&] { zip::read(broken); }), ErrorCode::CorruptArchive);
}

TEST(Bundle, ManifestErrors) {
  auto files = fixtures::page_files(kPages);
  EXPECT_EQ(code_of([&] { load_bundle(fixtures::zip_files(files)); }), ErrorCode::MissingManifest);

  auto m = fixtures::manifest("x", kPages);
  m["format_version"] = 99;
  files["manifest.json"] = m.dump();
  EXPECT_EQ(code_of([&] { load_bundle(fixtures::zip_files(files)); }), ErrorCode::UnsupportedVersion);

  m = fixtures::manifest("x", kPages);
  m["lexicons"] = {"lexicons/missing.tsv"};
  files["manifest.json"] = m.dump();
  EXPECT_EQ(code_of([&] { load_bundle(fixtures::zip_files(files)); }), ErrorCode::MissingReferencedFile);

  files["manifest.json"] = "{";
  EXPECT_EQ(code_of([&] { load_bundle(fixtures::zip_files(files)); }), ErrorCode::MalformedManifest);

  m = fixtures::manifest("x", kPages);
  m["pages"][1]["index"] = 3;
  files["manifest.json"] = m.dump();
  EXPECT_EQ(code_of([&] { load_bundle(fixtures::zip_files(files)); }), ErrorCode::MalformedManifest);
}

TEST(Bundle, MatrixMustMatchTokens) {
  auto files = fixtures::page_files(kPages);
  files["manifest.json"] = fixtures::manifest("x", kPages).dump();
  files["alignments/p1s1.mat"] = "3 3\n1 0 0\n0 1 0\n0 0 1\n";
  EXPECT_EQ(code_of([&] { load_bundle(fixtures::zip_files(files)); }), ErrorCode::MalformedMatrix);
  files["alignments/p1s1.mat"] = "2 2\n1 0\n0 1\n";
  auto p = load_bundle(fixtures::zip_files(files));
  EXPECT_EQ(p.matrices.count("p1s1"), 1u);
}

TEST(Bundle, SaveLoadIsStable) {
  auto p = fixtures::simple_project("s", kPages);
  set_segment_text(p, 2, "p2t1", "तीन!", fixtures::at(10));
  save_page(p, 2, fixtures::at(11));
  auto bytes = save_project(p);
  auto back = load_project(bytes);
  EXPECT_EQ(back, p);
  EXPECT_EQ(save_project(back), bytes);
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Export, Formats) {
  auto p = fixtures::simple_project("e", kPages);
  apply({make_rule("तीन", "३ & <b>", Provenance::GlobalReplacement)}, ReplacementScope::AllPages, p, 1,
        fixtures::at(1));
  EXPECT_EQ(export_project(p, ExportFormat::PlainText), "एक।\nदो।\f३ & <b>।");
  auto html = export_project(p, ExportFormat::HTML);
  EXPECT_NE(html.find("<span class=\"global\""), std::string::npos);
  EXPECT_NE(html.find("३ &amp; &lt;b&gt;"), std::string::npos);
  EXPECT_NE(html.find("id=\"page-2\""), std::string::npos);
  auto tex = export_project(p, ExportFormat::LaTeX);
  EXPECT_NE(tex.find("\\globalrepl{"), std::string::npos);
  EXPECT_NE(tex.find("\\&"), std::string::npos);
  EXPECT_EQ(parse_export_format("tex"), ExportFormat::LaTeX);
  EXPECT_FALSE(parse_export_format("docx"));
}

TEST(Snapshots, HistoryAndDirectorySync) {
  TempDir a, b, remote;
  auto p = fixtures::simple_project("snap", kPages);
  SnapshotStore local(a.path);
  auto s1 = local.snapshot(p, "first", 1);
  set_segment_text(p, 1, "p1t1", "एक!", fixtures::at(2));
  auto s2 = local.snapshot(p, "second", 2);
  EXPECT_EQ(s2.parent, s1.id);
  EXPECT_EQ(local.history().size(), 2u);
  EXPECT_TRUE(local.is_ancestor(s1.id, s2.id));
  EXPECT_EQ(local.checkout(s2.id), p);
  EXPECT_EQ(local.snapshot(p, "again", 3).id, s2.id);

  DirectoryMirror mirror(remote.path);
  EXPECT_EQ(sync(mirror, local, SyncDirection::Push).status, SyncStatus::FastForward);
  EXPECT_EQ(sync(mirror, local, SyncDirection::Push).status, SyncStatus::UpToDate);

  SnapshotStore other(b.path);
  auto pulled = sync(mirror, other, SyncDirection::Pull);
  EXPECT_EQ(pulled.status, SyncStatus::FastForward);
  EXPECT_EQ(other.head(), s2.id);

  // diverge: both sides add a different child of s2
  set_segment_text(p, 1, "p1t1", "एक?", fixtures::at(3));
  local.snapshot(p, "local", 4);
  set_segment_text(p, 1, "p1t1", "एक.", fixtures::at(5));
  other.snapshot(p, "other", 5);
  sync(mirror, other, SyncDirection::Push);
  EXPECT_EQ(code_of([&] { sync(mirror, local, SyncDirection::Push); }), ErrorCode::Conflict);
  EXPECT_EQ(code_of([&] { sync(mirror, local, SyncDirection::Pull); }), ErrorCode::Conflict);

  DirectoryMirror missing(remote.path / "nope");
  EXPECT_EQ(code_of([&] { sync(missing, local, SyncDirection::Pull); }), ErrorCode::BackendUnavailable);
}

#ifdef POSTEDIT_WITH_GIT_SYNC
TEST(Snapshots, GitBackend) {
  if (std::system("git --version > /dev/null 2>&1") != 0) GTEST_SKIP() << "git not installed";
  TempDir a, b, bare;
  ASSERT_EQ(std::system(("git init -q --bare " + bare.path.string()).c_str()), 0);
  auto p = fixtures::simple_project("git", kPages);
  SnapshotStore local(a.path), other(b.path);
  auto s1 = local.snapshot(p, "first", 1);
  auto git = make_backend("git", bare.path.string());
  EXPECT_EQ(sync(*git, local, SyncDirection::Push).status, SyncStatus::FastForward);
  EXPECT_EQ(sync(*git, local, SyncDirection::Push).status, SyncStatus::UpToDate);
  EXPECT_EQ(sync(*git, other, SyncDirection::Pull).head, s1.id);
  EXPECT_EQ(other.checkout(s1.id), p);

  auto unreachable = make_backend("git", (bare.path / "missing").string());
  EXPECT_EQ(code_of([&] { sync(*unreachable, local, SyncDirection::Push); }), ErrorCode::BackendUnavailable);
}
#endif
