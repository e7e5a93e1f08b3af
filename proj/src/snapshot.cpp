#include "postedit/snapshot.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "postedit/bundle.hpp"
#include "postedit/error.hpp"

extern char** environ;

namespace postedit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view data) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string record_json(const Snapshot& s) {
  json j{{"id", s.id}, {"message", s.message}, {"timestamp", s.timestamp_ms}};
  if (s.parent) j["parent"] = *s.parent;
  return j.dump(2) + "\n";
}

Snapshot parse_record(const std::string& text) {
  try {
    auto j = json::parse(text);
    Snapshot s;
    s.id = j.at("id").get<std::string>();
    s.message = j.value("message", "");
    s.timestamp_ms = j.value("timestamp", std::int64_t{0});
    if (j.contains("parent")) s.parent = j["parent"].get<std::string>();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArchive, std::string("snapshot record: ") + e.what());
  }
}

fs::path object_path(const fs::path& root, const std::string& id) {
  return root / "objects" / (id + ".zip");
}
fs::path record_path(const fs::path& root, const std::string& id) {
  return root / "snapshots" / (id + ".json");
}

}  // namespace

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {}

Snapshot SnapshotStore::snapshot(const Project& project, const std::string& message,
                                 std::int64_t timestamp_ms) {
  const auto bytes = save_project(project);
  const auto id = sha256_hex(bytes);
  if (contains(id)) {
    set_head(id);
    return get(id);
  }
  Snapshot s{id, message, timestamp_ms, head()};
  write_file(object_path(root_, id), bytes);
  write_file(record_path(root_, id), record_json(s));
  set_head(id);
  return s;
}

std::optional<std::string> SnapshotStore::head() const {
  auto path = root_ / "HEAD";
  if (!fs::exists(path)) return std::nullopt;
  auto text = read_file(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  if (text.empty()) return std::nullopt;
  return text;
}

void SnapshotStore::set_head(const std::string& id) {
  if (!contains(id)) throw Error(ErrorCode::UnknownProject, "no snapshot " + id);
  write_file(root_ / "HEAD", id + "\n");
}

bool SnapshotStore::contains(const std::string& id) const {
  return fs::exists(record_path(root_, id)) && fs::exists(object_path(root_, id));
}

Snapshot SnapshotStore::get(const std::string& id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownProject, "no snapshot " + id);
  return parse_record(read_file(record_path(root_, id)));
}

std::string SnapshotStore::archive(const std::string& id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownProject, "no snapshot " + id);
  auto bytes = read_file(object_path(root_, id));
  if (sha256_hex(bytes) != id) throw Error(ErrorCode::CorruptArchive, "object " + id + " is damaged");
  return bytes;
}

Project SnapshotStore::checkout(const std::string& id) const { return load_project(archive(id)); }

std::vector<Snapshot> SnapshotStore::history() const {
  std::vector<Snapshot> out;
  std::set<std::string> seen;
  for (auto id = head(); id && contains(*id) && seen.insert(*id).second;) {
    out.push_back(get(*id));
    id = out.back().parent;
  }
  return out;
}

bool SnapshotStore::is_ancestor(const std::string& ancestor, const std::string& descendant) const {
  std::set<std::string> seen;
  std::optional<std::string> id = descendant;
  while (id && seen.insert(*id).second) {
    if (*id == ancestor) return true;
    if (!contains(*id)) return false;
    id = get(*id).parent;
  }
  return false;
}

std::size_t SnapshotStore::import_chain(const SnapshotStore& from, const std::string& id) {
  std::size_t copied = 0;
  std::optional<std::string> cur = id;
  while (cur && !contains(*cur)) {
    auto record = from.get(*cur);
    write_file(object_path(root_, *cur), from.archive(*cur));
    write_file(record_path(root_, *cur), record_json(record));
    ++copied;
    cur = record.parent;
  }
  return copied;
}

std::string_view to_string(SyncDirection direction) {
  return direction == SyncDirection::Push ? "push" : "pull";
}

std::string_view to_string(SyncStatus status) {
  return status == SyncStatus::UpToDate ? "up-to-date" : "fast-forward";
}

std::optional<SyncDirection> parse_direction(std::string_view name) {
  if (name == "push") return SyncDirection::Push;
  if (name == "pull") return SyncDirection::Pull;
  return std::nullopt;
}

// directory mirror

DirectoryMirror::DirectoryMirror(fs::path remote) : remote_(std::move(remote)) {}

SyncResult DirectoryMirror::push(SnapshotStore& local) {
  auto lh = local.head();
  if (!lh) return {SyncStatus::UpToDate, std::nullopt, 0};
  SnapshotStore remote(remote_);
  auto rh = remote.head();
  if (rh == lh) return {SyncStatus::UpToDate, lh, 0};
  if (rh && !local.is_ancestor(*rh, *lh))
    throw Error(ErrorCode::Conflict, "remote head " + *rh + " is not an ancestor of " + *lh);
  auto n = remote.import_chain(local, *lh);
  remote.set_head(*lh);
  return {SyncStatus::FastForward, lh, n};
}

SyncResult DirectoryMirror::pull(SnapshotStore& local) {
  if (!fs::is_directory(remote_))
    throw Error(ErrorCode::BackendUnavailable, "mirror " + remote_.string() + " does not exist");
  SnapshotStore remote(remote_);
  auto rh = remote.head();
  auto lh = local.head();
  if (!rh || rh == lh) return {SyncStatus::UpToDate, lh, 0};
  if (lh && !remote.is_ancestor(*lh, *rh)) {
    if (local.is_ancestor(*rh, *lh)) return {SyncStatus::UpToDate, lh, 0};
    throw Error(ErrorCode::Conflict, "local head " + *lh + " and remote head " + *rh + " diverge");
  }
  auto n = local.import_chain(remote, *rh);
  local.set_head(*rh);
  return {SyncStatus::FastForward, rh, n};
}

#ifdef POSTEDIT_WITH_GIT_SYNC

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

std::string git_program() {
  const char* env = std::getenv("POSTEDIT_GIT");
  return env && *env ? env : "git";
}

RunResult run(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  int fds[2];
  if (pipe(fds) != 0) throw Error(ErrorCode::IoError, "pipe failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  pid_t pid = 0;
  int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(fds[1]);
  RunResult result;
  if (rc != 0) {
    close(fds[0]);
    return result;
  }
  char buf[4096];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof buf)) > 0) result.out.append(buf, static_cast<std::size_t>(n));
  close(fds[0]);
  int wstatus = 0;
  waitpid(pid, &wstatus, 0);
  result.status = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  return result;
}

RunResult git(const fs::path& dir, std::vector<std::string> args) {
  std::vector<std::string> full{git_program(), "-C", dir.string(), "-c", "user.name=postedit",
                                "-c", "user.email=postedit@localhost", "-c",
                                "commit.gpgsign=false"};
  full.insert(full.end(), args.begin(), args.end());
  return run(std::move(full));
}

class TempDir {
 public:
  TempDir() {
    auto pattern = (fs::temp_directory_path() / "postedit-git-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw Error(ErrorCode::IoError, "mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Fresh work tree holding the remote's main branch (or nothing yet).
void checkout_remote(const fs::path& dir, const std::string& remote) {
  if (run({git_program(), "--version"}).status != 0)
    throw Error(ErrorCode::BackendUnavailable, "git is not available");
  auto heads = git(dir, {"ls-remote", "--heads", remote, "main"});
  if (heads.status != 0)
    throw Error(ErrorCode::BackendUnavailable, "cannot reach git remote " + remote);
  if (git(dir, {"init", "-q"}).status != 0)
    throw Error(ErrorCode::BackendUnavailable, "git init failed");
  git(dir, {"symbolic-ref", "HEAD", "refs/heads/main"});
  if (heads.out.empty()) return;
  if (git(dir, {"fetch", "-q", remote, "main"}).status != 0 ||
      git(dir, {"checkout", "-q", "-B", "main", "FETCH_HEAD"}).status != 0)
    throw Error(ErrorCode::BackendUnavailable, "cannot fetch from " + remote);
}

}  // namespace

GitBackend::GitBackend(std::string remote) : remote_(std::move(remote)) {
  // git runs inside a scratch directory, so local paths must be absolute
  std::error_code ec;
  if (fs::exists(remote_, ec)) remote_ = fs::absolute(remote_).string();
}

SyncResult GitBackend::push(SnapshotStore& local) {
  TempDir work;
  checkout_remote(work.path(), remote_);
  DirectoryMirror mirror(work.path());
  auto result = mirror.push(local);
  if (result.status == SyncStatus::UpToDate) return result;
  if (git(work.path(), {"add", "-A", "--", "HEAD", "objects", "snapshots"}).status != 0 ||
      git(work.path(), {"commit", "-q", "-m", "snapshot " + *result.head}).status != 0)
    throw Error(ErrorCode::IoError, "git commit failed");
  if (git(work.path(), {"push", "-q", remote_, "main:main"}).status != 0)
    throw Error(ErrorCode::Conflict, "git remote rejected the push");
  return result;
}

SyncResult GitBackend::pull(SnapshotStore& local) {
  TempDir work;
  checkout_remote(work.path(), remote_);
  DirectoryMirror mirror(work.path());
  return mirror.pull(local);
}

#endif

std::unique_ptr<SyncBackend> make_backend(std::string_view kind, const std::string& remote) {
  if (kind == "directory") return std::make_unique<DirectoryMirror>(remote);
#ifdef POSTEDIT_WITH_GIT_SYNC
  if (kind == "git") return std::make_unique<GitBackend>(remote);
#endif
  throw Error(ErrorCode::BackendUnavailable, "sync backend '" + std::string(kind) + "' is not available");
}

SyncResult sync(SyncBackend& backend, SnapshotStore& local, SyncDirection direction) {
  return direction == SyncDirection::Push ? backend.push(local) : backend.pull(local);
}

}  // namespace postedit
