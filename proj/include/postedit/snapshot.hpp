#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "postedit/model.hpp"

namespace postedit {

struct Snapshot {
  std::string id;  // sha256 of the saved archive
  std::string message;
  std::int64_t timestamp_ms = 0;
  std::optional<std::string> parent;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

// On-disk layout:
//   objects/<id>.zip     archive bytes from save_project
//   snapshots/<id>.json  {id, message, timestamp, parent}
//   HEAD
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Re-snapshotting a state already in the store just moves HEAD to it.
  Snapshot snapshot(const Project& project, const std::string& message, std::int64_t timestamp_ms);

  std::optional<std::string> head() const;
  void set_head(const std::string& id);
  bool contains(const std::string& id) const;
  // Throws Error(UnknownProject) for an unknown id.
  Snapshot get(const std::string& id) const;
  std::string archive(const std::string& id) const;
  Project checkout(const std::string& id) const;
  // HEAD first, following parents.
  std::vector<Snapshot> history() const;
  bool is_ancestor(const std::string& ancestor, const std::string& descendant) const;
  // Copies object + record for every snapshot reachable from `id` in `from`.
  std::size_t import_chain(const SnapshotStore& from, const std::string& id);

 private:
  std::filesystem::path root_;
};

enum class SyncDirection { Push, Pull };
enum class SyncStatus { UpToDate, FastForward };

struct SyncResult {
  SyncStatus status = SyncStatus::UpToDate;
  std::optional<std::string> head;
  std::size_t transferred = 0;
};

std::string_view to_string(SyncDirection direction);
std::string_view to_string(SyncStatus status);
std::optional<SyncDirection> parse_direction(std::string_view name);

class SyncBackend {
 public:
  virtual ~SyncBackend() = default;
  virtual std::string name() const = 0;
  // Both throw Error(Conflict) when the chains diverge; the local store is
  // left untouched in that case.
  virtual SyncResult push(SnapshotStore& local) = 0;
  virtual SyncResult pull(SnapshotStore& local) = 0;
};

// The remote is another snapshot store directory.
class DirectoryMirror : public SyncBackend {
 public:
  explicit DirectoryMirror(std::filesystem::path remote);
  std::string name() const override { return "directory"; }
  SyncResult push(SnapshotStore& local) override;
  SyncResult pull(SnapshotStore& local) override;

 private:
  std::filesystem::path remote_;
};

#ifdef POSTEDIT_WITH_GIT_SYNC
// Shells out to git. The remote repository holds a snapshot store on branch
// "main"; every push is one commit. Throws Error(BackendUnavailable) when git
// is missing or the remote cannot be reached.
class GitBackend : public SyncBackend {
 public:
  explicit GitBackend(std::string remote);
  std::string name() const override { return "git"; }
  SyncResult push(SnapshotStore& local) override;
  SyncResult pull(SnapshotStore& local) override;

 private:
  std::string remote_;
};
#endif

// kind is "directory" or "git".
std::unique_ptr<SyncBackend> make_backend(std::string_view kind, const std::string& remote);

SyncResult sync(SyncBackend& backend, SnapshotStore& local, SyncDirection direction);

}  // namespace postedit
