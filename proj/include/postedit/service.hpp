#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "postedit/alignment.hpp"
#include "postedit/audit.hpp"
#include "postedit/error.hpp"
#include "postedit/model.hpp"
#include "postedit/snapshot.hpp"
#include "postedit/text.hpp"

namespace postedit {

// Projects live in <root>/<id>/project.zip, snapshots in <root>/<id>/snapshots.
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Throws Error(Conflict) if the id is taken.
  std::string ingest(std::string_view bundle_zip, const AbbreviationList& abbreviations);
  bool exists(const std::string& id) const;
  std::vector<std::string> list() const;
  // Throws Error(UnknownProject).
  Project load(const std::string& id) const;
  void store(const Project& project) const;
  SnapshotStore snapshots(const std::string& id) const;
  // Pull refuses (Conflict) while the stored project differs from the local
  // head snapshot, and a fast-forward replaces the stored project with the
  // pulled state at the next version. The project may be absent before a pull.
  SyncResult sync_project(const std::string& id, SyncBackend& backend, SyncDirection direction) const;

 private:
  std::filesystem::path dir(const std::string& id) const;

  std::filesystem::path root_;
};

// Ids must be non-empty [A-Za-z0-9._-] and not start with '.'.
bool valid_project_id(std::string_view id);

struct Session {
  std::string author;
  Role role = Role::Corrector;
};

// {"<token>": {"author": "...", "role": "Corrector"}, ...}
std::map<std::string, Session> parse_token_table(std::string_view json_text);

struct ServiceConfig {
  std::filesystem::path workspace;
  AlignmentConfig alignment;
  std::int64_t idle_cap_ms = kDefaultIdleCapMs;
  AbbreviationList abbreviations;
  // Bearer token -> session. When empty, <workspace>/tokens.json is read.
  std::map<std::string, Session> tokens;
  // Milliseconds since the epoch; injectable for tests.
  std::function<std::int64_t()> clock;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Transport-independent JSON API. Writes to one project are serialized and
// each successful mutation bumps the project version exactly once.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Response handle(const Request& request);
  Workspace& workspace() { return workspace_; }

 private:
  struct Entry {
    std::mutex mutex;
    Project project;
  };
  struct Route;

  std::shared_ptr<Entry> entry(const std::string& id);

  ServiceConfig config_;
  Workspace workspace_;
  std::mutex entries_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
  std::mutex ingest_mutex_;
};

// HTTP/1.1 front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error(IoError).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// HTTP status used for an error code.
int http_status(ErrorCode code);

}  // namespace postedit
