#include "postedit/service.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "postedit/bundle.hpp"
#include "postedit/editing.hpp"
#include "postedit/export.hpp"
#include "postedit/suggest.hpp"
#include "postedit/tm.hpp"

namespace postedit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, std::string_view data) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

// workspace

bool valid_project_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

Workspace::Workspace(fs::path root) : root_(std::move(root)) {}

fs::path Workspace::dir(const std::string& id) const {
  if (!valid_project_id(id)) throw Error(ErrorCode::UnknownProject, "invalid project id '" + id + "'");
  return root_ / id;
}

std::string Workspace::ingest(std::string_view bundle_zip, const AbbreviationList& abbreviations) {
  auto project = load_bundle(bundle_zip, {abbreviations});
  if (!valid_project_id(project.id))
    throw Error(ErrorCode::MalformedManifest, "project id '" + project.id + "' is not usable");
  if (exists(project.id)) throw Error(ErrorCode::Conflict, "project " + project.id + " already exists");
  store(project);
  return project.id;
}

bool Workspace::exists(const std::string& id) const {
  return valid_project_id(id) && fs::exists(root_ / id / "project.zip");
}

std::vector<std::string> Workspace::list() const {
  std::vector<std::string> out;
  if (!fs::is_directory(root_)) return out;
  for (const auto& e : fs::directory_iterator(root_)) {
    auto id = e.path().filename().string();
    if (e.is_directory() && exists(id)) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Project Workspace::load(const std::string& id) const {
  if (!exists(id)) throw Error(ErrorCode::UnknownProject, "no project " + id);
  return load_project(slurp(dir(id) / "project.zip"));
}

void Workspace::store(const Project& project) const {
  write_atomic(dir(project.id) / "project.zip", save_project(project));
}

SnapshotStore Workspace::snapshots(const std::string& id) const {
  return SnapshotStore(dir(id) / "snapshots");
}

SyncResult Workspace::sync_project(const std::string& id, SyncBackend& backend,
                                   SyncDirection direction) const {
  auto snaps = snapshots(id);
  if (direction == SyncDirection::Push) return sync(backend, snaps, direction);
  std::optional<Project> current;
  if (exists(id)) current = load(id);
  if (auto lh = snaps.head(); lh && current) {
    auto committed = snaps.checkout(*lh);
    auto probe = *current;
    probe.version = committed.version;
    if (!(probe == committed))
      throw Error(ErrorCode::Conflict, "project has changes since the last snapshot");
  }
  auto result = sync(backend, snaps, direction);
  if (result.status == SyncStatus::FastForward) {
    auto pulled = snaps.checkout(*result.head);
    if (pulled.id != id) throw Error(ErrorCode::Conflict, "remote holds project " + pulled.id);
    if (current) pulled.version = current->version + 1;
    store(pulled);
  }
  return result;
}

std::map<std::string, Session> parse_token_table(std::string_view json_text) {
  std::map<std::string, Session> out;
  try {
    auto j = json::parse(json_text);
    for (const auto& [token, v] : j.items()) {
      auto role = parse_role(v.at("role").get<std::string>());
      if (!role) throw Error(ErrorCode::InvalidArgument, "unknown role for token " + token);
      out[token] = {v.at("author").get<std::string>(), *role};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("token table: ") + e.what());
  }
  return out;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPage:
    case ErrorCode::UnknownSegment:
    case ErrorCode::UnknownProject:
      return 404;
    case ErrorCode::IllegalTransition:
      return 403;
    case ErrorCode::StaleSuggestion:
    case ErrorCode::Conflict:
      return 409;
    case ErrorCode::BackendUnavailable:
      return 503;
    case ErrorCode::IoError:
      return 500;
    default:
      return 422;
  }
}

// payloads

namespace {

json box_json(const BoundingBox& b) { return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

json segment_json(const Segment& s) {
  json j{{"id", s.id},
         {"text", s.text},
         {"kind", s.kind == SegmentKind::Placeholder ? "placeholder" : "text"},
         {"dirty", s.text != s.baseline}};
  j["origin"] = s.origin_id ? json(*s.origin_id) : json(nullptr);
  if (s.bbox) j["bbox"] = box_json(*s.bbox);
  json tokens = json::array();
  for (const auto& t : s.tokens) {
    json tj{{"surface", t.surface}, {"start", t.span.start}, {"end", t.span.end}};
    if (t.bbox) tj["bbox"] = box_json(*t.bbox);
    tokens.push_back(std::move(tj));
  }
  j["tokens"] = std::move(tokens);
  json hs = json::array();
  for (const auto& h : s.highlights)
    hs.push_back({{"start", h.span.start},
                  {"end", h.span.end},
                  {"provenance", to_string(h.provenance)},
                  {"class", css_class(h.provenance)},
                  {"color", highlight_color(h.provenance)},
                  {"rule_id", h.rule_id}});
  j["highlights"] = std::move(hs);
  return j;
}

json rule_json(const ReplacementRule& r) {
  std::string find;
  for (const auto& t : r.find) find += (find.empty() ? "" : " ") + t;
  return {{"rule_id", r.rule_id},
          {"find", find},
          {"find_tokens", r.find},
          {"replace", r.replace},
          {"provenance", to_string(r.provenance)}};
}

ReplacementRule rule_from_json(const json& j, std::string_view lang) {
  std::string find;
  if (j.contains("find_tokens")) {
    for (const auto& t : j["find_tokens"]) {
      if (!find.empty()) find += ' ';
      find += t.get<std::string>();
    }
  } else {
    find = j.at("find").get<std::string>();
  }
  auto provenance = Provenance::GlobalReplacement;
  if (j.contains("provenance")) {
    auto p = parse_provenance(j["provenance"].get<std::string>());
    if (!p) throw Error(ErrorCode::InvalidArgument, "unknown provenance");
    provenance = *p;
  }
  return make_rule(find, j.at("replace").get<std::string>(), provenance, lang);
}

json report_json(const PreviewReport& report) {
  json pages = json::array();
  for (const auto& [index, occurrences] : report.pages) {
    json occ = json::array();
    for (const auto& o : occurrences)
      occ.push_back({{"segment_id", o.segment_id},
                     {"start", o.span.start},
                     {"end", o.span.end},
                     {"before", o.before_text},
                     {"after", o.after_text},
                     {"rule_id", o.rule_id}});
    pages.push_back({{"page", index}, {"count", occurrences.size()}, {"occurrences", std::move(occ)}});
  }
  return {{"pages", std::move(pages)}, {"total_count", report.total_count}};
}

json suggestion_json(const Suggestion& s) {
  std::string source_term;
  for (const auto& t : s.entry.source_term) source_term += (source_term.empty() ? "" : " ") + t;
  return {{"segment_id", s.segment_id},
          {"start", s.target_span.start},
          {"end", s.target_span.end},
          {"current_text", s.current_text},
          {"proposed_text", s.proposed_text},
          {"alternatives", s.entry.target_terms},
          {"source_term", source_term},
          {"source_start", s.source_span.begin},
          {"source_end", s.source_span.end},
          {"domain", s.entry.domain},
          {"lexicon", s.lexicon}};
}

json project_json(const Project& p) {
  json pages = json::array();
  for (const auto& page : p.pages)
    pages.push_back({{"index", page.index},
                     {"status", to_string(page.status)},
                     {"source_segments", page.source_segments.size()},
                     {"target_segments", page.target_segments.size()}});
  return {{"id", p.id},
          {"name", p.name},
          {"source_lang", p.source_lang},
          {"target_lang", p.target_lang},
          {"version", p.version},
          {"created_at", p.created_at_ms},
          {"lexicons", p.lexicon_names},
          {"tm_entries", p.tm.size()},
          {"pages", std::move(pages)}};
}

json page_json(const Project& p, const Page& page, const AlignmentConfig& config) {
  json j{{"index", page.index}, {"status", to_string(page.status)}, {"version", p.version}};
  j["source_render"] = page.source_render ? json(*page.source_render) : json(nullptr);
  json src = json::array(), tgt = json::array();
  for (const auto& s : page.source_segments) src.push_back(segment_json(s));
  for (const auto& s : page.target_segments) tgt.push_back(segment_json(s));
  j["source_segments"] = std::move(src);
  j["target_segments"] = std::move(tgt);
  json sentence = json::array(), words = json::array();
  for (const auto& [sid, tid] : sentence_links(page)) {
    sentence.push_back({{"source", sid}, {"target", tid}});
    const auto* s = page.find_source(sid);
    const auto* t = page.find_target(tid);
    if (!s || !t) continue;
    json links = json::array();
    for (const auto& l : word_links(p, *s, *t, config)) links.push_back({l.src, l.tgt});
    words.push_back({{"source", sid}, {"target", tid}, {"links", std::move(links)}});
  }
  j["sentence_links"] = std::move(sentence);
  j["word_links"] = std::move(words);
  return j;
}

Response json_response(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

Response error_response(int status, std::string_view code, const std::string& message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

json parse_body(const Request& request) {
  if (request.body.empty()) return json::object();
  try {
    auto j = json::parse(request.body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > pos) out.emplace_back(path.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return out;
}

int page_arg(const std::string& s) {
  auto n = parse_int(s);
  if (!n) throw Error(ErrorCode::UnknownPage, "no page " + s);
  return *n;
}

ReplacementScope scope_arg(const json& body) {
  auto scope = parse_scope(body.value("scope", "CurrentPage"));
  if (!scope) throw Error(ErrorCode::InvalidArgument, "unknown scope");
  return *scope;
}

std::vector<ReplacementRule> rules_arg(const json& body, std::string_view lang) {
  if (!body.contains("rules") || !body["rules"].is_array())
    throw Error(ErrorCode::InvalidArgument, "body needs a rules array");
  std::vector<ReplacementRule> rules;
  for (const auto& r : body["rules"]) rules.push_back(rule_from_json(r, lang));
  return rules;
}

}  // namespace

// service

struct Service::Route {
  Service& self;
  const Request& request;
  Session session;
  std::vector<std::string> parts;

  EditStamp stamp() const {
    return {session.author, self.config_.clock ? self.config_.clock() : wall_clock_ms()};
  }

  template <class F>
  Response read(const std::string& id, F f) {
    auto e = self.entry(id);
    std::lock_guard lock(e->mutex);
    return f(static_cast<const Project&>(e->project));
  }

  // Runs `f` on a copy so a failure leaves the project as it was, then
  // persists and advances the version by exactly one.
  template <class F>
  Response mutate(const std::string& id, const json& body, F f) {
    auto e = self.entry(id);
    std::lock_guard lock(e->mutex);
    if (body.contains("version")) {
      if (!body["version"].is_number_unsigned())
        throw Error(ErrorCode::InvalidArgument, "version must be a non-negative integer");
      if (body["version"].get<std::uint64_t>() != e->project.version)
        return json_response(409, {{"error", "StaleVersion"},
                                   {"message", "project is at version " +
                                                   std::to_string(e->project.version)},
                                   {"version", e->project.version}});
    }
    Project work = e->project;
    const auto before = work.version;
    json result = f(work);
    work.version = before + 1;
    self.workspace_.store(work);
    e->project = std::move(work);
    result["version"] = e->project.version;
    return json_response(200, result);
  }

  Response dispatch();
  Response projects_collection();
  Response project_routes();
};

Service::Service(ServiceConfig config) : config_(std::move(config)), workspace_(config_.workspace) {
  fs::create_directories(config_.workspace);
  if (config_.tokens.empty() && fs::exists(config_.workspace / "tokens.json"))
    config_.tokens = parse_token_table(slurp(config_.workspace / "tokens.json"));
}

Service::~Service() = default;

std::shared_ptr<Service::Entry> Service::entry(const std::string& id) {
  std::lock_guard lock(entries_mutex_);
  auto it = entries_.find(id);
  if (it != entries_.end()) return it->second;
  auto e = std::make_shared<Entry>();
  e->project = workspace_.load(id);
  entries_.emplace(id, e);
  return e;
}

Response Service::handle(const Request& request) {
  try {
    auto parts = split_path(request.path);
    if (request.method == "GET" && parts.size() == 1 && parts[0] == "health")
      return json_response(200, {{"ok", true}});

    auto auth = request.headers.find("authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (auth == request.headers.end() || !auth->second.starts_with(kBearer))
      return error_response(401, "Unauthorized", "missing bearer token");
    auto token = config_.tokens.find(auth->second.substr(kBearer.size()));
    if (token == config_.tokens.end()) return error_response(401, "Unauthorized", "unknown token");

    Route route{*this, request, token->second, std::move(parts)};
    return route.dispatch();
  } catch (const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response(422, "InvalidArgument", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

Response Service::Route::dispatch() {
  const auto& m = request.method;
  if (parts.size() == 1 && parts[0] == "slp1" && m == "POST") {
    auto body = parse_body(request);
    try {
      return json_response(200, {{"text", slp1_to_devanagari(body.at("text").get<std::string>())}});
    } catch (const InvalidSLP1Character& e) {
      return json_response(422, {{"error", "InvalidSLP1Character"},
                                 {"message", e.what()},
                                 {"position", e.position()}});
    }
  }
  if (!parts.empty() && parts[0] == "projects") {
    if (parts.size() == 1) return projects_collection();
    return project_routes();
  }
  return error_response(404, "NotFound", "no route for " + m + " " + request.path);
}

Response Service::Route::projects_collection() {
  if (request.method == "GET") return json_response(200, {{"projects", self.workspace_.list()}});
  if (request.method == "POST") {
    std::lock_guard lock(self.ingest_mutex_);
    auto id = self.workspace_.ingest(request.body, self.config_.abbreviations);
    auto e = self.entry(id);
    std::lock_guard plock(e->mutex);
    return json_response(201, project_json(e->project));
  }
  return error_response(405, "MethodNotAllowed", request.method);
}

Response Service::Route::project_routes() {
  const auto& m = request.method;
  const std::string id = parts[1];
  const std::size_t n = parts.size();
  auto is = [&](std::initializer_list<std::string_view> tail) {
    if (n != 2 + tail.size()) return false;
    std::size_t i = 2;
    for (auto t : tail) {
      if (t != "*" && parts[i] != t) return false;
      ++i;
    }
    return true;
  };

  if (m == "GET" && n == 2)
    return read(id, [](const Project& p) { return json_response(200, project_json(p)); });

  if (m == "GET" && is({"pages", "*"})) {
    int page = page_arg(parts[3]);
    return read(id, [&](const Project& p) {
      return json_response(200, page_json(p, p.page(page), self.config_.alignment));
    });
  }

  if (m == "PUT" && is({"pages", "*", "segments", "*"})) {
    int page = page_arg(parts[3]);
    auto body = parse_body(request);
    if (!body.contains("version"))
      throw Error(ErrorCode::InvalidArgument, "body needs the version token");
    auto text = body.at("new_text").get<std::string>();
    const std::string sid = parts[5];
    return mutate(id, body, [&](Project& p) {
      set_segment_text(p, page, sid, text, stamp());
      auto& pg = p.page(page);
      const Segment* s = pg.find_target(sid);
      if (!s) s = pg.find_source(sid);
      return json{{"segment", segment_json(*s)}};
    });
  }

  if (m == "POST" && is({"pages", "*", "open"})) {
    int page = page_arg(parts[3]);
    auto body = parse_body(request);
    return mutate(id, body, [&](Project& p) {
      p.page(page);
      auto s = stamp();
      p.log.record({EventKind::PageOpened, page, s.author, s.timestamp_ms});
      return json{{"page", page}};
    });
  }

  if (m == "POST" && is({"pages", "*", "save"})) {
    int page = page_arg(parts[3]);
    auto body = parse_body(request);
    return mutate(id, body, [&](Project& p) {
      json rules = json::array();
      for (const auto& r : save_page(p, page, stamp())) rules.push_back(rule_json(r));
      return json{{"rules", std::move(rules)}};
    });
  }

  if (m == "POST" && is({"pages", "*", "status"})) {
    int page = page_arg(parts[3]);
    auto body = parse_body(request);
    return mutate(id, body, [&](Project& p) {
      transition_status(p, page, session.role, stamp());
      return json{{"page", page}, {"status", to_string(p.page(page).status)}};
    });
  }

  if (m == "GET" && is({"pages", "*", "suggestions"})) {
    int page = page_arg(parts[3]);
    return read(id, [&](const Project& p) {
      json out = json::array();
      for (const auto& s : page_suggestions(p, page, self.config_.alignment))
        out.push_back(suggestion_json(s));
      return json_response(200, {{"page", page}, {"suggestions", std::move(out)}, {"version", p.version}});
    });
  }

  if (m == "POST" && is({"suggestions", "apply"})) {
    auto body = parse_body(request);
    const auto sid = body.at("segment_id").get<std::string>();
    const TextSpan span{body.at("start").get<std::size_t>(), body.at("end").get<std::size_t>()};
    const auto proposed = body.at("proposed_text").get<std::string>();
    return mutate(id, body, [&](Project& p) {
      auto where = locate_segment(p, sid);
      std::optional<Suggestion> chosen;
      for (auto& s : page_suggestions(p, where.page_index, self.config_.alignment)) {
        const auto& terms = s.entry.target_terms;
        if (s.segment_id == sid && s.target_span == span &&
            std::find(terms.begin(), terms.end(), proposed) != terms.end() &&
            (!body.contains("current_text") || body["current_text"] == s.current_text)) {
          s.proposed_text = proposed;
          chosen = std::move(s);
          break;
        }
      }
      if (!chosen) throw Error(ErrorCode::StaleSuggestion, "suggestion no longer applies");
      apply_suggestion(p, *chosen, stamp());
      return json{{"segment", segment_json(segment_at(p, where))}};
    });
  }

  if (m == "POST" && is({"replace", "preview"})) {
    auto body = parse_body(request);
    return read(id, [&](const Project& p) {
      auto report = preview(rules_arg(body, p.target_lang), scope_arg(body), p,
                            body.value("current_page", 1));
      auto j = report_json(report);
      j["version"] = p.version;
      return json_response(200, j);
    });
  }

  if (m == "POST" && is({"replace", "apply"})) {
    auto body = parse_body(request);
    return mutate(id, body, [&](Project& p) {
      auto count = apply(rules_arg(body, p.target_lang), scope_arg(body), p,
                         body.value("current_page", 1), stamp());
      return json{{"applied_count", count}};
    });
  }

  if (is({"tm"})) {
    if (m == "GET")
      return read(id, [](const Project& p) {
        return Response{200, "text/tab-separated-values; charset=utf-8", p.tm.to_tsv()};
      });
    if (m == "POST") {
      auto imported = TranslationMemory::from_tsv(request.body);
      return mutate(id, json::object(), [&](Project& p) {
        std::size_t added = 0;
        for (const auto& e : imported.entries()) added += p.tm.add(e) ? 1 : 0;
        return json{{"added", added}, {"tm_entries", p.tm.size()}};
      });
    }
  }

  if (m == "POST" && is({"tm", "apply"})) {
    // An optional TSV body applies that memory instead of the project's own.
    std::optional<TranslationMemory> supplied;
    if (!request.body.empty()) supplied = TranslationMemory::from_tsv(request.body);
    return mutate(id, json::object(), [&](Project& p) {
      auto count = apply_tm(supplied ? *supplied : p.tm, p, stamp());
      return json{{"applied_count", count}};
    });
  }

  if (m == "GET" && is({"logs", "summary"})) {
    auto cap = self.config_.idle_cap_ms;
    if (auto q = request.query.find("idle_cap_min"); q != request.query.end()) {
      auto v = parse_int(q->second);
      if (!v || *v <= 0) throw Error(ErrorCode::InvalidArgument, "idle_cap_min must be positive");
      cap = std::int64_t{*v} * 60000;
    }
    return read(id, [&](const Project& p) {
      json pages = json::array();
      for (const auto& s : summary(p.log, cap))
        pages.push_back({{"page", s.page_index},
                         {"edit_count", s.edit_count},
                         {"active_time_ms", s.active_time_ms}});
      return json_response(200, {{"idle_cap_ms", cap}, {"pages", std::move(pages)}});
    });
  }

  if (m == "GET" && is({"export"})) {
    auto q = request.query.find("format");
    auto format = parse_export_format(q == request.query.end() ? "PlainText" : q->second);
    if (!format) throw Error(ErrorCode::InvalidArgument, "unknown export format");
    return read(id, [&](const Project& p) {
      return Response{200, std::string(content_type(*format)), export_project(p, *format)};
    });
  }

  if (m == "POST" && is({"snapshot"})) {
    auto body = parse_body(request);
    return read(id, [&](const Project& p) {
      auto store = self.workspace_.snapshots(id);
      auto s = store.snapshot(p, body.value("message", ""), stamp().timestamp_ms);
      json j{{"id", s.id}, {"message", s.message}, {"timestamp", s.timestamp_ms}};
      j["parent"] = s.parent ? json(*s.parent) : json(nullptr);
      return json_response(200, j);
    });
  }

  if (m == "POST" && is({"sync"})) {
    auto body = parse_body(request);
    auto direction = parse_direction(body.value("direction", ""));
    if (!direction) throw Error(ErrorCode::InvalidArgument, "direction must be push or pull");
    auto backend = make_backend(body.value("backend", "directory"), body.at("remote").get<std::string>());
    auto e = self.entry(id);
    std::lock_guard lock(e->mutex);
    auto result = self.workspace_.sync_project(id, *backend, *direction);
    if (result.status == SyncStatus::FastForward && *direction == SyncDirection::Pull)
      e->project = self.workspace_.load(id);
    json j{{"status", to_string(result.status)}, {"transferred", result.transferred},
           {"version", e->project.version}};
    j["head"] = result.head ? json(*result.head) : json(nullptr);
    return json_response(200, j);
  }

  return error_response(404, "NotFound", "no route for " + m + " " + request.path);
}

// http adapter

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
  auto adapt = [&service](const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    for (const auto& [k, v] : req.headers) {
      std::string key = k;
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      r.headers[key] = v;
    }
    r.body = req.body;
    auto out = service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", adapt);
  impl_->server.Post(".*", adapt);
  impl_->server.Put(".*", adapt);
  impl_->server.Delete(".*", adapt);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace postedit
