// postedit: batch front end over a workspace directory.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "postedit/bundle.hpp"
#include "postedit/editing.hpp"
#include "postedit/error.hpp"
#include "postedit/export.hpp"
#include "postedit/service.hpp"
#include "postedit/snapshot.hpp"
#include "postedit/suggest.hpp"

using namespace postedit;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kNotFound = 3, kMalformed = 4, kConflict = 5,
            kUnavailable = 6 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPage:
    case ErrorCode::UnknownSegment:
    case ErrorCode::UnknownProject:
      return kNotFound;
    case ErrorCode::Conflict:
    case ErrorCode::StaleSuggestion:
      return kConflict;
    case ErrorCode::BackendUnavailable:
      return kUnavailable;
    case ErrorCode::IoError:
    case ErrorCode::IllegalTransition:
      return kFailure;
    default:
      return kMalformed;
  }
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

struct Options {
  std::string workspace = "workspace";
  std::string project;
  std::string author;
  std::string abbreviations;
  int idle_cap_min = 10;
  double intersect_threshold = 0.001;
  double greedy_floor = 0.0;
  std::string decoder = "greedy";
};

std::string pick_project(const Workspace& ws, const Options& opt) {
  if (!opt.project.empty()) return opt.project;
  auto ids = ws.list();
  if (ids.size() == 1) return ids.front();
  if (ids.empty()) throw Error(ErrorCode::UnknownProject, "workspace has no projects");
  throw Error(ErrorCode::InvalidArgument, "workspace holds several projects; pass --project");
}

AlignmentConfig alignment_config(const Options& opt) {
  AlignmentConfig c;
  c.decoder = opt.decoder == "intersect" ? Decoder::Intersect : Decoder::Greedy;
  c.intersect_threshold = opt.intersect_threshold;
  c.greedy_floor = opt.greedy_floor;
  return c;
}

AbbreviationList abbreviations(const Options& opt) {
  return opt.abbreviations.empty() ? AbbreviationList{} : AbbreviationList::load(opt.abbreviations);
}

std::string author(const Options& opt) {
  if (!opt.author.empty()) return opt.author;
  const char* user = std::getenv("USER");
  return user && *user ? user : "cli";
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-editing workspace tool"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--workspace", opt.workspace, "Workspace directory");
  app.add_option("--project", opt.project, "Project id (default: the only project)");
  app.add_option("--author", opt.author, "Author recorded in logs (default: $USER)");
  app.add_option("--abbreviations", opt.abbreviations, "Abbreviation list for sentence splitting")
      ->check(CLI::ExistingFile);
  app.add_option("--idle-cap-min", opt.idle_cap_min, "Idle cap for page timing, minutes")
      ->check(CLI::PositiveNumber);
  app.add_option("--intersect-threshold", opt.intersect_threshold, "Intersection threshold c")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--greedy-floor", opt.greedy_floor, "Greedy decoder floor");
  app.add_option("--decoder", opt.decoder, "Word alignment decoder")
      ->check(CLI::IsMember({"greedy", "intersect"}));

  std::string bundle_path;
  auto* ingest_cmd = app.add_subcommand("ingest", "Create a project from a bundle zip");
  ingest_cmd->add_option("bundle", bundle_path)->required()->check(CLI::ExistingFile);

  std::string format_name, out_path;
  auto* export_cmd = app.add_subcommand("export", "Export target text");
  export_cmd->add_option("format", format_name, "PlainText | HTML | LaTeX")->required();
  export_cmd->add_option("out", out_path)->required();

  std::string tm_path;
  auto* apply_tm_cmd = app.add_subcommand("apply-tm", "Apply a translation memory TSV");
  apply_tm_cmd->add_option("tm", tm_path)->required()->check(CLI::ExistingFile);

  std::string tm_out;
  auto* export_tm_cmd = app.add_subcommand("export-tm", "Write the project TM as TSV");
  export_tm_cmd->add_option("out", tm_out)->required();

  auto* stats_cmd = app.add_subcommand("stats", "Per-page edit counts and active time");

  std::string message;
  auto* snapshot_cmd = app.add_subcommand("snapshot", "Snapshot the current project state");
  snapshot_cmd->add_option("-m,--message", message)->required();

  std::string direction, remote, backend = "directory";
  auto* sync_cmd = app.add_subcommand("sync", "Push or pull snapshots");
  sync_cmd->add_option("direction", direction)->required()->check(CLI::IsMember({"push", "pull"}));
  sync_cmd->add_option("--remote", remote)->required();
  sync_cmd->add_option("--backend", backend)->check(CLI::IsMember({"directory", "git"}));

  int align_page = 1;
  auto* align_cmd = app.add_subcommand("align", "Dump sentence and word links for a page");
  align_cmd->add_option("page", align_page)->required();

  std::string host = "127.0.0.1", tokens_path;
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--tokens", tokens_path, "Token table JSON")->check(CLI::ExistingFile);

  std::vector<std::string> slp1_words;
  auto* slp1_cmd = app.add_subcommand("slp1", "Transliterate SLP1 to Devanagari");
  slp1_cmd->add_option("text", slp1_words)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    Workspace ws(opt.workspace);

    if (*ingest_cmd) {
      auto id = ws.ingest(read_all(bundle_path), abbreviations(opt));
      std::cout << id << "\n";
      return kOk;
    }
    if (*slp1_cmd) {
      std::string text;
      for (const auto& w : slp1_words) text += (text.empty() ? "" : " ") + w;
      std::cout << slp1_to_devanagari(text) << "\n";
      return kOk;
    }
    if (*serve_cmd) {
      ServiceConfig config;
      config.workspace = opt.workspace;
      config.alignment = alignment_config(opt);
      config.idle_cap_ms = std::int64_t{opt.idle_cap_min} * 60000;
      config.abbreviations = abbreviations(opt);
      if (!tokens_path.empty()) config.tokens = parse_token_table(read_all(tokens_path));
      Service service(config);
      HttpServer server(service);
      int bound = server.bind(host, port);
      std::cout << "listening on " << host << ":" << bound << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
      return kOk;
    }

    const auto id = pick_project(ws, opt);
    const auto stamp = EditStamp::now(author(opt));

    if (*export_cmd) {
      auto format = parse_export_format(format_name);
      if (!format) {
        std::cerr << "unknown format " << format_name << "\n";
        return kUsage;
      }
      write_all(out_path, export_project(ws.load(id), *format));
      return kOk;
    }
    if (*apply_tm_cmd) {
      auto project = ws.load(id);
      auto tm = TranslationMemory::from_tsv(read_all(tm_path));
      auto count = apply_tm(tm, project, stamp);
      if (count > 0) ws.store(project);
      std::cout << count << " replacements\n";
      return kOk;
    }
    if (*export_tm_cmd) {
      write_all(tm_out, ws.load(id).tm.to_tsv());
      return kOk;
    }
    if (*stats_cmd) {
      auto project = ws.load(id);
      std::cout << "page\tedits\tactive_s\n";
      for (const auto& s : summary(project.log, std::int64_t{opt.idle_cap_min} * 60000))
        std::cout << s.page_index << "\t" << s.edit_count << "\t" << s.active_time_ms / 1000.0 << "\n";
      return kOk;
    }
    if (*snapshot_cmd) {
      auto store = ws.snapshots(id);
      auto s = store.snapshot(ws.load(id), message, stamp.timestamp_ms);
      std::cout << s.id << "\n";
      return kOk;
    }
    if (*sync_cmd) {
      auto b = make_backend(backend, remote);
      auto result = ws.sync_project(id, *b, *parse_direction(direction));
      std::cout << to_string(result.status);
      if (result.head) std::cout << " " << *result.head;
      std::cout << "\n";
      return kOk;
    }
    if (*align_cmd) {
      auto project = ws.load(id);
      const auto& page = project.page(align_page);
      auto config = alignment_config(opt);
      for (const auto& [sid, tid] : sentence_links(page)) {
        std::cout << sid << "\t" << tid;
        const auto* s = page.find_source(sid);
        const auto* t = page.find_target(tid);
        if (s && t)
          for (const auto& l : word_links(project, *s, *t, config)) std::cout << "\t" << l.src << "-" << l.tgt;
        std::cout << "\n";
      }
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "postedit: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "postedit: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
