#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "postedit/service.hpp"

using namespace postedit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string lexicon_bundle() {
  std::vector<fixtures::PageText> pages = {{"The bank closed.", "बैंक बंद हुआ।"},
                                           {"The bank rate rose.", "बैंक दर बढ़ी।"}};
  auto files = fixtures::page_files(pages);
  auto m = fixtures::manifest("demo", pages);
  m["lexicons"] = {"lexicons/fin.tsv"};
  files["manifest.json"] = m.dump();
  files["lexicons/fin.tsv"] = "bank\tअधिकोष\n";
  files["alignments/p1s1.mat"] = "4 4\n0 0 0 0\n1 0 0 0\n0 1 0 0\n0 0 0 1\n";
  return fixtures::zip_files(files);
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "postedit-svc-XXXXXX").string();
    root_ = mkdtemp(tmpl.data());
    ServiceConfig c;
    c.workspace = root_ / "ws";
    c.tokens = {{"tc", {"asha", Role::Corrector}}, {"tv", {"ravi", Role::Verifier}}};
    c.clock = [this] { return now_ += 1000; };
    service_ = std::make_unique<Service>(c);
    auto r = call("POST", "/projects", lexicon_bundle());
    ASSERT_EQ(r.status, 201) << r.body;
  }
  void TearDown() override {
    service_.reset();
    fs::remove_all(root_);
  }

  Response call(const std::string& method, const std::string& path, const std::string& body = "",
                const std::string& token = "tc", std::map<std::string, std::string> query = {}) {
    Request r;
    r.method = method;
    r.path = path;
    r.body = body;
    r.query = std::move(query);
    if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
    return service_->handle(r);
  }
  json call_json(const std::string& method, const std::string& path, const json& body, int want = 200,
                 const std::string& token = "tc") {
    auto r = call(method, path, body.is_null() ? "" : body.dump(), token);
    EXPECT_EQ(r.status, want) << method << " " << path << " " << r.body;
    return json::parse(r.body);
  }
  std::uint64_t version() { return call_json("GET", "/projects/demo", nullptr)["version"]; }

  fs::path root_;
  std::int64_t now_ = 1700000000000;
  std::unique_ptr<Service> service_;
};

}  // namespace

TEST_F(ServiceTest, Auth) {
  EXPECT_EQ(call("GET", "/health", "", "").status, 200);
  EXPECT_EQ(call("GET", "/projects", "", "").status, 401);
  EXPECT_EQ(call("GET", "/projects", "", "bogus").status, 401);
  EXPECT_EQ(call("GET", "/projects").status, 200);
  EXPECT_EQ(call("GET", "/projects/nope").status, 404);
  EXPECT_EQ(call("POST", "/projects", lexicon_bundle()).status, 409);
  EXPECT_EQ(call("POST", "/projects", "garbage").status, 422);
}

TEST_F(ServiceTest, PageViewHasLinks) {
  auto page = call_json("GET", "/projects/demo/pages/1", nullptr);
  ASSERT_EQ(page["target_segments"].size(), 1u);
  EXPECT_EQ(page["sentence_links"][0]["source"], "p1s1");
  EXPECT_EQ(page["sentence_links"][0]["target"], "p1t1");
  EXPECT_EQ(page["word_links"][0]["links"], json::parse("[[1,0],[2,1],[3,3]]"));
  EXPECT_EQ(call("GET", "/projects/demo/pages/7").status, 404);
}

TEST_F(ServiceTest, SegmentEditNeedsCurrentVersion) {
  auto v = version();
  EXPECT_EQ(call("PUT", "/projects/demo/pages/1/segments/p1t1", json{{"new_text", "x"}}.dump()).status, 422);
  auto stale = call("PUT", "/projects/demo/pages/1/segments/p1t1",
                    json{{"new_text", "x"}, {"version", v + 5}}.dump());
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(json::parse(stale.body)["error"], "StaleVersion");
  auto ok = call_json("PUT", "/projects/demo/pages/1/segments/p1t1",
                      {{"new_text", "बैंक आज बंद हुआ।"}, {"version", v}});
  EXPECT_EQ(ok["version"], v + 1);
  EXPECT_EQ(ok["segment"]["text"], "बैंक आज बंद हुआ।");
  EXPECT_EQ(version(), v + 1);
  EXPECT_EQ(call("PUT", "/projects/demo/pages/1/segments/p1t9",
                 json{{"new_text", "x"}, {"version", v + 1}}.dump()).status, 404);
  EXPECT_EQ(version(), v + 1);
}

TEST_F(ServiceTest, ConcurrentWritersOneWins) {
  auto v = version();
  std::atomic<int> ok{0}, conflict{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i] {
      auto r = call("PUT", "/projects/demo/pages/2/segments/p2t1",
                    json{{"new_text", "पाठ " + std::to_string(i)}, {"version", v}}.dump());
      (r.status == 200 ? ok : conflict)++;
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok, 1);
  EXPECT_EQ(conflict, 7);
  EXPECT_EQ(version(), v + 1);
}

TEST_F(ServiceTest, StatusRoles) {
  auto r = call("POST", "/projects/demo/pages/1/status", "{}", "tv");
  EXPECT_EQ(r.status, 403);
  EXPECT_EQ(call_json("POST", "/projects/demo/pages/1/status", json::object())["status"], "Edited");
  EXPECT_EQ(call_json("POST", "/projects/demo/pages/1/status", json::object(), 200, "tv")["status"], "Verified");
}

TEST_F(ServiceTest, ReplacePreviewMatchesApply) {
  json body = {{"rules", {{{"find", "बैंक"}, {"replace", "अधिकोष"}}}}, {"scope", "AllPages"}};
  auto pv = call_json("POST", "/projects/demo/replace/preview", body);
  EXPECT_EQ(pv["total_count"], 2);
  auto v = version();
  auto ap = call_json("POST", "/projects/demo/replace/apply", body);
  EXPECT_EQ(ap["applied_count"], 2);
  EXPECT_EQ(ap["version"], v + 1);
  body["scope"] = "Nowhere";
  EXPECT_EQ(call("POST", "/projects/demo/replace/apply", body.dump()).status, 422);
}

TEST_F(ServiceTest, SuggestionsAndApply) {
  auto s = call_json("GET", "/projects/demo/pages/1/suggestions", nullptr);
  ASSERT_EQ(s["suggestions"].size(), 1u);
  auto sug = s["suggestions"][0];
  json body = {{"segment_id", sug["segment_id"]}, {"start", sug["start"]}, {"end", sug["end"]},
               {"proposed_text", sug["proposed_text"]}};
  auto applied = call_json("POST", "/projects/demo/suggestions/apply", body);
  EXPECT_EQ(applied["segment"]["text"], "अधिकोष बंद हुआ।");
  auto again = call("POST", "/projects/demo/suggestions/apply", body.dump());
  EXPECT_EQ(again.status, 409);
}

TEST_F(ServiceTest, SaveTmExportAndLogs) {
  call_json("POST", "/projects/demo/pages/2/open", json::object());
  auto v = version();
  call_json("PUT", "/projects/demo/pages/2/segments/p2t1", {{"new_text", "रेपो दर बढ़ी।"}, {"version", v}});
  auto saved = call_json("POST", "/projects/demo/pages/2/save", json::object());
  ASSERT_EQ(saved["rules"].size(), 1u);
  EXPECT_EQ(saved["rules"][0]["replace"], "रेपो");

  auto tm = call("GET", "/projects/demo/tm");
  EXPECT_NE(tm.body.find("बैंक\tरेपो"), std::string::npos);
  auto applied = call_json("POST", "/projects/demo/tm/apply", nullptr);
  EXPECT_EQ(applied["applied_count"], 1);

  auto txt = call("GET", "/projects/demo/export", "", "tc", {{"format", "txt"}});
  EXPECT_EQ(txt.body, "रेपो बंद हुआ।\fरेपो दर बढ़ी।");
  EXPECT_EQ(call("GET", "/projects/demo/export", "", "tc", {{"format", "docx"}}).status, 422);

  auto logs = json::parse(call("GET", "/projects/demo/logs/summary").body);
  bool saw_page2 = false;
  for (const auto& p : logs["pages"])
    if (p["page"] == 2) {
      saw_page2 = true;
      EXPECT_EQ(p["edit_count"], 1);
      EXPECT_GT(p["active_time_ms"].get<int>(), 0);
    }
  EXPECT_TRUE(saw_page2);
}

TEST_F(ServiceTest, SnapshotAndSync) {
  auto snap = call_json("POST", "/projects/demo/snapshot", {{"message", "ingested"}});
  auto remote = (root_ / "remote").string();
  fs::create_directories(remote);
  auto pushed = call_json("POST", "/projects/demo/sync", {{"direction", "push"}, {"remote", remote}});
  EXPECT_EQ(pushed["status"], "fast-forward");
  EXPECT_EQ(pushed["head"], snap["id"]);
  auto again = call_json("POST", "/projects/demo/sync", {{"direction", "pull"}, {"remote", remote}});
  EXPECT_EQ(again["status"], "up-to-date");
  auto missing = call("POST", "/projects/demo/sync",
                      json{{"direction", "pull"}, {"remote", remote + "/absent"}}.dump());
  EXPECT_EQ(missing.status, 503);
}

TEST_F(ServiceTest, Slp1Endpoint) {
  EXPECT_EQ(call_json("POST", "/slp1", {{"text", "rAmaH"}})["text"], "रामः");
  EXPECT_EQ(call("POST", "/slp1", json{{"text", "r$"}}.dump()).status, 422);
}

TEST_F(ServiceTest, OverHttp) {
  HttpServer server(*service_);
  int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(client.Get("/projects/demo")->status, 401);
  httplib::Headers auth = {{"Authorization", "Bearer tc"}};
  auto res = client.Get("/projects/demo/export?format=html", auth);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_NE(res->get_header_value("Content-Type").find("text/html"), std::string::npos);
  auto put = client.Put("/projects/demo/pages/1/segments/p1t1", auth,
                        json{{"new_text", "नया"}, {"version", 1}}.dump(), "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 200);
  EXPECT_EQ(json::parse(put->body)["version"], 2);
  server.stop();
  t.join();
}
