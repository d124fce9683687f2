#include <filesystem>
#include <thread>

#include <gtest/gtest.h>

#include "mlad/error.hpp"
#include "mlad/run.hpp"
#include "mlad/service.hpp"
#include "support.hpp"

#include "api_server.hpp"

using namespace mlad;
namespace fs = std::filesystem;

namespace {

// Two triangles joined by one edge, labels include a space.
GraphSequence sequence() {
  auto u = std::make_shared<const NodeUniverse>(std::vector<std::string>{"a", "b", "c", "St Mary", "e", "f"});
  GraphSequence seq;
  seq.universe = u;
  for (int t = 0; t < 6; ++t) {
    std::vector<Edge> es{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
    if (t % 2) es.emplace_back(2, 3);
    if (t == 5) es.emplace_back(0, 5);
    seq.snapshots.emplace_back(u, es);
    seq.keys.push_back("w" + std::to_string(t + 1));
  }
  return seq;
}

class ServiceTest : public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("mlad_service_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    PipelineConfig cfg;
    cfg.detect.mc_samples = 50;
    cfg.detectors = {DetectorKind::Statistics, DetectorKind::Probability, DetectorKind::Baseline};
    run_stream(sequence(), 3, cfg, dir_, "inline");
    store_ = new ReportStore(ReportStore::load(dir_ / "manifest.json"));
  }
  static void TearDownTestSuite() {
    delete store_;
    fs::remove_all(dir_);
  }

  static ApiResponse get(const std::string& path, std::map<std::string, std::string> q = {}) {
    return handle_api(*store_, path, q);
  }

  static inline fs::path dir_;
  static inline ReportStore* store_ = nullptr;
};

}  // namespace

TEST_F(ServiceTest, SnapshotList) {
  const auto r = get("/api/snapshots");
  ASSERT_EQ(r.status, 200);
  const auto& s = r.body.at("snapshots");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].at("key"), "w4");
  EXPECT_EQ(s[2].at("key"), "w6");
  for (const auto* d : {"stats", "prob", "baseline"}) {
    const double p = s[0].at("graph").at(d).at("pvalue");
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST_F(ServiceTest, Communities) {
  const auto r = get("/api/snapshots/w5/communities");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("detector"), "stats");
  ASSERT_EQ(r.body.at("communities").size(), 2u);
  EXPECT_EQ(r.body.at("communities")[0].at("members"), nlohmann::json({"a", "b", "c"}));
  const auto p = get("/api/snapshots/w5/communities", {{"detector", "prob"}});
  ASSERT_EQ(p.status, 200);
  EXPECT_EQ(p.body.at("detector"), "prob");
}

TEST_F(ServiceTest, Subgraph) {
  const auto r = get("/api/snapshots/w6/communities/0/subgraph");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("nodes").size(), 3u);
  // Three internal edges plus the bridges (c, St Mary) and (a, f).
  EXPECT_EQ(r.body.at("edges").size(), 5u);
  EXPECT_EQ(r.body.at("community").at("id"), 0);
}

TEST_F(ServiceTest, Node) {
  const auto r = get("/api/snapshots/w4/nodes/St Mary");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("node").at("label"), "St Mary");
  EXPECT_EQ(r.body.at("node").at("internal_degree"), 2);
  EXPECT_EQ(r.body.at("node").at("external_degree"), 1);
}

TEST_F(ServiceTest, NotFound) {
  EXPECT_EQ(get("/api/snapshots/w1/communities").status, 404);  // training snapshot
  EXPECT_EQ(get("/api/snapshots/nope/communities").status, 404);
  EXPECT_EQ(get("/api/snapshots/w4/communities/9/subgraph").status, 404);
  EXPECT_EQ(get("/api/snapshots/w4/nodes/zz").status, 404);
  EXPECT_EQ(get("/api/other").status, 404);
  EXPECT_EQ(get("/api/snapshots/w4/edges").status, 404);
  EXPECT_TRUE(get("/api/snapshots/nope/communities").body.contains("error"));
}

TEST_F(ServiceTest, BadRequest) {
  EXPECT_EQ(get("/api/snapshots/w4/communities/x/subgraph").status, 400);
  EXPECT_EQ(get("/api/snapshots/w4/communities/-1/subgraph").status, 400);
  EXPECT_EQ(get("/api/snapshots/w4/communities", {{"detector", "oracle"}}).status, 400);
  EXPECT_EQ(get("/api/snapshots/w4/communities", {{"detector", "baseline"}}).status, 400);
}

TEST_F(ServiceTest, OverHttp) {
  httplib::Server server;
  mount_api(server, *store_);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto list = client.Get("/api/snapshots");
  ASSERT_TRUE(list);
  EXPECT_EQ(list->status, 200);
  EXPECT_EQ(nlohmann::json::parse(list->body).at("snapshots").size(), 3u);

  auto node = client.Get("/api/snapshots/w4/nodes/St%20Mary");
  ASSERT_TRUE(node);
  EXPECT_EQ(node->status, 200);
  EXPECT_EQ(nlohmann::json::parse(node->body).at("node").at("label"), "St Mary");

  auto sub = client.Get("/api/snapshots/w4/communities/1/subgraph?detector=prob");
  ASSERT_TRUE(sub);
  EXPECT_EQ(sub->status, 200);
  EXPECT_EQ(nlohmann::json::parse(sub->body).at("detector"), "prob");

  auto bad = client.Get("/api/snapshots/w4/communities/abc/subgraph");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto missing = client.Get("/api/snapshots/w99/communities");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(missing->get_header_value("Content-Type"), "application/json");

  server.stop();
  th.join();
}

TEST(RunStream, PrefixBounds) {
  PipelineConfig cfg;
  cfg.detect.mc_samples = 10;
  EXPECT_THROW(run_stream(sequence(), 0, cfg), InvalidArgument);
  EXPECT_THROW(run_stream(sequence(), 6, cfg), InvalidArgument);
  const auto run = run_stream(sequence(), 5, cfg);
  EXPECT_EQ(run.steps.size(), 1u);
  EXPECT_EQ(run.manifest.snapshots, std::vector<std::string>{"w6"});
}

TEST(RunStream, ManifestRoundTrip) {
  PipelineConfig cfg;
  cfg.detect.mc_samples = 10;
  const auto run = run_stream(sequence(), 4, cfg);
  const auto back = manifest_from_json(manifest_to_json(run.manifest));
  EXPECT_EQ(manifest_to_json(back), manifest_to_json(run.manifest));
  EXPECT_EQ(back.reports.size(), 6u);
  EXPECT_EQ(back.train_prefix, 4u);
}
