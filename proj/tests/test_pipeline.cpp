#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mlad/config.hpp"
#include "mlad/error.hpp"
#include "mlad/monte_carlo.hpp"
#include "mlad/pipeline.hpp"
#include "mlad/probability_detector.hpp"
#include "mlad/statistics_detector.hpp"
#include "support.hpp"

using namespace mlad;
using mlad::testing::params_of;

namespace {

GbterParams model() {
  return params_of({{0, 1, 2, 3}, {4, 5, 6, 7}}, {0.8, 0.6},
                   {3.2, 2.8, 3.0, 2.6, 2.4, 2.8, 2.2, 2.5});
}

GraphSequence draw(const GbterParams& p, std::size_t n, RandomStream& rng) {
  GraphSequence seq;
  seq.universe = p.universe;
  for (std::size_t t = 0; t < n; ++t) seq.snapshots.push_back(sample_graph(p, rng));
  return seq;
}

PipelineConfig small_config() {
  PipelineConfig cfg;
  cfg.detect.mc_samples = 200;
  cfg.detect.seed = 11;
  cfg.fit.partition = model().partition;
  return cfg;
}

const AnomalyReport& find(const StepResult& r, DetectorKind k) {
  for (const auto& rep : r.reports)
    if (rep.detector == k) return rep;
  throw std::runtime_error("missing report");
}

}  // namespace

TEST(Pipeline, ThresholdExtremes) {
  auto rng = make_stream(1);
  const auto p = model();
  const auto train = draw(p, 20, rng);
  auto cfg = small_config();
  cfg.detect.thresholds = {0.0, 0.0, 0.0};
  auto none = Pipeline::fit(train, cfg);
  cfg.detect.thresholds = {1.0, 1.0, 1.0};
  auto all = Pipeline::fit(train, cfg);
  for (int t = 0; t < 5; ++t) {
    const auto g = sample_graph(p, rng);
    for (const auto& r : none.step(g, "s").reports) {
      EXPECT_FALSE(r.graph_flag);
      for (bool f : r.community_flags) EXPECT_FALSE(f);
      for (bool f : r.node_flags) EXPECT_FALSE(f);
    }
    for (const auto& r : all.step(g, "s").reports) {
      EXPECT_TRUE(r.graph_flag);
      for (bool f : r.community_flags) EXPECT_TRUE(f);
      for (bool f : r.node_flags) EXPECT_TRUE(f);
    }
  }
}

TEST(Pipeline, ReportShapes) {
  auto rng = make_stream(2);
  const auto p = model();
  auto pipe = Pipeline::fit(draw(p, 10, rng), small_config());
  const auto r = pipe.step(sample_graph(p, rng), "k");
  ASSERT_EQ(r.reports.size(), 3u);
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.snapshot, "k");
    EXPECT_GT(rep.graph_pvalue, 0.0);
    EXPECT_LE(rep.graph_pvalue, 1.0);
    if (rep.hierarchical()) {
      EXPECT_EQ(rep.community_pvalues.size(), 2u);
      EXPECT_EQ(rep.node_pvalues.size(), 8u);
    } else {
      EXPECT_TRUE(rep.community_pvalues.empty());
    }
  }
}

TEST(Pipeline, UniverseMismatch) {
  auto rng = make_stream(3);
  auto pipe = Pipeline::fit(draw(model(), 5, rng), small_config());
  EXPECT_THROW(pipe.step(LabeledGraph(NodeUniverse::numbered(9)), "x"), InvalidArgument);
}

TEST(Pipeline, ScoresBeforeUpdating) {
  auto rng = make_stream(4);
  const auto p = model();
  const auto train = draw(p, 10, rng);
  auto pipe = Pipeline::fit(train, small_config());
  const auto before = pipe.params();
  const auto g = sample_graph(p, rng);
  const auto r = pipe.step(g, "a");
  EXPECT_EQ(r.params.expected_degree, before.expected_degree);
  auto expected = fit_gbter(train, small_config().fit).state;
  expected.observe(g);
  EXPECT_EQ(pipe.posterior(), expected);
  EXPECT_EQ(pipe.baseline().count(), 11u);
}

TEST(Pipeline, SkipsUpdateOnFlaggedSnapshotsWhenConfigured) {
  auto rng = make_stream(5);
  const auto p = model();
  auto cfg = small_config();
  cfg.update_with_anomalies = false;
  auto pipe = Pipeline::fit(draw(p, 10, rng), cfg);
  const auto before = pipe.posterior();
  // A complete graph is wildly anomalous under a sparse model.
  std::vector<Edge> all;
  for (NodeIndex i = 0; i < 8; ++i)
    for (NodeIndex j = i + 1; j < 8; ++j) all.emplace_back(i, j);
  const auto r = pipe.step(LabeledGraph(p.universe, all), "dense");
  EXPECT_FALSE(r.updated);
  EXPECT_EQ(pipe.posterior(), before);
}

TEST(Pipeline, Deterministic) {
  auto rng = make_stream(6);
  const auto p = model();
  const auto train = draw(p, 10, rng);
  const auto stream = draw(p, 4, rng);
  auto a = Pipeline::fit(train, small_config());
  auto b = Pipeline::fit(train, small_config());
  for (const auto& g : stream.snapshots) {
    const auto ra = a.step(g, "s"), rb = b.step(g, "s");
    for (std::size_t k = 0; k < ra.reports.size(); ++k) {
      EXPECT_EQ(ra.reports[k].graph_pvalue, rb.reports[k].graph_pvalue);
      EXPECT_EQ(ra.reports[k].community_pvalues, rb.reports[k].community_pvalues);
      EXPECT_EQ(ra.reports[k].node_pvalues, rb.reports[k].node_pvalues);
    }
  }
}

TEST(Pipeline, SharedSamplesMatchIndependentRanking) {
  auto rng = make_stream(7);
  const auto p = model();
  auto cfg = small_config();
  auto pipe = Pipeline::fit(draw(p, 10, rng), cfg);
  const auto g = sample_graph(p, rng);
  const auto params = pipe.params();
  const auto r = pipe.step(g, "s");

  // Same stream, graphs materialised and scored through the graph API.
  const ProbabilityModel pm(params);
  const StatisticsModel sm(params);
  auto mc = make_stream(cfg.detect.seed, 0);
  std::vector<double> graph_scores, comm0_scores, node3_scores, stats_graph_scores, stats_comm1_scores;
  const auto c0 = params.partition.members(0);
  const auto c1 = params.partition.members(1);
  for (std::size_t m = 0; m < cfg.detect.mc_samples; ++m) {
    const auto s = sample_graph(params, mc);
    graph_scores.push_back(pm.graph(s).value());
    comm0_scores.push_back(pm.subgraph(s, c0).value());
    node3_scores.push_back(pm.node(s, 3).value());
    double total = 0.0;
    for (NodeIndex i = 0; i < 8; ++i) total += sm.node(s, i).value();
    stats_graph_scores.push_back(total);
    stats_comm1_scores.push_back(sm.subgraph(s, c1).value());
  }
  const auto& prob = find(r, DetectorKind::Probability);
  EXPECT_DOUBLE_EQ(prob.graph_pvalue, rank_pvalue(pm.graph(g).value(), graph_scores));
  EXPECT_DOUBLE_EQ(prob.community_pvalues[0], rank_pvalue(pm.subgraph(g, c0).value(), comm0_scores));
  EXPECT_DOUBLE_EQ(prob.node_pvalues[3], rank_pvalue(pm.node(g, 3).value(), node3_scores));
  const auto& stats = find(r, DetectorKind::Statistics);
  double obs = 0.0;
  for (NodeIndex i = 0; i < 8; ++i) obs += sm.node(g, i).value();
  EXPECT_DOUBLE_EQ(stats.graph_pvalue, rank_pvalue(obs, stats_graph_scores));
  EXPECT_DOUBLE_EQ(stats.community_pvalues[1], rank_pvalue(sm.subgraph(g, c1).value(), stats_comm1_scores));
  EXPECT_DOUBLE_EQ(stats.node_pvalues[5], sm.node_pvalue_exact(g, 5));
}

TEST(Pipeline, BaselineNeedsTwoTrainingGraphs) {
  auto rng = make_stream(8);
  EXPECT_THROW(Pipeline::fit(draw(model(), 1, rng), small_config()), InvalidArgument);
  auto cfg = small_config();
  cfg.detectors = {DetectorKind::Statistics};
  EXPECT_NO_THROW(Pipeline::fit(draw(model(), 1, rng), cfg));
  cfg.detectors.clear();
  EXPECT_THROW(Pipeline::fit(draw(model(), 3, rng), cfg), InvalidArgument);
}

TEST(Pipeline, ReclusterRecoversCommunities) {
  auto rng = make_stream(9);
  const auto p = model();
  auto cfg = small_config();
  cfg.fit.partition.reset();
  cfg.recluster_every = 5;
  cfg.detectors = {DetectorKind::Statistics};
  cfg.detect.mc_samples = 20;
  auto pipe = Pipeline::fit(draw(p, 30, rng), cfg);
  for (int t = 0; t < 5; ++t) pipe.step(sample_graph(p, rng), "s");
  EXPECT_EQ(pipe.params().partition, p.partition);
  // Reclustering keeps the posterior equal to a refit of every snapshot seen.
  EXPECT_EQ(pipe.posterior().observations, 35u);
}

TEST(Pipeline, FunctionalStep) {
  auto rng = make_stream(10);
  const auto p = model();
  auto pipe = Pipeline::fit(draw(p, 5, rng), small_config());
  auto [r, next] = stream_step(pipe, sample_graph(p, rng), "f");
  EXPECT_EQ(next.steps(), 1u);
  EXPECT_EQ(pipe.steps(), 0u);
  EXPECT_EQ(r.reports.size(), 3u);
}

TEST(Pipeline, CalibratedUnderItsOwnModel) {
  // Graph-level p-values of snapshots drawn from the current parameters are
  // close to uniform.
  auto rng = make_stream(12);
  const auto p = model();
  auto cfg = small_config();
  cfg.detectors = {DetectorKind::Probability};
  cfg.detect.mc_samples = 199;
  auto pipe = Pipeline::fit(draw(p, 30, rng), cfg);
  int below = 0;
  const int steps = 300;
  for (int t = 0; t < steps; ++t) {
    const auto g = sample_graph(pipe.params(), rng);
    below += pipe.step(g, "c").reports[0].graph_pvalue <= 0.05;
  }
  EXPECT_NEAR(below / static_cast<double>(steps), 0.05, 0.035);
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig cfg;
  cfg.detect.mc_samples = 123;
  cfg.detect.seed = 99;
  cfg.detect.thresholds = {0.01, 0.02, 0.03};
  cfg.detect.truncate_poisson = true;
  cfg.fit.weighting = Weighting::Exponential;
  cfg.fit.gamma = 0.25;
  cfg.fit.mcl.inflation = 2.0;
  cfg.detectors = {DetectorKind::Statistics};
  cfg.update_with_anomalies = false;
  cfg.recluster_every = 7;
  const auto doc = config_to_json(cfg);
  const auto back = config_from_json(doc);
  EXPECT_EQ(config_to_json(back), doc);
  EXPECT_EQ(back.detect.mc_samples, 123u);
  EXPECT_EQ(back.fit.gamma, 0.25);
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"bogus", 1}}), InvalidArgument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"gamma", 1.0}}), InvalidArgument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"thresholds", {{"graph", 2.0}}}}), InvalidArgument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"mc_samples", 0}}), InvalidArgument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"weighting", "median"}}), InvalidArgument);
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), InvalidArgument);
  EXPECT_THROW(parse_detector_list("prob,oracle"), InvalidArgument);
  const auto kinds = parse_detector_list("stats,prob,stats");
  ASSERT_EQ(kinds.size(), 2u);
  EXPECT_EQ(kinds[0], DetectorKind::Statistics);
}
