#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "mlad/baseline.hpp"
#include "mlad/error.hpp"
#include "mlad/monte_carlo.hpp"
#include "mlad/probability_detector.hpp"
#include "mlad/statistics_detector.hpp"
#include "support.hpp"

using namespace mlad;
using mlad::testing::er_params;
using mlad::testing::graph_from_mask;
using mlad::testing::make_graph;
using mlad::testing::params_of;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Direct Binomial x Poisson pmf, no logs.
double joint_pmf(int m, double p, double eps, int a, int b) {
  const double binom = std::tgamma(m + 1.0) / (std::tgamma(a + 1.0) * std::tgamma(m - a + 1.0)) * std::pow(p, a) *
                       std::pow(1 - p, m - a);
  const double pois = std::exp(-eps) * std::pow(eps, b) / std::tgamma(b + 1.0);
  return binom * pois;
}

double brute_pvalue(int m, double p, double eps, int d_in, int d_ex) {
  const double obs = joint_pmf(m, p, eps, d_in, d_ex);
  double s = 0.0;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= 150; ++b) {
      const double q = joint_pmf(m, p, eps, a, b);
      if (q <= obs * (1 + 1e-9)) s += q;
    }
  return s;
}

}  // namespace

TEST(ProbabilityDetector, ErdosRenyiThreeNodes) {
  const auto p = er_params(3, 1.0 / 3.0);
  const auto u = p.universe;
  EXPECT_NEAR(graph_log_prob(p, LabeledGraph(u)).value(), std::log(8.0 / 27.0), 1e-12);
  for (std::uint64_t mask : {1u, 2u, 4u})
    EXPECT_NEAR(graph_log_prob(p, graph_from_mask(u, mask)).value(), std::log(4.0 / 27.0), 1e-12);
  EXPECT_NEAR(node_log_prob(p, LabeledGraph(u), 0).value(), std::log(4.0 / 9.0), 1e-12);
}

TEST(ProbabilityDetector, EmptyGraphIsTheModeUnderSparseErdosRenyi) {
  const auto p = er_params(3, 1.0 / 3.0);
  const auto empty = graph_log_prob(p, LabeledGraph(p.universe));
  for (std::uint64_t mask = 1; mask < 8; ++mask) EXPECT_GT(empty, graph_log_prob(p, graph_from_mask(p.universe, mask)));
}

TEST(ProbabilityDetector, UniformHalf) {
  // Singletons with eps_i eps_j / sum = 0.5: four nodes of excess 1.5 give 1.5*1.5/6 = 0.375; use two.
  // A single community with density 0.5 and no excess is the direct route.
  const auto p = er_params(5, 0.5);
  auto rng = make_stream(1);
  for (int k = 0; k < 20; ++k) {
    const auto g = graph_from_mask(p.universe, rng() & 1023u);
    EXPECT_NEAR(graph_log_prob(p, g).value(), 10 * std::log(0.5), 1e-12);
  }
}

TEST(ProbabilityDetector, IsolatedNodeWithZeroProbabilities) {
  const auto p = params_of({{0}, {1}, {2}}, {0.5, 0.5, 0.5}, {0.0, 1.0, 1.0});
  const auto g = make_graph(p.universe, {{1, 2}});
  EXPECT_EQ(node_log_prob(p, g, 0).value(), 0.0);
  const auto bad = make_graph(p.universe, {{0, 1}});
  EXPECT_EQ(graph_log_prob(p, bad).value(), -kInf);
}

TEST(ProbabilityDetector, ForcedPairs) {
  const auto p = er_params(4, 1.0);
  const auto full = graph_from_mask(p.universe, 63);
  EXPECT_EQ(graph_log_prob(p, full).value(), 0.0);
  const auto missing = graph_from_mask(p.universe, 62);  // lacks (0,1)
  EXPECT_EQ(graph_log_prob(p, missing).value(), -kInf);
  EXPECT_EQ(node_log_prob(p, missing, 0).value(), -kInf);
  EXPECT_EQ(node_log_prob(p, missing, 2).value(), 0.0);
}

TEST(ProbabilityDetector, ExhaustiveNormalization) {
  auto rng = make_stream(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = mlad::testing::random_params(4, rng);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < 64; ++mask) total += graph_log_prob(p, graph_from_mask(p.universe, mask)).probability();
    EXPECT_NEAR(total, 1.0, 1e-12) << trial;
  }
}

TEST(ProbabilityDetector, DecompositionIdentities) {
  auto rng = make_stream(78);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = mlad::testing::random_params(10, rng);
    const auto g = sample_graph(p, rng);
    const ProbabilityModel model(p);
    const double whole = model.graph(g).value();
    const auto nodes = model.node_scores(g);
    EXPECT_NEAR(whole, 0.5 * std::accumulate(nodes.begin(), nodes.end(), 0.0), 1e-10);
    double by_comm = 0.0;
    for (const auto& c : p.partition.communities()) by_comm += model.subgraph(g, c).value();
    EXPECT_NEAR(whole, by_comm, 1e-10);
    std::vector<NodeIndex> all(10);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_NEAR(model.subgraph(g, all).value(), whole, 1e-10);
    EXPECT_EQ(model.subgraph(g, {}).value(), 0.0);
  }
}

TEST(ProbabilityDetector, EdgeListScoringMatchesGraphScoring) {
  auto rng = make_stream(79);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = mlad::testing::random_params(9, rng);
    const ProbabilityModel model(p);
    const auto g = graph_from_mask(p.universe, rng());
    std::vector<double> nodes(9);
    const double whole = model.score_edges(g.edges(), nodes);
    const double ref = model.graph(g).value();
    if (std::isinf(ref)) {
      EXPECT_EQ(whole, ref);
    } else {
      EXPECT_NEAR(whole, ref, 1e-10);
    }
    const auto ref_nodes = model.node_scores(g);
    for (std::size_t i = 0; i < 9; ++i) {
      if (std::isinf(ref_nodes[i])) {
        EXPECT_EQ(nodes[i], ref_nodes[i]);
      } else {
        EXPECT_NEAR(nodes[i], ref_nodes[i], 1e-10);
      }
    }
  }
}

TEST(ProbabilityDetector, RejectsForeignGraphsAndUnknownNodes) {
  const auto p = er_params(3, 0.5);
  EXPECT_THROW(graph_log_prob(p, LabeledGraph(NodeUniverse::numbered(4))), InvalidArgument);
  const std::vector<NodeIndex> bad{7};
  EXPECT_THROW(subgraph_log_prob(p, LabeledGraph(p.universe), bad), InvalidArgument);
}

TEST(StatisticsDetector, WorkedExample) {
  // Node 0 in a 4-node community (p = 0.8, lambda = 5, eps = 2.6) with all
  // three internal neighbours and two outside neighbours.
  const auto p = params_of({{0, 1, 2, 3}, {4}, {5}}, {0.8, 0.5, 0.5}, {5.0, 2.4, 2.4, 2.4, 1.0, 1.0});
  const auto g = make_graph(p.universe, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  const double expected = std::log(0.512 * std::exp(-2.6) * 2.6 * 2.6 / 2.0);
  EXPECT_NEAR(stats_node_log_prob(p, g, 0).value(), expected, 1e-12);
  EXPECT_NEAR(std::exp(expected), 0.1285349, 1e-7);
}

TEST(StatisticsDetector, DegenerateFactors) {
  // Node 0: p = 1 with both community neighbours present, no excess.
  const auto p = params_of({{0, 1, 2}, {3}}, {1.0, 0.5}, {2.0, 2.0, 2.0, 1.0});
  const auto g = make_graph(p.universe, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(stats_node_log_prob(p, g, 0).value(), 0.0);
  const auto with_outside = make_graph(p.universe, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
  EXPECT_EQ(stats_node_log_prob(p, with_outside, 0).value(), -kInf);
  const auto missing = make_graph(p.universe, {{0, 1}, {1, 2}});
  EXPECT_EQ(stats_node_log_prob(p, missing, 0).value(), -kInf);
  EXPECT_EQ(stats_node_pvalue_exact(p, g, 0), 1.0);
}

TEST(StatisticsDetector, SubgraphIsPlainSum) {
  auto rng = make_stream(80);
  const auto p = mlad::testing::random_params(8, rng);
  const auto g = sample_graph(p, rng);
  const StatisticsModel model(p);
  const std::vector<NodeIndex> s1{0, 2, 5}, s2{1, 7}, both{0, 2, 5, 1, 7};
  EXPECT_NEAR(model.subgraph(g, both).value(), model.subgraph(g, s1).value() + model.subgraph(g, s2).value(), 1e-12);
  const std::vector<NodeIndex> one{3};
  EXPECT_EQ(model.subgraph(g, one).value(), model.node(g, 3).value());
  EXPECT_EQ(model.subgraph(g, {}).value(), 0.0);
}

TEST(StatisticsDetector, NodeScoreTableMatchesModel) {
  auto rng = make_stream(81);
  const auto p = mlad::testing::random_params(10, rng);
  const StatisticsModel model(p);
  for (NodeIndex i = 0; i < 10; ++i) {
    const auto& nm = model.node_model(i);
    for (std::size_t a = 0; a < nm.community_size; ++a)
      for (std::size_t b = 0; b + nm.community_size <= 10; ++b) {
        const double ref = nm.joint(a, b).value();
        const double got = model.node_score(i, a, b);
        if (std::isinf(ref)) {
          EXPECT_EQ(got, ref);
        } else {
          EXPECT_NEAR(got, ref, 1e-12);
        }
      }
    EXPECT_EQ(model.node_score(i, nm.community_size, 0), -kInf);
    EXPECT_EQ(model.node_score(i, 0, 11 - nm.community_size), -kInf);
  }
}

TEST(StatisticsDetector, TruncatedPoissonIsNormalised) {
  NodeDegreeModel m{3, 0.4, 4.0, 6, true};
  double total = 0.0;
  for (std::size_t b = 0; b < 6; ++b) total += std::exp(m.log_poisson(b));
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(m.log_poisson(6), -kInf);
}

TEST(StatisticsDetector, ExactPvalueMatchesBruteForce) {
  NodeDegreeModel m{2, 0.5, 0.5, 10, false};
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 6; ++b) EXPECT_NEAR(m.pvalue(a, b), brute_pvalue(1, 0.5, 0.5, a, b), 1e-10) << a << "," << b;

  auto rng = make_stream(82);
  for (int trial = 0; trial < 30; ++trial) {
    const int size = 1 + static_cast<int>(rng() % 8);
    const double dens = uniform01(rng);
    const double eps = 8.0 * uniform01(rng);
    NodeDegreeModel nm{static_cast<std::size_t>(size), dens, eps, 40, false};
    const int a = static_cast<int>(rng() % size), b = static_cast<int>(rng() % 15);
    EXPECT_NEAR(nm.pvalue(a, b), brute_pvalue(size - 1, dens, eps, a, b), 1e-10);
  }
}

TEST(StatisticsDetector, ModeHasPvalueOne) {
  NodeDegreeModel m{5, 0.5, 3.5, 20, false};
  // Binomial(4, 0.5) mode 2; Poisson(3.5) mode 3.
  EXPECT_NEAR(m.pvalue(2, 3), 1.0, 1e-12);
}

TEST(MonteCarlo, RankExtremes) {
  const std::vector<double> s{-3.0, -2.0, -1.0, -2.0};
  EXPECT_DOUBLE_EQ(rank_pvalue(-kInf, s), 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(rank_pvalue(0.0, s), 1.0);
  EXPECT_DOUBLE_EQ(rank_pvalue(-2.0, s), 4.0 / 5.0);
  EXPECT_DOUBLE_EQ(rank_pvalue(-2.5, s), 2.0 / 5.0);
}

TEST(MonteCarlo, MonotoneAndInRange) {
  auto rng = make_stream(83);
  std::vector<double> s(200);
  for (auto& x : s) x = -10.0 * uniform01(rng);
  double prev = 0.0;
  for (double obs = -12.0; obs <= 1.0; obs += 0.25) {
    const double pv = rank_pvalue(obs, s);
    EXPECT_GT(pv, 0.0);
    EXPECT_LE(pv, 1.0);
    EXPECT_GE(pv, prev);
    prev = pv;
  }
}

TEST(MonteCarlo, EmptyGraphUnderSparseErdosRenyi) {
  const auto p = er_params(3, 1.0 / 3.0);
  const ProbabilityModel model(p);
  auto rng = make_stream(84);
  const GraphScore score = [&](const LabeledGraph& g) { return model.graph(g).value(); };
  const double observed = model.graph(LabeledGraph(p.universe)).value();
  EXPECT_NEAR(mc_pvalue(score, p, observed, 100000, rng), 1.0, 0.01);
  EXPECT_DOUBLE_EQ(mc_pvalue(score, p, -kInf, 50, rng), 1.0 / 51.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(score, p, 0.0, 50, rng), 1.0);
}

TEST(Baseline, SmallGraphs) {
  const auto empty = LabeledGraph(NodeUniverse::numbered(3));
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  const auto s0 = baseline_stats(empty, zero);
  EXPECT_EQ(s0.mean_degree, 0.0);
  EXPECT_EQ(s0.mean_clustering, 0.0);
  EXPECT_NEAR(s0.residual_spectral_norm, 0.0, 1e-12);

  const auto tri = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  const auto s1 = baseline_stats(tri, zero);
  EXPECT_EQ(s1.mean_degree, 2.0);
  EXPECT_EQ(s1.mean_clustering, 1.0);
  EXPECT_NEAR(s1.residual_spectral_norm, 2.0, 1e-7);

  const auto p = er_params(3, 1.0);
  EXPECT_NEAR(baseline_stats(tri, p).residual_spectral_norm, 0.0, 1e-12);
}

TEST(Baseline, ClusteringCoefficients) {
  // Path 0-1-2 plus triangle 2-3-4.
  const auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 4}});
  const auto c = clustering_coefficients(g);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_NEAR(c[2], 1.0 / 3.0, 1e-12);
  EXPECT_EQ(c[3], 1.0);
}

TEST(Baseline, PowerIterationMatchesEigenSolver) {
  auto rng = make_stream(85);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = 2.0 * uniform01(rng) - 1.0;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double ref = es.eigenvalues().cwiseAbs().maxCoeff();
    const auto r = spectral_norm(m);
    EXPECT_NEAR(r.value, ref, 1e-6) << trial;
  }
}

TEST(Baseline, GaussianPvalue) {
  GaussianBaselineState st;
  EXPECT_THROW(baseline_pvalue(st, {}), InvalidArgument);
  st.observe({1.0, 0.1, 1.0});
  st.observe({3.0, 0.3, 3.0});
  const double sd = std::sqrt(2.0);
  EXPECT_NEAR(st.stddev(0).value(), sd, 1e-12);
  EXPECT_NEAR(baseline_pvalue(st, {2.0, 0.2, 2.0}), 0.125, 1e-12);
  EXPECT_NEAR(baseline_pvalue(st, {2.0 + sd, 0.2, 2.0}), normal_cdf(1.0) * 0.25, 1e-12);
  EXPECT_NEAR(normal_cdf(1.0), 0.8413447, 1e-7);
  EXPECT_EQ(baseline_pvalue(st, {-kInf, 0.2, 2.0}), 0.0);

  GaussianBaselineState flat;
  flat.observe({1.0, 0.1, 1.0});
  flat.observe({1.0, 0.2, 1.0});
  EXPECT_THROW(baseline_pvalue(flat, {1.0, 0.1, 1.0}), InvalidArgument);
}

TEST(Baseline, WelfordMatchesTwoPass) {
  auto rng = make_stream(86);
  std::vector<BaselineStats> xs(50);
  GaussianBaselineState st;
  for (auto& x : xs) {
    x = {10.0 * uniform01(rng), uniform01(rng), 5.0 + uniform01(rng)};
    st.observe(x);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    double mean = 0.0, var = 0.0;
    for (const auto& x : xs) mean += x.as_array()[k];
    mean /= 50;
    for (const auto& x : xs) var += std::pow(x.as_array()[k] - mean, 2);
    var /= 49;
    EXPECT_NEAR(st.mean(k), mean, 1e-12);
    EXPECT_NEAR(*st.stddev(k), std::sqrt(var), 1e-12);
  }
  const auto back = GaussianBaselineState::from_json(st.to_json());
  EXPECT_EQ(back.count(), st.count());
  EXPECT_EQ(back.mean(1), st.mean(1));
  EXPECT_EQ(*back.stddev(2), *st.stddev(2));
}

TEST(LogProbType, RejectsNan) {
  EXPECT_THROW(LogProb(std::nan("")), InvalidArgument);
  EXPECT_TRUE(LogProb::impossible().is_impossible());
  EXPECT_TRUE(score_leq(-1.0, -1.0 + 1e-12));
  EXPECT_TRUE(score_leq(-1.0 + 1e-12, -1.0));
  EXPECT_FALSE(score_leq(-0.9, -1.0));
  EXPECT_TRUE(score_leq(-kInf, -kInf));
}
