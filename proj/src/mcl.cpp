#include <numeric>

#include "mlad/error.hpp"
#include "mlad/fitting.hpp"

namespace mlad {

namespace {

void normalize_columns(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double s = m.col(j).sum();
    if (s > 0.0) {
      m.col(j) /= s;
    } else {
      // A column with no mass keeps its walker in place.
      m.col(j).setZero();
      m(j, j) = 1.0;
    }
  }
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

Partition interpret(const Eigen::MatrixXd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> attractor(n);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < m.rows(); ++i)
      if (m(i, j) > m(best, j)) best = i;
    attractor[j] = static_cast<std::size_t>(best);
  }
  DisjointSets sets(n);
  for (std::size_t j = 0; j < n; ++j) sets.unite(j, attractor[j]);
  std::vector<std::size_t> assignment(n);
  for (std::size_t i = 0; i < n; ++i) assignment[i] = sets.find(i);
  return Partition::from_assignment(assignment);
}

}  // namespace

void MclConfig::validate() const {
  if (expansion < 2) throw InvalidArgument("MCL expansion must be >= 2");
  if (!(inflation > 1.0)) throw InvalidArgument("MCL inflation must be > 1");
  if (!(self_loop_weight >= 0.0)) throw InvalidArgument("MCL self-loop weight must be >= 0");
  if (!(prune_threshold >= 0.0 && prune_threshold < 1.0)) throw InvalidArgument("MCL prune threshold must be in [0,1)");
  if (max_iters < 1) throw InvalidArgument("MCL max_iters must be >= 1");
  if (!(convergence_eps > 0.0)) throw InvalidArgument("MCL convergence eps must be > 0");
}

MclResult markov_cluster(const WeightedAggregate& w, const MclConfig& cfg) {
  cfg.validate();
  const auto n = w.weights.rows();
  if (n == 0) throw InvalidArgument("markov clustering needs a non-empty universe");
  if (w.weights.cols() != n) throw InvalidArgument("weight matrix must be square");
  if ((w.weights.array() < 0.0).any()) throw InvalidArgument("negative edge weight");

  // Loops are weighted relative to the heaviest pair, so count and
  // exponentially weighted aggregates behave alike.
  Eigen::MatrixXd m = w.weights;
  m.diagonal().setZero();
  const double heaviest = m.maxCoeff();
  if (heaviest > 0.0) m /= heaviest;
  m.diagonal().setConstant(cfg.self_loop_weight);
  normalize_columns(m);

  MclResult result;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Eigen::MatrixXd prev = m;
    Eigen::MatrixXd expanded = m;
    for (int k = 1; k < cfg.expansion; ++k) expanded = expanded * m;
    m = expanded.array().pow(cfg.inflation).matrix();
    normalize_columns(m);
    m = (m.array() < cfg.prune_threshold).select(0.0, m);
    normalize_columns(m);
    result.iterations = it;
    if ((m - prev).cwiseAbs().maxCoeff() < cfg.convergence_eps) {
      result.converged = true;
      break;
    }
  }
  result.partition = interpret(m);
  return result;
}

}  // namespace mlad
