#include "mlad/baseline.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mlad/error.hpp"
#include "mlad/random.hpp"

namespace mlad {

std::vector<double> clustering_coefficients(const LabeledGraph& g) {
  std::vector<double> cc(g.num_nodes(), 0.0);
  for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
    const auto nb = g.neighbors(i);
    const std::size_t d = nb.size();
    if (d < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b)
        if (g.has_edge(nb[a], nb[b])) ++links;
    cc[i] = 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
  }
  return cc;
}

Eigen::MatrixXd adjacency_matrix(const LabeledGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) a(e.first, e.second) = a(e.second, e.first) = 1.0;
  return a;
}

PowerIterationResult spectral_norm(const Eigen::MatrixXd& m, double rel_tol, int max_iters) {
  PowerIterationResult r;
  if (m.rows() == 0 || m.isZero(0.0)) {
    r.converged = true;
    return r;
  }
  // Fixed pseudo-random start keeps the result deterministic while avoiding
  // starts orthogonal to the dominant eigenvector.
  auto rng = make_stream(0x5eed);
  Eigen::VectorXd x(m.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform01(rng) + 0.5;
  x.normalize();

  // For unit x, ||M x|| increases monotonically to max |lambda| for symmetric M,
  // including the case of a +/- pair of dominant eigenvalues.
  double prev = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::VectorXd y = m * x;
    const double norm = y.norm();
    r.iterations = it;
    r.value = norm;
    if (norm == 0.0) {
      r.converged = true;
      break;
    }
    x = y / norm;
    if (it > 1 && std::abs(norm - prev) <= rel_tol * norm) {
      r.converged = true;
      break;
    }
    prev = norm;
  }
  return r;
}

BaselineStats baseline_stats(const LabeledGraph& g, const Eigen::MatrixXd& expected_adjacency) {
  const auto n = g.num_nodes();
  if (static_cast<std::size_t>(expected_adjacency.rows()) != n || expected_adjacency.cols() != expected_adjacency.rows())
    throw InvalidArgument("expected adjacency does not match graph size");
  BaselineStats x;
  if (n == 0) return x;
  x.mean_degree = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n);
  const auto cc = clustering_coefficients(g);
  double s = 0.0;
  for (double c : cc) s += c;
  x.mean_clustering = s / static_cast<double>(n);
  x.residual_spectral_norm = spectral_norm(adjacency_matrix(g) - expected_adjacency).value;
  return x;
}

BaselineStats baseline_stats(const LabeledGraph& g, const GbterParams& params) {
  return baseline_stats(g, expected_adjacency(params));
}

void GaussianBaselineState::observe(const BaselineStats& x) {
  ++count_;
  const auto v = x.as_array();
  for (std::size_t k = 0; k < 3; ++k) {
    const double delta = v[k] - mean_[k];
    mean_[k] += delta / static_cast<double>(count_);
    m2_[k] += delta * (v[k] - mean_[k]);
  }
}

std::optional<double> GaussianBaselineState::stddev(std::size_t k) const {
  if (k >= 3) throw InvalidArgument("baseline statistic index out of range");
  if (count_ < 2) return std::nullopt;
  return std::sqrt(std::max(0.0, m2_[k]) / static_cast<double>(count_ - 1));
}

nlohmann::json GaussianBaselineState::to_json() const {
  return {{"count", count_}, {"mean", mean_}, {"m2", m2_}};
}

GaussianBaselineState GaussianBaselineState::from_json(const nlohmann::json& doc) {
  GaussianBaselineState s;
  s.count_ = doc.at("count").get<std::size_t>();
  s.mean_ = doc.at("mean").get<std::array<double, 3>>();
  s.m2_ = doc.at("m2").get<std::array<double, 3>>();
  return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double baseline_pvalue(const GaussianBaselineState& state, const BaselineStats& x) {
  const auto v = x.as_array();
  double p = 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto sd = state.stddev(k);
    if (!sd) throw InvalidArgument("baseline needs at least two training observations");
    if (!(*sd > 0.0)) throw InvalidArgument("baseline statistic has zero training variance");
    p *= normal_cdf((v[k] - state.mean(k)) / *sd);
  }
  return p;
}

}  // namespace mlad
