#pragma once

#include <array>
#include <optional>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "mlad/gbter.hpp"

namespace mlad {

/// Graph statistics used by the Gaussian baseline.
struct BaselineStats {
  double mean_degree = 0.0;             // X1
  double mean_clustering = 0.0;         // X2
  double residual_spectral_norm = 0.0;  // X3

  std::array<double, 3> as_array() const { return {mean_degree, mean_clustering, residual_spectral_norm}; }
};

/// Local clustering coefficient of every node (0 below degree 2).
std::vector<double> clustering_coefficients(const LabeledGraph& g);

Eigen::MatrixXd adjacency_matrix(const LabeledGraph& g);

struct PowerIterationResult {
  double value = 0.0;  // max |eigenvalue|
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue modulus of a symmetric matrix by power iteration.
PowerIterationResult spectral_norm(const Eigen::MatrixXd& m, double rel_tol = 1e-8, int max_iters = 100000);

BaselineStats baseline_stats(const LabeledGraph& g, const Eigen::MatrixXd& expected_adjacency);
BaselineStats baseline_stats(const LabeledGraph& g, const GbterParams& params);

/// Running mean and variance (Welford) of the three baseline statistics.
class GaussianBaselineState {
public:
  void observe(const BaselineStats& x);

  std::size_t count() const noexcept { return count_; }
  double mean(std::size_t k) const { return mean_.at(k); }
  /// Sample standard deviation; empty with fewer than two observations.
  std::optional<double> stddev(std::size_t k) const;

  nlohmann::json to_json() const;
  static GaussianBaselineState from_json(const nlohmann::json& doc);

private:
  std::size_t count_ = 0;
  std::array<double, 3> mean_{};
  std::array<double, 3> m2_{};
};

/// Product of the three lower-tail normal probabilities P(X_k <= x_k).
/// Throws InvalidArgument when any standard deviation is zero or undefined.
double baseline_pvalue(const GaussianBaselineState& state, const BaselineStats& x);

double normal_cdf(double z);

}  // namespace mlad
