#include "mlad/monte_carlo.hpp"

#include <vector>

namespace mlad {

double rank_pvalue(double observed, std::span<const double> sample_scores) {
  std::size_t below = 0;
  for (double s : sample_scores)
    if (score_leq(s, observed)) ++below;
  return static_cast<double>(below + 1) / static_cast<double>(sample_scores.size() + 1);
}

double mc_pvalue(const GraphScore& score, const GbterParams& params, double observed, std::size_t num_samples,
                 RandomStream& rng) {
  if (num_samples == 0) throw InvalidArgument("Monte-Carlo p-value needs at least one sample");
  const GbterSampler sampler(params);
  std::vector<double> scores;
  scores.reserve(num_samples);
  for (std::size_t k = 0; k < num_samples; ++k) scores.push_back(score(sampler(rng)));
  return rank_pvalue(observed, scores);
}

}  // namespace mlad
