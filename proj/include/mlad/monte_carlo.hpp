#pragma once

#include <functional>
#include <span>

#include "mlad/gbter.hpp"
#include "mlad/logprob.hpp"

namespace mlad {

/// Add-one rank p-value: (#{samples <= observed} + 1) / (M + 1), ties
/// counted as "<=" up to kTieTolerance.
double rank_pvalue(double observed, std::span<const double> sample_scores);

using GraphScore = std::function<double(const LabeledGraph&)>;

/// Samples `num_samples` graphs from params and ranks the observed score
/// among their scores.
double mc_pvalue(const GraphScore& score, const GbterParams& params, double observed, std::size_t num_samples,
                 RandomStream& rng);

}  // namespace mlad
