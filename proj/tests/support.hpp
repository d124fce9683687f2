#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "mlad/gbter.hpp"
#include "mlad/graph.hpp"
#include "mlad/partition.hpp"
#include "mlad/random.hpp"

namespace mlad::testing {

inline LabeledGraph make_graph(std::size_t n, std::initializer_list<std::pair<NodeIndex, NodeIndex>> edges) {
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.emplace_back(a, b);
  return LabeledGraph(NodeUniverse::numbered(n), std::move(es));
}

inline LabeledGraph make_graph(const UniversePtr& u, std::initializer_list<std::pair<NodeIndex, NodeIndex>> edges) {
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.emplace_back(a, b);
  return LabeledGraph(u, std::move(es));
}

/// Graph whose edges are the set bits of `mask` over pairs (0,1),(0,2),...,(n-2,n-1).
inline LabeledGraph graph_from_mask(const UniversePtr& u, std::uint64_t mask) {
  std::vector<Edge> es;
  std::size_t bit = 0;
  for (NodeIndex i = 0; i < u->size(); ++i)
    for (NodeIndex j = i + 1; j < u->size(); ++j, ++bit)
      if (mask >> bit & 1u) es.emplace_back(i, j);
  return LabeledGraph(u, std::move(es));
}

inline GbterParams params_of(std::vector<std::vector<NodeIndex>> comms, std::vector<double> density,
                             std::vector<double> degree) {
  GbterParams p;
  p.universe = NodeUniverse::numbered(degree.size());
  p.partition = Partition(degree.size(), std::move(comms));
  p.density = std::move(density);
  p.expected_degree = std::move(degree);
  return p;
}

/// ER(n, p) as a single community whose expected degrees leave no excess.
inline GbterParams er_params(std::size_t n, double p) {
  std::vector<NodeIndex> all(n);
  for (NodeIndex i = 0; i < n; ++i) all[i] = i;
  return params_of({all}, {p}, std::vector<double>(n, p * static_cast<double>(n - 1)));
}

/// Random params: random community split, densities in [0,1], degrees in [0, n).
inline GbterParams random_params(std::size_t n, RandomStream& rng) {
  GbterParams p;
  p.universe = NodeUniverse::numbered(n);
  std::vector<std::size_t> assignment(n);
  const std::size_t k = 1 + rng() % std::max<std::size_t>(1, n / 2);
  for (auto& a : assignment) a = rng() % k;
  p.partition = Partition::from_assignment(assignment);
  for (std::size_t c = 0; c < p.partition.num_communities(); ++c) p.density.push_back(uniform01(rng));
  for (std::size_t i = 0; i < n; ++i) p.expected_degree.push_back(uniform01(rng) * static_cast<double>(n - 1));
  return p;
}

}  // namespace mlad::testing
