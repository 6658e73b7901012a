#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "synwalk/graph.hpp"
#include "synwalk/partition.hpp"
#include "synwalk/random.hpp"
#include "synwalk/walk.hpp"

namespace synwalk::testing {

inline Graph triangle() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

inline Graph two_triangles() {
  return Graph(6, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}});
}

inline Partition two_triangles_truth() { return Partition(std::vector<int>{0, 0, 0, 1, 1, 1}); }

// Disjoint cliques. With self_loop > 0 every node also gets a self-loop of
// that weight; 0.5 makes every row of P uniform over the node's own clique.
inline Graph cliques(const std::vector<std::size_t>& sizes, double self_loop = 0.0) {
  std::vector<Edge> edges;
  NodeId first = 0;
  for (std::size_t s : sizes) {
    for (NodeId a = first; a < first + s; ++a) {
      if (self_loop > 0.0) edges.push_back({a, a, self_loop});
      for (NodeId b = a + 1; b < first + s; ++b) edges.push_back({a, b, 1.0});
    }
    first += static_cast<NodeId>(s);
  }
  return Graph(first, edges);
}

inline Partition clique_truth(const std::vector<std::size_t>& sizes) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < sizes.size(); ++c) labels.insert(labels.end(), sizes[c], static_cast<int>(c));
  return Partition(labels);
}

// G(n, p) resampled from one generator until connected.
inline Graph random_connected(std::uint64_t seed, std::size_t n, double p) {
  Rng rng(seed);
  while (true) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (uniform01(rng) < p) edges.push_back({u, v, 1.0});
      }
    }
    Graph g(n, edges);
    if (connected_components(g).size() == 1) return g;
  }
}

inline Partition random_partition(Rng& rng, std::size_t n) {
  const std::uint64_t k = 1 + uniform_below(rng, n);
  std::vector<int> labels(n);
  for (int& l : labels) l = static_cast<int>(uniform_below(rng, k));
  return Partition(labels);
}

// Oracles below work on the dense transition matrix only, so they share no
// code path with the library's aggregate computations.

inline double xlogy(double x, double ratio) { return x > 0.0 ? x * std::log2(ratio) : 0.0; }

inline double oracle_node_mi(const RandomWalk& w) {
  const DenseMatrix P = w.transitions.to_dense();
  double mi = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    for (std::size_t b = 0; b < w.size(); ++b) {
      const double pab = P(a, b);
      if (pab > 0.0) mi += w.stationary[a] * pab * std::log2(pab / w.stationary[b]);
    }
  }
  return mi;
}

struct OracleClusters {
  std::vector<double> mass;
  std::vector<std::vector<double>> joint;
};

inline OracleClusters oracle_clusters(const RandomWalk& w, const Partition& y) {
  const DenseMatrix P = w.transitions.to_dense();
  const std::size_t k = y.cluster_count();
  OracleClusters oc{std::vector<double>(k, 0.0), std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0))};
  for (std::size_t a = 0; a < w.size(); ++a) {
    const auto i = static_cast<std::size_t>(y.cluster_of(a));
    oc.mass[i] += w.stationary[a];
    for (std::size_t b = 0; b < w.size(); ++b) {
      oc.joint[i][static_cast<std::size_t>(y.cluster_of(b))] += w.stationary[a] * P(a, b);
    }
  }
  return oc;
}

// J straight from its definition: sum_i p_i KLD([q, 1-q] || [p_i, 1-p_i]).
inline double oracle_synwalk(const RandomWalk& w, const Partition& y) {
  const OracleClusters oc = oracle_clusters(w, y);
  if (oc.mass.size() == 1) return 0.0;
  double j = 0.0;
  for (std::size_t i = 0; i < oc.mass.size(); ++i) {
    const double p = oc.mass[i];
    const double q = oc.joint[i][i] / p;
    j += p * (xlogy(q, q / p) + xlogy(1.0 - q, (1.0 - q) / (1.0 - p)));
  }
  return j;
}

inline double oracle_cluster_mi(const RandomWalk& w, const Partition& y) {
  const OracleClusters oc = oracle_clusters(w, y);
  double mi = 0.0;
  for (std::size_t i = 0; i < oc.mass.size(); ++i) {
    for (std::size_t j = 0; j < oc.mass.size(); ++j) {
      mi += xlogy(oc.joint[i][j], oc.joint[i][j] / (oc.mass[i] * oc.mass[j]));
    }
  }
  return mi;
}

}  // namespace synwalk::testing
