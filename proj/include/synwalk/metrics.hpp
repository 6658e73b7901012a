#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <vector>

#include "synwalk/graph.hpp"
#include "synwalk/partition.hpp"

namespace synwalk {

// Shared-node counts between a reference ("true") and a predicted partition.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> counts;  // [true][pred]
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::size_t n = 0;
};

ContingencyTable contingency(const Partition& truth, const Partition& pred);

// Adjusted mutual information with max(H_a, H_b) normalization and the
// hypergeometric expected mutual information. Identical single-cluster (or
// identical all-singleton) partitions give 1.
double ami(const Partition& a, const Partition& b);

// Greedy cluster matching: repeatedly pairs the unmatched true/predicted
// clusters with the largest overlap, smallest (row, col) first on ties.
using ClusterMapping = std::map<int, int>;
ClusterMapping greedy_match(const ContingencyTable& table);
ClusterMapping greedy_match(const Partition& truth, const Partition& pred);

struct Classification {
  std::vector<NodeId> correct;
  std::vector<NodeId> misclassified;
};

Classification classify_nodes(const Partition& truth, const Partition& pred,
                              const ClusterMapping& mapping);

// Fraction of a node's links that leave its cluster. Requires an unweighted
// undirected graph and positive degree.
double mixing_parameter(const Graph& g, const Partition& y, NodeId node);

// Normalized local degree: degree over C(|cluster|, 2). Cluster size >= 2.
double nld(const Graph& g, const Partition& y, NodeId node);

struct ClusterStatsRow {
  int cluster = 0;
  std::size_t size = 0;
  double density = 0.0;
  double clustering_coefficient = 0.0;
  double conductance = 0.0;
  double cut_ratio = 0.0;
  bool cut_ratio_undefined = false;  // |S| = n
};

std::vector<ClusterStatsRow> cluster_stats(const Graph& g, const Partition& y,
                                           std::size_t min_size = 3);

void write_cluster_stats_csv(const std::vector<ClusterStatsRow>& rows, std::ostream& out);

}  // namespace synwalk
