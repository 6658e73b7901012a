#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "synwalk/partition.hpp"

namespace synwalk {

using NodeId = std::uint32_t;

struct Edge {
  NodeId source;
  NodeId target;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  double weight;
};

// Original node label <-> dense index. Identity when the graph was not read
// from a file.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<std::uint64_t> labels);

  static LabelMap identity(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  std::uint64_t label(NodeId node) const { return labels_.at(node); }
  // Throws DataError for unknown labels.
  NodeId index(std::uint64_t label) const;
  bool contains(std::uint64_t label) const { return index_.contains(label); }

  // Two-column text "original dense", one line per node.
  void write(std::ostream& out) const;

 private:
  std::vector<std::uint64_t> labels_;
  std::unordered_map<std::uint64_t, NodeId> index_;
};

// Weighted graph over dense node indices 0..n-1. Immutable after
// construction. Undirected edges are stored once as (min, max); duplicate
// pairs are merged by summing their weights.
//
// Adjacency follows the weight-matrix convention used by the random walk:
// an undirected self-loop of weight w appears as a single neighbor entry of
// weight 2w, so degree() equals the row sum of the adjacency.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges, bool directed = false,
        LabelMap labels = {});

  std::size_t size() const { return n_; }
  bool directed() const { return directed_; }
  std::span<const Edge> edges() const { return edges_; }
  const LabelMap& labels() const { return labels_; }

  std::span<const Neighbor> out_neighbors(NodeId node) const;
  // For undirected graphs identical to out_neighbors.
  std::span<const Neighbor> in_neighbors(NodeId node) const;

  // Sum of incident (outgoing, if directed) weights; self-loops count twice
  // on undirected graphs.
  double degree(NodeId node) const;

  // True when every edge has weight exactly 1.
  bool unweighted() const;
  bool has_self_loops() const;

 private:
  void check_node(NodeId node) const;

  std::size_t n_;
  bool directed_;
  std::vector<Edge> edges_;
  LabelMap labels_;
  std::vector<std::size_t> out_offsets_;
  std::vector<Neighbor> out_adj_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Neighbor> in_adj_;
  std::vector<double> degree_;
};

// Parses "u v" / "u v w" lines; '#' starts a comment line. Labels are
// remapped to dense indices in order of first appearance.
Graph load_edge_list(std::istream& in, bool directed = false);

// Writes "u v w" lines using the original labels.
void write_edge_list(const Graph& g, std::ostream& out);

double density(const Graph& g);

std::vector<std::vector<NodeId>> connected_components(const Graph& g);

struct PlantedPartitionParams {
  std::size_t n = 0;
  double k_avg = 0.0;
  double mu = 0.0;
  std::vector<std::size_t> community_sizes;
  std::uint64_t seed = 0;
};

struct PlantedGraph {
  Graph graph;
  Partition truth;
};

// Block random graph: intra-community pairs are linked with probability
// (1-mu)*k_avg/(s-1), inter-community pairs with the probability that makes
// the mean external degree mu*k_avg. Deterministic given the seed.
PlantedGraph planted_partition(const PlantedPartitionParams& params);

}  // namespace synwalk
