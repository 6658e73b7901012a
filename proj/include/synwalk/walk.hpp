#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "synwalk/graph.hpp"
#include "synwalk/partition.hpp"

namespace synwalk {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Transition {
  NodeId target;
  double probability;
};

// Sparse row-stochastic matrix in CSR form.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  // rows[i] lists the nonzero transitions out of state i.
  explicit TransitionMatrix(const std::vector<std::vector<Transition>>& rows);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const Transition> row(std::size_t i) const {
    return std::span<const Transition>(entries_).subspan(offsets_[i],
                                                         offsets_[i + 1] - offsets_[i]);
  }
  double at(std::size_t i, std::size_t j) const;
  DenseMatrix to_dense() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Transition> entries_;
};

// Network-induced random walk: transition matrix plus invariant distribution.
struct RandomWalk {
  TransitionMatrix transitions;
  std::vector<double> stationary;

  std::size_t size() const { return stationary.size(); }
};

// Undirected graphs use the closed form p ∝ degree (also on disconnected
// graphs). Directed graphs must be strongly connected; p is then found by
// power iteration. Throws DataError on zero-degree nodes and
// NonErgodicError on reducible or non-converging directed chains.
RandomWalk transition_matrix(const Graph& g);

struct PowerIterationOptions {
  std::size_t max_iterations = 100000;
  double tolerance = 1e-12;  // L1 change between iterates
};

// Lazy power iteration ((P + I) / 2 has the same invariant distribution and
// is aperiodic) from the uniform distribution.
std::vector<double> stationary_by_power_iteration(const TransitionMatrix& P,
                                                  PowerIterationOptions options = {});

// Stationary cluster masses p_i and joint flows p_ij = Pr{Y_t=i, Y_t+1=j}.
struct ClusterAggregates {
  std::vector<double> mass;
  DenseMatrix joint;

  std::size_t cluster_count() const { return mass.size(); }
  // p_{i->i} = p_ii / p_i
  double stay_probability(std::size_t i) const { return joint(i, i) / mass[i]; }
};

ClusterAggregates cluster_aggregates(const RandomWalk& walk, const Partition& y);

// Stationary node masses with the joint flow p_a * p_{a->b} per link. This is
// the representation the optimizer aggregates: collapsing clusters into
// super-nodes keeps every cluster-level quantity exact.
class FlowNetwork {
 public:
  struct Arc {
    NodeId node;
    double flow;
  };

  explicit FlowNetwork(const RandomWalk& walk);
  FlowNetwork(std::vector<double> mass, const std::vector<std::vector<Arc>>& out);

  std::size_t size() const { return mass_.size(); }
  double mass(NodeId v) const { return mass_[v]; }
  std::span<const double> masses() const { return mass_; }
  std::span<const Arc> out_arcs(NodeId v) const {
    return std::span<const Arc>(out_).subspan(out_off_[v], out_off_[v + 1] - out_off_[v]);
  }
  std::span<const Arc> in_arcs(NodeId v) const {
    return std::span<const Arc>(in_).subspan(in_off_[v], in_off_[v + 1] - in_off_[v]);
  }
  double self_flow(NodeId v) const { return self_[v]; }

  // One super-node per cluster; intra-cluster flow becomes the self flow.
  FlowNetwork aggregate(const Partition& y) const;

 private:
  void build(const std::vector<std::vector<Arc>>& out);

  std::vector<double> mass_;
  std::vector<double> self_;
  std::vector<std::size_t> out_off_;
  std::vector<Arc> out_;
  std::vector<std::size_t> in_off_;
  std::vector<Arc> in_;
};

ClusterAggregates cluster_aggregates(const FlowNetwork& net, const Partition& y);

// I(X_t; X_t-1) in bits.
double mutual_info_nodes(const RandomWalk& walk);

// I(Y_t; Y_t-1) in bits.
double mutual_info_clusters(const ClusterAggregates& ca);

// Kullback-Leibler divergence rate of P against Q in bits, weighted by p.
// Returns +infinity when Q vanishes on a transition P uses with positive
// probability. Throws std::invalid_argument on dimension mismatch.
double kld_rate(const TransitionMatrix& P, const DenseMatrix& Q, std::span<const double> p);
double kld_rate(const DenseMatrix& P, const DenseMatrix& Q, std::span<const double> p);

// Binary KL divergence KLD([s, 1-s] || [t, 1-t]) in bits; requires t in (0, 1).
double binary_kld(double s, double t);

}  // namespace synwalk
