#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "synwalk/graph.hpp"
#include "synwalk/partition.hpp"
#include "synwalk/walk.hpp"

namespace synwalk {

enum class Criterion { synwalk, modularity, relaxed_mi };

std::string_view to_string(Criterion c);
// Throws std::invalid_argument on unknown names.
Criterion parse_criterion(std::string_view name);

// Parameters of the structured synthetic walker: pick the next node inside
// a cluster from r, leave the current cluster with probability s, and pick the
// new cluster from u renormalized over the other clusters.
struct SyntheticWalkParams {
  std::vector<double> r;  // r[node], a distribution over each cluster's members
  std::vector<double> s;  // per cluster
  std::vector<double> u;  // per cluster
};

struct ObjectiveReport {
  double value = 0.0;               // J(Y) in bits
  std::vector<double> per_cluster;  // p_i * KLD(p_{i->i} || p_i)
  double bound_cluster_mi = 0.0;    // I(Y_t; Y_t-1)
  double bound_node_mi = 0.0;       // I(X_t; X_t-1)

  std::string to_json() const;
};

// One cluster's contribution p_i * KLD(f/p_i || p_i) from its stationary mass
// p_i and self flow f = p_ii. Zero for p_i in {0, 1}.
double synwalk_term(double mass, double self_flow);

// Sum of per-cluster terms; throws DataError for a cluster with zero mass.
double synwalk_value(const ClusterAggregates& ca);
ObjectiveReport synwalk_objective(const ClusterAggregates& ca, double node_mutual_info);
ObjectiveReport synwalk_report(const RandomWalk& walk, const Partition& y);

SyntheticWalkParams optimal_parameters(const RandomWalk& walk, const Partition& y);

// Throws DataError when a cluster must be left (s > 0) but u assigns it all
// mass, which makes the cluster-choice normalization undefined.
DenseMatrix synthetic_transition_matrix(const Partition& y, const SyntheticWalkParams& params);

struct IdentityCheck {
  double lhs;  // KLD rate of P against the optimally parameterized synthetic walk
  double rhs;  // I(X_t; X_t-1) - J(Y)
};

IdentityCheck objective_identity_check(const RandomWalk& walk, const Partition& y);

// Newman modularity; unweighted undirected graphs only (UnsupportedInput
// otherwise).
double modularity(const Graph& g, const Partition& y);

double relaxed_mi_objective(const ClusterAggregates& ca);

// Value of the chosen criterion from cluster aggregates. Modularity uses the
// flow form sum_i (p_ii - p_i^2), which equals modularity() on unweighted
// undirected graphs.
double criterion_value(Criterion c, const ClusterAggregates& ca);

}  // namespace synwalk
