#include "synwalk/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "synwalk/error.hpp"

namespace synwalk {

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::synwalk:
      return "synwalk";
    case Criterion::modularity:
      return "modularity";
    case Criterion::relaxed_mi:
      return "relaxed_mi";
  }
  return "unknown";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "synwalk") return Criterion::synwalk;
  if (name == "modularity") return Criterion::modularity;
  if (name == "relaxed_mi") return Criterion::relaxed_mi;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

std::string ObjectiveReport::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["per_cluster"] = per_cluster;
  j["bound_cluster_mi"] = bound_cluster_mi;
  j["bound_node_mi"] = bound_node_mi;
  return j.dump();
}

double synwalk_term(double mass, double self_flow) {
  if (mass <= 0.0) return 0.0;
  const double stay = std::max(self_flow, 0.0);
  const double leave = mass - stay;
  const double rest = 1.0 - mass;
  double term = 0.0;
  if (stay > 0.0) term += stay * std::log2(stay / (mass * mass));
  if (leave > 0.0 && rest > 0.0) term += leave * std::log2(leave / (mass * rest));
  return term;
}

namespace {

std::vector<double> synwalk_terms(const ClusterAggregates& ca) {
  const std::size_t k = ca.cluster_count();
  std::vector<double> terms(k, 0.0);
  if (k == 1) return terms;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(ca.mass[i] > 0.0)) {
      throw DataError("cluster " + std::to_string(i) + " has zero stationary mass");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double pi = ca.mass[i];
    // Rounding can push p_ii / p_i a hair past 1.
    const double stay = std::min(ca.stay_probability(i), 1.0);
    terms[i] = pi * binary_kld(stay, pi);
  }
  return terms;
}

}  // namespace

double synwalk_value(const ClusterAggregates& ca) {
  double total = 0.0;
  for (double t : synwalk_terms(ca)) total += t;
  return total;
}

ObjectiveReport synwalk_objective(const ClusterAggregates& ca, double node_mutual_info) {
  ObjectiveReport report;
  report.per_cluster = synwalk_terms(ca);
  for (double t : report.per_cluster) report.value += t;
  report.bound_cluster_mi = mutual_info_clusters(ca);
  report.bound_node_mi = node_mutual_info;
  return report;
}

ObjectiveReport synwalk_report(const RandomWalk& walk, const Partition& y) {
  return synwalk_objective(cluster_aggregates(walk, y), mutual_info_nodes(walk));
}

SyntheticWalkParams optimal_parameters(const RandomWalk& walk, const Partition& y) {
  const ClusterAggregates ca = cluster_aggregates(walk, y);
  const std::size_t k = ca.cluster_count();
  SyntheticWalkParams params;
  params.r.resize(walk.size());
  params.s.resize(k);
  params.u = ca.mass;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(ca.mass[i] > 0.0)) {
      throw DataError("cluster " + std::to_string(i) + " has zero stationary mass");
    }
    params.s[i] = std::max(0.0, (ca.mass[i] - ca.joint(i, i)) / ca.mass[i]);
  }
  // A lone cluster has nowhere to go; do not let rounding suggest otherwise.
  if (k == 1) params.s[0] = 0.0;
  for (std::size_t a = 0; a < walk.size(); ++a) {
    params.r[a] = walk.stationary[a] / ca.mass[static_cast<std::size_t>(y.cluster_of(a))];
  }
  return params;
}

DenseMatrix synthetic_transition_matrix(const Partition& y, const SyntheticWalkParams& params) {
  const std::size_t n = y.size();
  const std::size_t k = y.cluster_count();
  if (params.r.size() != n || params.s.size() != k || params.u.size() != k) {
    throw std::invalid_argument("synthetic walk parameters do not match the partition");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (params.s[i] > 0.0 && !(params.u[i] < 1.0)) {
      throw DataError("cluster " + std::to_string(i) +
                      " has u = 1 but a positive leave probability");
    }
  }
  DenseMatrix q(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(y.cluster_of(a));
    const double stay = 1.0 - params.s[i];
    const double leave = params.s[i] > 0.0 ? params.s[i] / (1.0 - params.u[i]) : 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const auto j = static_cast<std::size_t>(y.cluster_of(b));
      q(a, b) = i == j ? params.r[b] * stay : params.r[b] * leave * params.u[j];
    }
  }
  return q;
}

IdentityCheck objective_identity_check(const RandomWalk& walk, const Partition& y) {
  const DenseMatrix q = synthetic_transition_matrix(y, optimal_parameters(walk, y));
  const double lhs = kld_rate(walk.transitions, q, walk.stationary);
  const double rhs = mutual_info_nodes(walk) - synwalk_value(cluster_aggregates(walk, y));
  return {lhs, rhs};
}

double modularity(const Graph& g, const Partition& y) {
  if (g.directed() || !g.unweighted()) {
    throw UnsupportedInput("modularity is defined for unweighted undirected graphs only");
  }
  if (y.size() != g.size()) throw DataError("partition does not match graph");
  const auto links = static_cast<double>(g.edges().size());
  if (links == 0.0) throw DataError("modularity needs at least one link");
  const std::size_t k = y.cluster_count();
  std::vector<double> internal(k, 0.0);
  std::vector<double> degree(k, 0.0);
  for (const Edge& e : g.edges()) {
    if (y.cluster_of(e.source) == y.cluster_of(e.target)) {
      internal[static_cast<std::size_t>(y.cluster_of(e.source))] += 1.0;
    }
  }
  for (NodeId v = 0; v < g.size(); ++v) {
    degree[static_cast<std::size_t>(y.cluster_of(v))] += g.degree(v);
  }
  double q = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double share = degree[i] / (2.0 * links);
    q += internal[i] / links - share * share;
  }
  return q;
}

double relaxed_mi_objective(const ClusterAggregates& ca) { return mutual_info_clusters(ca); }

double criterion_value(Criterion c, const ClusterAggregates& ca) {
  switch (c) {
    case Criterion::synwalk:
      return synwalk_value(ca);
    case Criterion::relaxed_mi:
      return relaxed_mi_objective(ca);
    case Criterion::modularity: {
      double q = 0.0;
      for (std::size_t i = 0; i < ca.cluster_count(); ++i) {
        q += ca.joint(i, i) - ca.mass[i] * ca.mass[i];
      }
      return q;
    }
  }
  throw std::logic_error("unhandled criterion");
}

}  // namespace synwalk
