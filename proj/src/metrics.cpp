#include "synwalk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "synwalk/error.hpp"

namespace synwalk {

namespace {

void require_same_nodes(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw DataError("partitions cover different node sets (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + " nodes)");
  }
}

void require_simple_undirected(const Graph& g, const char* what) {
  if (g.directed() || !g.unweighted()) {
    throw UnsupportedInput(std::string(what) + " requires an unweighted undirected graph");
  }
}

double entropy(const std::vector<std::size_t>& sizes, double n) {
  double h = 0.0;
  for (std::size_t s : sizes) {
    if (s > 0) {
      const double p = static_cast<double>(s) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

double log_factorial(double x) { return std::lgamma(x + 1.0); }

// Expected mutual information under the hypergeometric (permutation) model.
double expected_mutual_info(const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b, std::size_t n_total) {
  const auto n = static_cast<double>(n_total);
  const double log_n_fact = log_factorial(n);
  double emi = 0.0;
  for (std::size_t ai : a) {
    for (std::size_t bj : b) {
      const auto fa = static_cast<double>(ai);
      const auto fb = static_cast<double>(bj);
      const std::size_t lo = ai + bj > n_total ? std::max<std::size_t>(1, ai + bj - n_total) : 1;
      const std::size_t hi = std::min(ai, bj);
      const double log_common = log_factorial(fa) + log_factorial(fb) +
                                log_factorial(n - fa) + log_factorial(n - fb) - log_n_fact;
      for (std::size_t k = lo; k <= hi; ++k) {
        const auto nij = static_cast<double>(k);
        const double log_p = log_common - log_factorial(nij) - log_factorial(fa - nij) -
                             log_factorial(fb - nij) - log_factorial(n - fa - fb + nij);
        emi += nij / n * std::log(n * nij / (fa * fb)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

}  // namespace

ContingencyTable contingency(const Partition& truth, const Partition& pred) {
  require_same_nodes(truth, pred);
  ContingencyTable t;
  t.n = truth.size();
  t.counts.assign(truth.cluster_count(), std::vector<std::size_t>(pred.cluster_count(), 0));
  t.row_sums.assign(truth.cluster_count(), 0);
  t.col_sums.assign(pred.cluster_count(), 0);
  for (std::size_t v = 0; v < t.n; ++v) {
    const auto i = static_cast<std::size_t>(truth.cluster_of(v));
    const auto j = static_cast<std::size_t>(pred.cluster_of(v));
    ++t.counts[i][j];
    ++t.row_sums[i];
    ++t.col_sums[j];
  }
  return t;
}

double ami(const Partition& a, const Partition& b) {
  require_same_nodes(a, b);
  if (a.size() == 0) return 1.0;
  if (a.cluster_count() == 1 && b.cluster_count() == 1) return 1.0;
  const ContingencyTable t = contingency(a, b);
  const auto n = static_cast<double>(t.n);

  double mi = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
      const auto nij = static_cast<double>(t.counts[i][j]);
      if (nij == 0.0) continue;
      mi += nij / n *
            std::log(n * nij / (static_cast<double>(t.row_sums[i]) *
                                static_cast<double>(t.col_sums[j])));
    }
  }
  const double emi = expected_mutual_info(t.row_sums, t.col_sums, t.n);
  const double normalizer = std::max(entropy(t.row_sums, n), entropy(t.col_sums, n));
  const double denominator = normalizer - emi;
  if (std::abs(denominator) < 1e-15) return a == b ? 1.0 : 0.0;
  return (mi - emi) / denominator;
}

ClusterMapping greedy_match(const ContingencyTable& table) {
  const std::size_t rows = table.counts.size();
  const std::size_t cols = rows == 0 ? 0 : table.counts.front().size();
  std::vector<char> row_used(rows, 0);
  std::vector<char> col_used(cols, 0);
  ClusterMapping mapping;
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    std::size_t best_i = 0;
    std::size_t best_j = 0;
    bool found = false;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        if (!found || table.counts[i][j] > table.counts[best_i][best_j]) {
          best_i = i;
          best_j = j;
          found = true;
        }
      }
    }
    row_used[best_i] = 1;
    col_used[best_j] = 1;
    mapping[static_cast<int>(best_i)] = static_cast<int>(best_j);
  }
  return mapping;
}

ClusterMapping greedy_match(const Partition& truth, const Partition& pred) {
  return greedy_match(contingency(truth, pred));
}

Classification classify_nodes(const Partition& truth, const Partition& pred,
                              const ClusterMapping& mapping) {
  require_same_nodes(truth, pred);
  Classification result;
  for (NodeId v = 0; v < truth.size(); ++v) {
    auto it = mapping.find(truth.cluster_of(v));
    if (it != mapping.end() && it->second == pred.cluster_of(v)) {
      result.correct.push_back(v);
    } else {
      result.misclassified.push_back(v);
    }
  }
  return result;
}

double mixing_parameter(const Graph& g, const Partition& y, NodeId node) {
  require_simple_undirected(g, "mixing parameter");
  if (y.size() != g.size()) throw DataError("partition does not match graph");
  const double k = g.degree(node);
  if (!(k > 0.0)) throw DataError("mixing parameter undefined for a zero-degree node");
  double external = 0.0;
  for (const Neighbor& nb : g.out_neighbors(node)) {
    if (y.cluster_of(nb.node) != y.cluster_of(node)) external += nb.weight;
  }
  return external / k;
}

double nld(const Graph& g, const Partition& y, NodeId node) {
  if (y.size() != g.size()) throw DataError("partition does not match graph");
  const auto size = static_cast<double>(
      y.cluster_sizes()[static_cast<std::size_t>(y.cluster_of(node))]);
  if (size < 2.0) throw DataError("normalized local degree needs a cluster of size >= 2");
  return g.degree(node) / (size * (size - 1.0) / 2.0);
}

std::vector<ClusterStatsRow> cluster_stats(const Graph& g, const Partition& y,
                                           std::size_t min_size) {
  require_simple_undirected(g, "cluster statistics");
  if (y.size() != g.size()) throw DataError("partition does not match graph");
  if (min_size < 1) throw std::invalid_argument("min_size must be >= 1");
  const std::size_t n = g.size();
  const std::size_t k = y.cluster_count();

  std::vector<double> internal(k, 0.0);
  std::vector<double> external(k, 0.0);
  for (const Edge& e : g.edges()) {
    if (e.source == e.target) continue;
    const auto ci = static_cast<std::size_t>(y.cluster_of(e.source));
    const auto cj = static_cast<std::size_t>(y.cluster_of(e.target));
    if (ci == cj) {
      internal[ci] += 1.0;
    } else {
      external[ci] += 1.0;
      external[cj] += 1.0;
    }
  }

  // Node clustering coefficients over the whole graph.
  std::vector<double> node_cc(n, 0.0);
  std::vector<char> mark(n, 0);
  std::vector<NodeId> neigh;
  for (NodeId v = 0; v < n; ++v) {
    neigh.clear();
    for (const Neighbor& nb : g.out_neighbors(v)) {
      if (nb.node != v) neigh.push_back(nb.node);
    }
    if (neigh.size() < 2) continue;
    for (NodeId u : neigh) mark[u] = 1;
    double links = 0.0;
    for (NodeId u : neigh) {
      for (const Neighbor& nb : g.out_neighbors(u)) {
        if (nb.node > u && mark[nb.node]) links += 1.0;
      }
    }
    for (NodeId u : neigh) mark[u] = 0;
    const auto d = static_cast<double>(neigh.size());
    node_cc[v] = links / (d * (d - 1.0) / 2.0);
  }

  const auto sizes = y.cluster_sizes();
  std::vector<double> cc_sum(k, 0.0);
  for (NodeId v = 0; v < n; ++v) cc_sum[static_cast<std::size_t>(y.cluster_of(v))] += node_cc[v];

  std::vector<ClusterStatsRow> rows;
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] < min_size) continue;
    const auto s = static_cast<double>(sizes[c]);
    ClusterStatsRow row;
    row.cluster = static_cast<int>(c);
    row.size = sizes[c];
    row.density = sizes[c] >= 2 ? internal[c] / (s * (s - 1.0) / 2.0) : 0.0;
    row.clustering_coefficient = cc_sum[c] / s;
    const double total = internal[c] + external[c];
    row.conductance = total > 0.0 ? external[c] / total : 0.0;
    if (sizes[c] == n) {
      row.cut_ratio = 0.0;
      row.cut_ratio_undefined = true;
    } else {
      row.cut_ratio = external[c] / (s * (static_cast<double>(n) - s));
    }
    rows.push_back(row);
  }
  return rows;
}

void write_cluster_stats_csv(const std::vector<ClusterStatsRow>& rows, std::ostream& out) {
  out << "cluster,size,density,clustering_coefficient,conductance,cut_ratio\n";
  const auto old_precision = out.precision(12);
  for (const auto& r : rows) {
    out << r.cluster << ',' << r.size << ',' << r.density << ',' << r.clustering_coefficient
        << ',' << r.conductance << ',' << r.cut_ratio << '\n';
  }
  out.precision(old_precision);
}

}  // namespace synwalk
