#include "synwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "synwalk/error.hpp"

namespace synwalk {

TransitionMatrix::TransitionMatrix(const std::vector<std::vector<Transition>>& rows) {
  offsets_.reserve(rows.size() + 1);
  offsets_.push_back(0);
  for (const auto& r : rows) {
    entries_.insert(entries_.end(), r.begin(), r.end());
    offsets_.push_back(entries_.size());
  }
}

double TransitionMatrix::at(std::size_t i, std::size_t j) const {
  double total = 0.0;
  for (const Transition& t : row(i)) {
    if (t.target == j) total += t.probability;
  }
  return total;
}

DenseMatrix TransitionMatrix::to_dense() const {
  DenseMatrix d(size(), size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Transition& t : row(i)) d(i, t.target) += t.probability;
  }
  return d;
}

namespace {

bool strongly_connected(const Graph& g) {
  const std::size_t n = g.size();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : forward ? g.out_neighbors(v) : g.in_neighbors(v)) {
        if (nb.weight > 0.0 && !seen[nb.node]) {
          seen[nb.node] = 1;
          ++count;
          stack.push_back(nb.node);
        }
      }
    }
    return count == n;
  };
  return reach_all(true) && reach_all(false);
}

}  // namespace

RandomWalk transition_matrix(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<Transition>> rows(n);
  for (NodeId v = 0; v < n; ++v) {
    const double deg = g.degree(v);
    if (!(deg > 0.0)) {
      throw DataError("node " + std::to_string(g.labels().label(v)) +
                      " has zero degree; the random walk is undefined");
    }
    for (const Neighbor& nb : g.out_neighbors(v)) {
      if (nb.weight > 0.0) rows[v].push_back({nb.node, nb.weight / deg});
    }
  }
  RandomWalk walk{TransitionMatrix(rows), {}};
  if (!g.directed()) {
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) total += g.degree(v);
    walk.stationary.resize(n);
    for (NodeId v = 0; v < n; ++v) walk.stationary[v] = g.degree(v) / total;
    return walk;
  }
  if (!strongly_connected(g)) {
    throw NonErgodicError("directed graph is not strongly connected");
  }
  walk.stationary = stationary_by_power_iteration(walk.transitions);
  return walk;
}

std::vector<double> stationary_by_power_iteration(const TransitionMatrix& P,
                                                  PowerIterationOptions options) {
  const std::size_t n = P.size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    for (std::size_t j = 0; j < n; ++j) next[j] = 0.5 * p[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double half = 0.5 * p[i];
      for (const Transition& t : P.row(i)) next[t.target] += half * t.probability;
    }
    const double sum = std::accumulate(next.begin(), next.end(), 0.0);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] /= sum;
      change += std::abs(next[j] - p[j]);
    }
    p.swap(next);
    if (change < options.tolerance) return p;
  }
  throw NonErgodicError("power iteration did not converge within " +
                        std::to_string(options.max_iterations) + " iterations");
}

ClusterAggregates cluster_aggregates(const RandomWalk& walk, const Partition& y) {
  if (y.size() != walk.size()) {
    throw DataError("partition covers " + std::to_string(y.size()) +
                    " nodes but the walk has " + std::to_string(walk.size()));
  }
  const std::size_t k = y.cluster_count();
  ClusterAggregates ca{std::vector<double>(k, 0.0), DenseMatrix(k, k)};
  for (std::size_t a = 0; a < walk.size(); ++a) {
    const auto ci = static_cast<std::size_t>(y.cluster_of(a));
    ca.mass[ci] += walk.stationary[a];
    for (const Transition& t : walk.transitions.row(a)) {
      ca.joint(ci, static_cast<std::size_t>(y.cluster_of(t.target))) +=
          walk.stationary[a] * t.probability;
    }
  }
  return ca;
}

FlowNetwork::FlowNetwork(const RandomWalk& walk) : mass_(walk.stationary) {
  std::vector<std::vector<Arc>> out(walk.size());
  for (std::size_t a = 0; a < walk.size(); ++a) {
    for (const Transition& t : walk.transitions.row(a)) {
      out[a].push_back({t.target, walk.stationary[a] * t.probability});
    }
  }
  build(out);
}

FlowNetwork::FlowNetwork(std::vector<double> mass, const std::vector<std::vector<Arc>>& out)
    : mass_(std::move(mass)) {
  if (out.size() != mass_.size()) throw std::invalid_argument("arc list size mismatch");
  build(out);
}

void FlowNetwork::build(const std::vector<std::vector<Arc>>& out) {
  const std::size_t n = mass_.size();
  self_.assign(n, 0.0);
  out_off_.assign(n + 1, 0);
  in_off_.assign(n + 1, 0);
  out_.clear();
  for (std::size_t v = 0; v < n; ++v) {
    for (const Arc& arc : out[v]) {
      if (arc.node >= n) throw std::out_of_range("arc target out of range");
      if (arc.node == v) {
        self_[v] += arc.flow;
      } else {
        out_.push_back(arc);
        ++in_off_[arc.node + 1];
      }
    }
    out_off_[v + 1] = out_.size();
  }
  std::partial_sum(in_off_.begin(), in_off_.end(), in_off_.begin());
  in_.resize(in_off_.back());
  std::vector<std::size_t> cursor(in_off_.begin(), in_off_.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = out_off_[v]; k < out_off_[v + 1]; ++k) {
      in_[cursor[out_[k].node]++] = {static_cast<NodeId>(v), out_[k].flow};
    }
  }
}

FlowNetwork FlowNetwork::aggregate(const Partition& y) const {
  if (y.size() != size()) throw DataError("partition does not match flow network");
  const std::size_t k = y.cluster_count();
  std::vector<double> mass(k, 0.0);
  std::vector<std::unordered_map<NodeId, double>> acc(k);
  for (std::size_t v = 0; v < size(); ++v) {
    const auto c = static_cast<NodeId>(y.cluster_of(v));
    mass[c] += mass_[v];
    if (self_[v] != 0.0) acc[c][c] += self_[v];
    for (const Arc& arc : out_arcs(static_cast<NodeId>(v))) {
      acc[c][static_cast<NodeId>(y.cluster_of(arc.node))] += arc.flow;
    }
  }
  std::vector<std::vector<Arc>> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    out[c].reserve(acc[c].size());
    for (const auto& [d, flow] : acc[c]) out[c].push_back({d, flow});
    std::sort(out[c].begin(), out[c].end(),
              [](const Arc& a, const Arc& b) { return a.node < b.node; });
  }
  return FlowNetwork(std::move(mass), out);
}

ClusterAggregates cluster_aggregates(const FlowNetwork& net, const Partition& y) {
  if (y.size() != net.size()) throw DataError("partition does not match flow network");
  const std::size_t k = y.cluster_count();
  ClusterAggregates ca{std::vector<double>(k, 0.0), DenseMatrix(k, k)};
  for (NodeId v = 0; v < net.size(); ++v) {
    const auto c = static_cast<std::size_t>(y.cluster_of(v));
    ca.mass[c] += net.mass(v);
    ca.joint(c, c) += net.self_flow(v);
    for (const auto& arc : net.out_arcs(v)) {
      ca.joint(c, static_cast<std::size_t>(y.cluster_of(arc.node))) += arc.flow;
    }
  }
  return ca;
}

double mutual_info_nodes(const RandomWalk& walk) {
  double mi = 0.0;
  for (std::size_t a = 0; a < walk.size(); ++a) {
    const double pa = walk.stationary[a];
    if (pa <= 0.0) continue;
    for (const Transition& t : walk.transitions.row(a)) {
      if (t.probability <= 0.0) continue;
      mi += pa * t.probability * std::log2(t.probability / walk.stationary[t.target]);
    }
  }
  return mi;
}

double mutual_info_clusters(const ClusterAggregates& ca) {
  const std::size_t k = ca.cluster_count();
  double mi = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double pij = ca.joint(i, j);
      if (pij > 0.0) mi += pij * std::log2(pij / (ca.mass[i] * ca.mass[j]));
    }
  }
  return mi;
}

double kld_rate(const TransitionMatrix& P, const DenseMatrix& Q, std::span<const double> p) {
  if (Q.rows() != P.size() || Q.cols() != P.size() || p.size() != P.size()) {
    throw std::invalid_argument("kld_rate: dimension mismatch");
  }
  double rate = 0.0;
  for (std::size_t a = 0; a < P.size(); ++a) {
    if (p[a] <= 0.0) continue;
    for (const Transition& t : P.row(a)) {
      if (t.probability <= 0.0) continue;
      const double q = Q(a, t.target);
      if (q <= 0.0) return std::numeric_limits<double>::infinity();
      rate += p[a] * t.probability * std::log2(t.probability / q);
    }
  }
  return rate;
}

double kld_rate(const DenseMatrix& P, const DenseMatrix& Q, std::span<const double> p) {
  if (P.rows() != P.cols() || Q.rows() != P.rows() || Q.cols() != P.cols() ||
      p.size() != P.rows()) {
    throw std::invalid_argument("kld_rate: dimension mismatch");
  }
  double rate = 0.0;
  for (std::size_t a = 0; a < P.rows(); ++a) {
    if (p[a] <= 0.0) continue;
    for (std::size_t b = 0; b < P.cols(); ++b) {
      const double pab = P(a, b);
      if (pab <= 0.0) continue;
      if (Q(a, b) <= 0.0) return std::numeric_limits<double>::infinity();
      rate += p[a] * pab * std::log2(pab / Q(a, b));
    }
  }
  return rate;
}

double binary_kld(double s, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("binary_kld: t must lie in (0, 1)");
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("binary_kld: s must lie in [0, 1]");
  double d = 0.0;
  if (s > 0.0) d += s * std::log2(s / t);
  if (s < 1.0) d += (1.0 - s) * std::log2((1.0 - s) / (1.0 - t));
  return d;
}

}  // namespace synwalk
