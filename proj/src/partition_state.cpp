#include "synwalk/partition_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace synwalk {

namespace {

double xlog2(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double modularity_term(double mass, double self_flow) { return self_flow - mass * mass; }

}  // namespace

PartitionState::PartitionState(const FlowNetwork& net, const Partition& initial,
                               Criterion criterion)
    : net_(&net), criterion_(criterion) {
  const std::size_t n = net.size();
  if (initial.size() != n) throw std::invalid_argument("partition does not match network");
  assignment_.assign(initial.assignment().begin(), initial.assignment().end());
  size_.assign(n, 0);
  mass_.assign(n, 0.0);
  self_.assign(n, 0.0);
  if (criterion_ == Criterion::relaxed_mi) between_.resize(n);
  slot_of_cluster_.assign(n, -1);
  for (NodeId v = 0; v < n; ++v) {
    const auto c = static_cast<std::size_t>(assignment_[v]);
    ++size_[c];
    mass_[c] += net.mass(v);
    self_[c] += net.self_flow(v);
    for (const auto& arc : net.out_arcs(v)) {
      const int d = assignment_[arc.node];
      if (d == static_cast<int>(c)) {
        self_[c] += arc.flow;
      } else if (criterion_ == Criterion::relaxed_mi) {
        between_[c][d] += arc.flow;
      }
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    if (size_[c] == 0) empty_.push_back(static_cast<int>(c));
  }
}

double PartitionState::value() const {
  double total = 0.0;
  switch (criterion_) {
    case Criterion::synwalk:
      for (std::size_t c = 0; c < mass_.size(); ++c) {
        if (size_[c] > 0) total += synwalk_term(mass_[c], self_[c]);
      }
      break;
    case Criterion::modularity:
      for (std::size_t c = 0; c < mass_.size(); ++c) {
        if (size_[c] > 0) total += modularity_term(mass_[c], self_[c]);
      }
      break;
    case Criterion::relaxed_mi:
      for (std::size_t c = 0; c < mass_.size(); ++c) {
        if (size_[c] == 0) continue;
        total += xlog2(self_[c]) - 2.0 * xlog2(mass_[c]);
        for (const auto& [d, flow] : between_[c]) total += xlog2(flow);
      }
      break;
  }
  return total;
}

int PartitionState::empty_cluster() const { return empty_.empty() ? -1 : empty_.back(); }

void PartitionState::load(NodeId v) {
  if (valid_ && loaded_ == v) return;
  for (const ClusterFlow& f : flows_) slot_of_cluster_[static_cast<std::size_t>(f.cluster)] = -1;
  flows_.clear();
  auto slot = [&](int c) -> ClusterFlow& {
    int& s = slot_of_cluster_[static_cast<std::size_t>(c)];
    if (s < 0) {
      s = static_cast<int>(flows_.size());
      flows_.push_back({c, 0.0, 0.0});
    }
    return flows_[static_cast<std::size_t>(s)];
  };
  for (const auto& arc : net_->out_arcs(v)) slot(assignment_[arc.node]).out += arc.flow;
  for (const auto& arc : net_->in_arcs(v)) slot(assignment_[arc.node]).in += arc.flow;
  loaded_ = v;
  valid_ = true;
}

const std::vector<PartitionState::ClusterFlow>& PartitionState::neighbor_flows(NodeId v) {
  load(v);
  return flows_;
}

PartitionState::ClusterFlow PartitionState::flows_to(int c) const {
  const int s = slot_of_cluster_[static_cast<std::size_t>(c)];
  return s < 0 ? ClusterFlow{c, 0.0, 0.0} : flows_[static_cast<std::size_t>(s)];
}

double PartitionState::flow_between(int c, int d) const {
  const auto& row = between_[static_cast<std::size_t>(c)];
  auto it = row.find(d);
  return it == row.end() ? 0.0 : it->second;
}

double PartitionState::delta_move(NodeId v, int from, int to) {
  const auto n = static_cast<int>(node_count());
  if (v >= node_count() || from < 0 || from >= n || to < 0 || to >= n) {
    throw std::invalid_argument("delta_move: index out of range");
  }
  if (assignment_[v] != from) throw std::invalid_argument("delta_move: node not in from_cluster");
  if (from == to) throw std::invalid_argument("delta_move: from_cluster equals to_cluster");
  load(v);

  const auto a = static_cast<std::size_t>(from);
  const auto b = static_cast<std::size_t>(to);
  const ClusterFlow fa = flows_to(from);
  const ClusterFlow fb = flows_to(to);
  const double m = net_->mass(v);
  const double sf = net_->self_flow(v);
  const bool vacates = size_[a] == 1;

  const double mass_a = vacates ? 0.0 : mass_[a] - m;
  const double self_a = vacates ? 0.0 : self_[a] - fa.out - fa.in - sf;
  const double mass_b = mass_[b] + m;
  const double self_b = self_[b] + fb.out + fb.in + sf;

  switch (criterion_) {
    case Criterion::synwalk:
      return synwalk_term(mass_a, self_a) + synwalk_term(mass_b, self_b) -
             synwalk_term(mass_[a], self_[a]) - synwalk_term(mass_[b], self_[b]);
    case Criterion::modularity:
      return (vacates ? 0.0 : modularity_term(mass_a, self_a)) + modularity_term(mass_b, self_b) -
             modularity_term(mass_[a], self_[a]) -
             (size_[b] == 0 ? 0.0 : modularity_term(mass_[b], self_[b]));
    case Criterion::relaxed_mi: {
      double d = 0.0;
      auto change = [&d](double old, double delta) { d += xlog2(old + delta) - xlog2(old); };
      d += xlog2(self_a) - xlog2(self_[a]);
      change(self_[b], fb.out + fb.in + sf);
      change(flow_between(from, to), fa.in - fb.out);
      change(flow_between(to, from), fa.out - fb.in);
      for (const ClusterFlow& f : flows_) {
        if (f.cluster == from || f.cluster == to) continue;
        change(flow_between(from, f.cluster), -f.out);
        change(flow_between(to, f.cluster), f.out);
        change(flow_between(f.cluster, from), -f.in);
        change(flow_between(f.cluster, to), f.in);
      }
      d -= 2.0 * (xlog2(mass_a) + xlog2(mass_b) - xlog2(mass_[a]) - xlog2(mass_[b]));
      return d;
    }
  }
  throw std::logic_error("unhandled criterion");
}

void PartitionState::move(NodeId v, int to) {
  const int from = assignment_[v];
  if (from == to) return;
  if (to < 0 || to >= static_cast<int>(node_count())) {
    throw std::invalid_argument("move: cluster index out of range");
  }
  load(v);
  const auto a = static_cast<std::size_t>(from);
  const auto b = static_cast<std::size_t>(to);
  const ClusterFlow fa = flows_to(from);
  const ClusterFlow fb = flows_to(to);
  const double m = net_->mass(v);
  const double sf = net_->self_flow(v);

  if (criterion_ == Criterion::relaxed_mi) {
    auto add = [this](int c, int d, double delta) {
      if (delta == 0.0) return;
      auto& row = between_[static_cast<std::size_t>(c)];
      double& entry = row[d];
      entry += delta;
      if (entry <= 0.0) row.erase(d);
    };
    add(from, to, fa.in - fb.out);
    add(to, from, fa.out - fb.in);
    for (const ClusterFlow& f : flows_) {
      if (f.cluster == from || f.cluster == to) continue;
      add(from, f.cluster, -f.out);
      add(to, f.cluster, f.out);
      add(f.cluster, from, -f.in);
      add(f.cluster, to, f.in);
    }
  }

  if (size_[b] == 0) empty_.erase(std::find(empty_.begin(), empty_.end(), to));
  ++size_[b];
  mass_[b] += m;
  self_[b] += fb.out + fb.in + sf;
  if (--size_[a] == 0) {
    mass_[a] = 0.0;
    self_[a] = 0.0;
    if (criterion_ == Criterion::relaxed_mi) between_[a].clear();
    empty_.push_back(from);
  } else {
    mass_[a] -= m;
    self_[a] -= fa.out + fa.in + sf;
  }
  assignment_[v] = to;
  valid_ = false;
}

Partition PartitionState::partition() const { return Partition(assignment_); }

}  // namespace synwalk
