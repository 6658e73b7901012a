#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "synwalk/objective.hpp"
#include "synwalk/walk.hpp"

namespace synwalk {

// Mutable clustering of a FlowNetwork with cached per-cluster masses and
// flows, so that the change of the objective under a single-node move is
// computed from the touched clusters only.
//
// Cluster slots are indexed 0..n-1; slots may be empty. Synwalk and
// modularity need only each cluster's mass and self flow. The relaxed
// mutual-information criterion additionally tracks inter-cluster flows.
//
// Confined to one optimizer run; not safe for concurrent use.
class PartitionState {
 public:
  PartitionState(const FlowNetwork& net, const Partition& initial, Criterion criterion);

  std::size_t node_count() const { return assignment_.size(); }
  int cluster_of(NodeId v) const { return assignment_[v]; }
  std::size_t cluster_size(int c) const { return size_[static_cast<std::size_t>(c)]; }
  double cluster_mass(int c) const { return mass_[static_cast<std::size_t>(c)]; }
  Criterion criterion() const { return criterion_; }

  // Objective value from the cached cluster statistics.
  double value() const;

  // J(after) - J(before) for moving v from `from` (its current cluster) to
  // `to`, which may be an empty slot. Throws std::invalid_argument when v is
  // not in `from`, from == to, or a cluster index is out of range.
  double delta_move(NodeId v, int from, int to);
  void move(NodeId v, int to);

  // Any empty slot, or -1 when every slot is occupied.
  int empty_cluster() const;

  struct ClusterFlow {
    int cluster;
    double out;  // flow v -> (cluster \ v)
    double in;   // flow (cluster \ v) -> v
  };
  // Flows between v and every cluster adjacent to it, in order of first
  // appearance along v's out- then in-arcs.
  const std::vector<ClusterFlow>& neighbor_flows(NodeId v);

  Partition partition() const;

 private:
  void load(NodeId v);
  double flow_between(int c, int d) const;
  ClusterFlow flows_to(int c) const;

  const FlowNetwork* net_;
  Criterion criterion_;
  std::vector<int> assignment_;
  std::vector<std::size_t> size_;
  std::vector<double> mass_;
  std::vector<double> self_;  // p_cc
  std::vector<std::unordered_map<int, double>> between_;  // p_cd, c != d
  std::vector<int> empty_;

  // Scratch for the node currently loaded.
  NodeId loaded_ = 0;
  bool valid_ = false;
  std::vector<ClusterFlow> flows_;
  std::vector<int> slot_of_cluster_;
};

}  // namespace synwalk
