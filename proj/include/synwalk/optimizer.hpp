#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "synwalk/graph.hpp"
#include "synwalk/objective.hpp"
#include "synwalk/partition.hpp"
#include "synwalk/partition_state.hpp"
#include "synwalk/random.hpp"

namespace synwalk {

enum class NodeOrder { random_shuffle, index };

struct OptimizerConfig {
  Criterion objective = Criterion::synwalk;
  std::uint64_t seed = 0;
  std::size_t max_outer_passes = 32;  // aggregation levels
  double min_gain = 1e-12;            // bits for synwalk / relaxed_mi
  NodeOrder node_order = NodeOrder::random_shuffle;
  // Levels with at most this many nodes try every cluster as a move target,
  // not only clusters holding a neighbor.
  std::size_t full_scan_nodes = 32;
  // Extra random initial partitions, used on graphs within full_scan_nodes.
  std::size_t random_starts = 16;
};

struct OptimizerResult {
  Partition partition;
  ObjectiveReport report;
  double objective_value = 0.0;  // value of cfg.objective on the final partition
  std::size_t levels = 0;
};

// Called after every accepted move with the state at the current level. start
// indexes the initial partition being searched; the objective value never
// decreases between two calls with the same start.
using MoveObserver =
    std::function<void(std::size_t start, std::size_t level, const PartitionState& state)>;

// Louvain-style search: local moving of nodes between neighboring clusters,
// then aggregation of clusters into super-nodes, repeated until a level makes
// no move, then fine-tuning on the original nodes. Runs from singletons and
// from the best cut of a greedy agglomeration; graphs with at most
// full_scan_nodes nodes also get random initial partitions. The best result
// wins. Deterministic given (graph, cfg).
OptimizerResult optimize(const Graph& g, const OptimizerConfig& cfg,
                         const MoveObserver& observer = {});

// Local moving phase on its own. Returns true when at least one move was
// applied.
bool local_moving(PartitionState& state, const OptimizerConfig& cfg, Rng& rng,
                  const std::function<void(const PartitionState&)>& on_move = {});

struct BruteForceResult {
  Partition partition;
  double value = 0.0;
  std::size_t evaluated = 0;
};

// Exhaustive search over all set partitions (restricted growth strings).
// Ties (within 1e-12) go to fewer clusters, then to the lexicographically
// smaller string. Throws UnsupportedInput when n > n_cap.
BruteForceResult brute_force_optimum(const Graph& g, Criterion objective,
                                     std::size_t n_cap = 12);

}  // namespace synwalk
