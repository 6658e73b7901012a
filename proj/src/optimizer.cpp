#include "synwalk/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "synwalk/error.hpp"
#include "synwalk/walk.hpp"

namespace synwalk {

namespace {

constexpr std::size_t kMaxSweeps = 100000;

void check_modularity_input(const Graph& g, Criterion c) {
  if (c == Criterion::modularity && (g.directed() || !g.unweighted())) {
    throw UnsupportedInput("modularity is defined for unweighted undirected graphs only");
  }
}

}  // namespace

bool local_moving(PartitionState& state, const OptimizerConfig& cfg, Rng& rng,
                  const std::function<void(const PartitionState&)>& on_move) {
  const std::size_t n = state.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<int> candidates;
  bool moved_any = false;
  const bool full_scan = n <= cfg.full_scan_nodes;

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (cfg.node_order == NodeOrder::random_shuffle) shuffle(std::span<NodeId>(order), rng);
    bool moved = false;
    for (NodeId v : order) {
      const int from = state.cluster_of(v);
      candidates.clear();
      if (full_scan) {
        for (int c = 0; c < static_cast<int>(n); ++c) {
          if (c != from && state.cluster_size(c) > 0) candidates.push_back(c);
        }
      } else {
        for (const auto& f : state.neighbor_flows(v)) {
          if (f.cluster != from) candidates.push_back(f.cluster);
        }
      }
      if (state.cluster_size(from) > 1) {
        const int fresh = state.empty_cluster();
        if (fresh >= 0) candidates.push_back(fresh);
      }
      int best = -1;
      double best_gain = cfg.min_gain;
      for (int c : candidates) {
        const double gain = state.delta_move(v, from, c);
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      if (best >= 0) {
        state.move(v, best);
        moved = true;
        if (on_move) on_move(state);
      }
    }
    if (!moved) break;
    moved_any = true;
  }
  return moved_any;
}

namespace {

// Multi-level search from `start`: local moving on the original nodes, then
// repeated aggregation with local moving of super-nodes until a level makes
// no move. The flattened result is tuned again on the original nodes; if that
// changes anything the whole cycle repeats.
Partition multilevel_search(const FlowNetwork& base, Partition flat, const OptimizerConfig& cfg,
                            Rng& rng, const MoveObserver& observer, std::size_t start,
                            std::size_t& levels) {
  std::size_t pass = 0;
  std::function<void(const PartitionState&)> on_move;
  if (observer) {
    on_move = [&](const PartitionState& state) { observer(start, pass, state); };
  }
  bool first = true;
  while (pass < cfg.max_outer_passes) {
    PartitionState fine(base, flat, cfg.objective);
    const bool tuned = local_moving(fine, cfg, rng, on_move);
    if (!tuned && !first) break;
    first = false;
    flat = fine.partition();
    FlowNetwork level = base.aggregate(flat);
    for (++pass; pass < cfg.max_outer_passes; ++pass) {
      PartitionState state(level, Partition::singletons(level.size()), cfg.objective);
      if (!local_moving(state, cfg, rng, on_move)) break;
      const Partition coarse = state.partition();
      flat = flat.compose(coarse);
      ++levels;
      if (coarse.cluster_count() == level.size()) break;
      level = level.aggregate(coarse);
    }
  }
  return flat;
}

double plogq(double p, double q) { return p > 0.0 ? p * std::log2(p / q) : 0.0; }

// Greedy agglomeration: starting from singletons, always merge the pair of
// linked clusters with the largest change in the objective, even when that
// change is negative, and keep the best partition seen along the way. Small
// networks need this: there a pair of nodes is often worth less than two
// singletons while the whole clique is worth far more, so single-node moves
// never leave the singleton partition.
Partition greedy_agglomeration(const FlowNetwork& net, Criterion objective, bool all_pairs) {
  const std::size_t n = net.size();
  std::vector<double> mass(n);
  std::vector<double> self(n);
  std::vector<std::map<int, double>> out(n);
  std::vector<std::map<int, double>> in(n);
  for (NodeId v = 0; v < n; ++v) {
    mass[v] = net.mass(v);
    self[v] = net.self_flow(v);
    for (const auto& arc : net.out_arcs(v)) out[v][static_cast<int>(arc.node)] += arc.flow;
    for (const auto& arc : net.in_arcs(v)) in[v][static_cast<int>(arc.node)] += arc.flow;
  }
  auto flow = [](const std::map<int, double>& m, int key) {
    const auto it = m.find(key);
    return it == m.end() ? 0.0 : it->second;
  };

  auto merge_gain = [&](int a, int b) {
    const double f_ab = flow(out[a], b);
    const double f_ba = flow(out[b], a);
    const double m = mass[a] + mass[b];
    const double f = self[a] + self[b] + f_ab + f_ba;
    switch (objective) {
      case Criterion::synwalk:
        return synwalk_term(m, f) - synwalk_term(mass[a], self[a]) -
               synwalk_term(mass[b], self[b]);
      case Criterion::modularity:
        return f_ab + f_ba - 2.0 * mass[a] * mass[b];
      case Criterion::relaxed_mi:
        break;
    }
    double before = plogq(self[a], mass[a] * mass[a]) + plogq(self[b], mass[b] * mass[b]) +
                    plogq(f_ab, mass[a] * mass[b]) + plogq(f_ba, mass[a] * mass[b]);
    double after = plogq(f, m * m);
    std::map<int, double> out_m;
    std::map<int, double> in_m;
    for (int x : {a, b}) {
      for (const auto& [c, w] : out[x]) {
        if (c == a || c == b) continue;
        before += plogq(w, mass[x] * mass[c]);
        out_m[c] += w;
      }
      for (const auto& [c, w] : in[x]) {
        if (c == a || c == b) continue;
        before += plogq(w, mass[c] * mass[x]);
        in_m[c] += w;
      }
    }
    for (const auto& [c, w] : out_m) after += plogq(w, m * mass[c]);
    for (const auto& [c, w] : in_m) after += plogq(w, mass[c] * m);
    return after - before;
  };

  std::vector<char> alive(n, 1);
  std::vector<std::pair<int, int>> merges;
  double value = 0.0;
  double best_value = 0.0;
  std::size_t best_step = 0;
  for (std::size_t step = 1; step < n; ++step) {
    int best_a = -1;
    int best_b = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < static_cast<int>(n); ++a) {
      if (!alive[a]) continue;
      auto consider = [&](int b) {
        if (b <= a) return;
        const double gain = merge_gain(a, b);
        if (gain > best_gain + 1e-15 ||
            (gain >= best_gain - 1e-15 && (a < best_a || (a == best_a && b < best_b)))) {
          best_gain = gain;
          best_a = a;
          best_b = b;
        }
      };
      if (all_pairs) {
        for (int b = a + 1; b < static_cast<int>(n); ++b) {
          if (alive[b]) consider(b);
        }
      } else {
        for (const auto& entry : out[a]) consider(entry.first);
        for (const auto& entry : in[a]) consider(entry.first);
      }
    }
    if (best_a < 0) break;  // remaining clusters are not linked

    const int a = best_a;
    const int b = best_b;
    self[a] += self[b] + flow(out[a], b) + flow(out[b], a);
    mass[a] += mass[b];
    out[a].erase(b);
    in[a].erase(b);
    for (const auto& [c, w] : out[b]) {
      if (c == a) continue;
      out[a][c] += w;
      in[c].erase(b);
      in[c][a] += w;
    }
    for (const auto& [c, w] : in[b]) {
      if (c == a) continue;
      in[a][c] += w;
      out[c].erase(b);
      out[c][a] += w;
    }
    out[b].clear();
    in[b].clear();
    alive[b] = 0;
    merges.emplace_back(a, b);

    value += best_gain;
    if (value > best_value + 1e-12) {
      best_value = value;
      best_step = step;
    }
  }

  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  for (std::size_t i = 0; i < best_step; ++i) {
    const auto [a, b] = merges[i];
    for (int& l : label) {
      if (l == b) l = a;
    }
  }
  return Partition(label);
}

}  // namespace

OptimizerResult optimize(const Graph& g, const OptimizerConfig& cfg,
                         const MoveObserver& observer) {
  if (cfg.max_outer_passes < 1) throw std::invalid_argument("max_outer_passes must be >= 1");
  if (!(cfg.min_gain >= 0.0)) throw std::invalid_argument("min_gain must be >= 0");
  check_modularity_input(g, cfg.objective);

  const RandomWalk walk = transition_matrix(g);
  const FlowNetwork base(walk);
  Rng rng(cfg.seed);
  OptimizerResult result;

  // Starts: singletons, the best greedy agglomeration cut over linked pairs
  // and, on small graphs, the cut over all pairs plus a few random
  // partitions. The best result wins; earlier starts win ties.
  std::vector<Partition> starts;
  starts.push_back(Partition::singletons(g.size()));
  starts.push_back(greedy_agglomeration(base, cfg.objective, false));
  if (g.size() <= cfg.full_scan_nodes && g.size() > 1) {
    starts.push_back(greedy_agglomeration(base, cfg.objective, true));
    std::vector<int> labels(g.size());
    for (std::size_t r = 0; r < cfg.random_starts; ++r) {
      const std::uint64_t k = 2 + uniform_below(rng, g.size() - 1);
      for (int& l : labels) l = static_cast<int>(uniform_below(rng, k));
      starts.emplace_back(labels);
    }
  }
  Partition flat;
  double flat_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::size_t levels = 0;
    Partition found = multilevel_search(base, starts[i], cfg, rng, observer, i, levels);
    const double value = criterion_value(cfg.objective, cluster_aggregates(base, found));
    if (value > flat_value + 1e-12) {
      flat = std::move(found);
      flat_value = value;
      result.levels = levels;
    }
  }

  const ClusterAggregates ca = cluster_aggregates(walk, flat);
  result.report = synwalk_objective(ca, mutual_info_nodes(walk));
  result.objective_value = cfg.objective == Criterion::modularity
                               ? modularity(g, flat)
                               : criterion_value(cfg.objective, ca);
  result.partition = std::move(flat);
  return result;
}

BruteForceResult brute_force_optimum(const Graph& g, Criterion objective, std::size_t n_cap) {
  const std::size_t n = g.size();
  if (n > n_cap) {
    throw UnsupportedInput("brute force is capped at " + std::to_string(n_cap) +
                           " nodes, graph has " + std::to_string(n));
  }
  check_modularity_input(g, objective);
  const FlowNetwork net(transition_matrix(g));
  constexpr double kTieTolerance = 1e-12;

  // Restricted growth string: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  BruteForceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;

  while (true) {
    const Partition y(rgs);
    const double value = criterion_value(objective, cluster_aggregates(net, y));
    ++best.evaluated;
    const std::size_t k = y.cluster_count();
    if (value > best.value + kTieTolerance ||
        (std::abs(value - best.value) <= kTieTolerance && k < best_k)) {
      best.value = value;
      best.partition = y;
      best_k = k;
    }

    std::size_t i = n;
    while (i-- > 1) {
      if (rgs[i] <= prefix_max[i - 1]) break;
    }
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return best;
}

}  // namespace synwalk
