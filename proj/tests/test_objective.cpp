#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "json.hpp"
#include "synwalk/error.hpp"
#include "synwalk/objective.hpp"
#include "synwalk/partition_state.hpp"

namespace synwalk {
namespace {

using namespace synwalk::testing;

constexpr double kLog2_3_2 = 0.5849625007211562;

double J(const Graph& g, const Partition& y) {
  return synwalk_value(cluster_aggregates(transition_matrix(g), y));
}

TEST(Synwalk, Fixtures) {
  EXPECT_DOUBLE_EQ(J(two_triangles(), Partition::single_cluster(6)), 0.0);
  EXPECT_NEAR(J(two_triangles(), two_triangles_truth()), 1.0, 1e-12);
  EXPECT_NEAR(J(triangle(), Partition::singletons(3)), kLog2_3_2, 1e-12);
}

TEST(Synwalk, MatchesDefinitionOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_connected(rng(), 12, 0.3);
    const RandomWalk w = transition_matrix(g);
    const Partition y = random_partition(rng, 12);
    ASSERT_NEAR(synwalk_value(cluster_aggregates(w, y)), oracle_synwalk(w, y), 1e-12);
  }
}

TEST(Synwalk, ReportInvariantsAndJson) {
  const RandomWalk w = transition_matrix(two_triangles());
  const ObjectiveReport r = synwalk_report(w, two_triangles_truth());
  ASSERT_EQ(r.per_cluster.size(), 2u);
  EXPECT_NEAR(r.per_cluster[0] + r.per_cluster[1], r.value, 1e-12);
  EXPECT_NEAR(r.bound_cluster_mi, 1.0, 1e-12);
  EXPECT_NEAR(r.bound_node_mi, std::log2(6.0) - 1.0, 1e-12);
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_NEAR(j.at("value").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j.at("per_cluster").size(), 2u);
  EXPECT_TRUE(j.contains("bound_cluster_mi"));
  EXPECT_TRUE(j.contains("bound_node_mi"));
}

TEST(Synwalk, BoundChainOnRandomInstances) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 29);
    const RandomWalk w = transition_matrix(random_connected(rng(), n, std::min(1.0, 3.0 / n)));
    const ObjectiveReport r = synwalk_report(w, random_partition(rng, n));
    ASSERT_GE(r.value, -1e-9);
    ASSERT_LE(r.value, r.bound_cluster_mi + 1e-9);
    ASSERT_LE(r.bound_cluster_mi, r.bound_node_mi + 1e-9);
  }
}

TEST(Synwalk, CoarseningCliquesLosesValue) {
  for (const std::vector<std::size_t>& sizes :
       {std::vector<std::size_t>{3, 3, 3}, {4, 4, 4, 4}, {2, 2}}) {
    const Graph g = cliques(sizes, 0.5);
    const Partition truth = clique_truth(sizes);
    const double best = J(g, truth);
    // Merge cliques 0 and 1.
    std::vector<int> merged(truth.assignment().begin(), truth.assignment().end());
    for (int& c : merged) c = c == 1 ? 0 : c;
    EXPECT_LT(J(g, Partition(merged)), best - 1e-9);
    EXPECT_LT(J(g, Partition::single_cluster(g.size())), best - 1e-9);
  }
}

TEST(Synwalk, LabelPermutationInvariance) {
  const Graph g = random_connected(9, 10, 0.4);
  const RandomWalk w = transition_matrix(g);
  const std::vector<int> a{0, 0, 1, 1, 2, 2, 0, 1, 2, 3};
  const std::vector<int> b{3, 3, 0, 0, 1, 1, 3, 0, 1, 2};
  for (Criterion c : {Criterion::synwalk, Criterion::modularity, Criterion::relaxed_mi}) {
    EXPECT_NEAR(criterion_value(c, cluster_aggregates(w, Partition(a))),
                criterion_value(c, cluster_aggregates(w, Partition(b))), 1e-12);
  }
}

TEST(Synwalk, ZeroMassClusterIsAnError) {
  ClusterAggregates ca;
  ca.mass = {1.0, 0.0};
  ca.joint = DenseMatrix(2, 2, 0.0);
  ca.joint(0, 0) = 1.0;
  // Checked before any term is evaluated, so the mass-1 cluster cannot mask it.
  EXPECT_THROW(synwalk_value(ca), DataError);
}

TEST(OptimalParameters, Fixtures) {
  const RandomWalk tt = transition_matrix(two_triangles());
  const SyntheticWalkParams p = optimal_parameters(tt, two_triangles_truth());
  for (double r : p.r) EXPECT_NEAR(r, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.s[0], 0.0, 1e-15);
  EXPECT_NEAR(p.s[1], 0.0, 1e-15);
  EXPECT_NEAR(p.u[0], 0.5, 1e-15);

  const RandomWalk path = transition_matrix(Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
  const SyntheticWalkParams one = optimal_parameters(path, Partition::single_cluster(3));
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(one.r[a], path.stationary[a], 1e-15);
  EXPECT_NEAR(one.s[0], 0.0, 1e-15);
  EXPECT_NEAR(one.u[0], 1.0, 1e-15);

  const SyntheticWalkParams split =
      optimal_parameters(transition_matrix(triangle()), Partition(std::vector<int>{0, 1, 1}));
  EXPECT_NEAR(split.s[1], 0.5, 1e-15);
  EXPECT_NEAR(split.s[0], 1.0, 1e-15);
}

TEST(SyntheticWalk, Fixtures) {
  const RandomWalk tt = transition_matrix(two_triangles());
  const Partition y = two_triangles_truth();
  const DenseMatrix Q = synthetic_transition_matrix(y, optimal_parameters(tt, y));
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      EXPECT_NEAR(Q(a, b), y.cluster_of(a) == y.cluster_of(b) ? 1.0 / 3.0 : 0.0, 1e-15);
    }
  }

  SyntheticWalkParams rank_one{{0.2, 0.5, 0.3}, {0.0}, {1.0}};
  const DenseMatrix R = synthetic_transition_matrix(Partition::single_cluster(3), rank_one);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) EXPECT_DOUBLE_EQ(R(a, b), rank_one.r[b]);
  }

  SyntheticWalkParams ill{{0.5, 0.5, 1.0}, {0.5, 0.5}, {1.0, 0.0}};
  EXPECT_THROW(synthetic_transition_matrix(Partition(std::vector<int>{0, 0, 1}), ill), DataError);
}

TEST(SyntheticWalk, RowsAreStochasticForArbitraryParameters) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 15);
    const Partition y = random_partition(rng, n);
    const std::size_t k = y.cluster_count();
    SyntheticWalkParams p;
    p.r.resize(n);
    std::vector<double> total(k, 0.0);
    for (std::size_t a = 0; a < n; ++a) total[y.cluster_of(a)] += p.r[a] = 0.01 + uniform01(rng);
    for (std::size_t a = 0; a < n; ++a) p.r[a] /= total[y.cluster_of(a)];
    double u_total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      p.s.push_back(k == 1 ? 0.0 : uniform01(rng));
      p.u.push_back(0.01 + uniform01(rng));
      u_total += p.u.back();
    }
    for (double& u : p.u) u /= u_total;
    const DenseMatrix Q = synthetic_transition_matrix(y, p);
    for (std::size_t a = 0; a < n; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < n; ++b) row += Q(a, b);
      ASSERT_NEAR(row, 1.0, 1e-10);
    }
  }
}

TEST(IdentityCheck, Fixtures) {
  const RandomWalk tt = transition_matrix(two_triangles());
  IdentityCheck c = objective_identity_check(tt, two_triangles_truth());
  EXPECT_NEAR(c.lhs, kLog2_3_2, 1e-12);
  EXPECT_NEAR(c.rhs, kLog2_3_2, 1e-12);

  const RandomWalk w = transition_matrix(random_connected(4, 10, 0.4));
  c = objective_identity_check(w, Partition::single_cluster(10));
  EXPECT_NEAR(c.lhs, mutual_info_nodes(w), 1e-12);
  EXPECT_NEAR(c.rhs, mutual_info_nodes(w), 1e-12);
}

TEST(IdentityCheck, InequalityOnRandomInstances) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomWalk w = transition_matrix(random_connected(rng(), 10, 0.35));
    const IdentityCheck c = objective_identity_check(w, random_partition(rng, 10));
    ASSERT_LE(c.lhs, c.rhs + 1e-9);
  }
}

TEST(Modularity, Fixtures) {
  EXPECT_NEAR(modularity(two_triangles(), Partition::single_cluster(6)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(modularity(two_triangles(), two_triangles_truth()), 0.5);
  EXPECT_NEAR(modularity(triangle(), Partition::singletons(3)), -1.0 / 3.0, 1e-15);
  EXPECT_THROW(modularity(Graph(2, {{0, 1, 2.0}}), Partition::singletons(2)), UnsupportedInput);
  EXPECT_THROW(modularity(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, true), Partition::singletons(2)),
               UnsupportedInput);
}

TEST(Modularity, FlowFormAgreesOnSimpleGraphs) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_connected(rng(), 12, 0.3);
    const Partition y = random_partition(rng, 12);
    ASSERT_NEAR(criterion_value(Criterion::modularity, cluster_aggregates(transition_matrix(g), y)),
                modularity(g, y), 1e-12);
  }
}

TEST(RelaxedMi, Fixtures) {
  const RandomWalk tt = transition_matrix(two_triangles());
  EXPECT_NEAR(relaxed_mi_objective(cluster_aggregates(tt, two_triangles_truth())), 1.0, 1e-12);
  EXPECT_NEAR(relaxed_mi_objective(cluster_aggregates(tt, Partition::single_cluster(6))), 0.0,
              1e-12);
  EXPECT_NEAR(relaxed_mi_objective(cluster_aggregates(tt, Partition::singletons(6))),
              mutual_info_nodes(tt), 1e-12);
}

TEST(Criterion, Names) {
  for (Criterion c : {Criterion::synwalk, Criterion::modularity, Criterion::relaxed_mi}) {
    EXPECT_EQ(parse_criterion(to_string(c)), c);
  }
  EXPECT_THROW(parse_criterion("bogus"), std::invalid_argument);
}

class DeltaMove : public ::testing::TestWithParam<Criterion> {};

TEST_P(DeltaMove, MatchesRecomputation) {
  const Criterion criterion = GetParam();
  Rng rng(6);
  for (int graph = 0; graph < 10; ++graph) {
    const RandomWalk w = transition_matrix(random_connected(rng(), 8, 0.4));
    const FlowNetwork net(w);
    PartitionState state(net, random_partition(rng, 8), criterion);
    for (int step = 0; step < 100; ++step) {
      const auto v = static_cast<NodeId>(uniform_below(rng, 8));
      const int from = state.cluster_of(v);
      int to = static_cast<int>(uniform_below(rng, 8));
      if (to == from) continue;
      const double before = criterion_value(criterion, cluster_aggregates(w, state.partition()));
      const double delta = state.delta_move(v, from, to);
      state.move(v, to);
      const double after = criterion_value(criterion, cluster_aggregates(w, state.partition()));
      ASSERT_NEAR(delta, after - before, 1e-9);
      ASSERT_NEAR(state.value(), after, 1e-9);
    }
  }
}

TEST_P(DeltaMove, MoveAndBackSumsToZero) {
  const RandomWalk w = transition_matrix(random_connected(8, 9, 0.4));
  const FlowNetwork net(w);
  PartitionState state(net, Partition(std::vector<int>{0, 0, 1, 1, 2, 2, 0, 1, 2}), GetParam());
  const double there = state.delta_move(4, 2, 0);
  state.move(4, 0);
  const double back = state.delta_move(4, 0, 2);
  EXPECT_NEAR(there + back, 0.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(AllCriteria, DeltaMove,
                         ::testing::Values(Criterion::synwalk, Criterion::modularity,
                                           Criterion::relaxed_mi),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(PartitionState, LeavingTheTrueTrianglePartitionCosts) {
  const FlowNetwork net(transition_matrix(two_triangles()));
  PartitionState state(net, two_triangles_truth(), Criterion::synwalk);
  EXPECT_LT(state.delta_move(0, 0, 1), 0.0);
  EXPECT_THROW(state.delta_move(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(state.delta_move(0, 0, 0), std::invalid_argument);
  EXPECT_THROW(state.delta_move(0, 0, 17), std::invalid_argument);
}

TEST(PartitionState, SoleMemberMayLeave) {
  const RandomWalk w = transition_matrix(triangle());
  const FlowNetwork net(w);
  PartitionState state(net, Partition(std::vector<int>{0, 1, 1}), Criterion::synwalk);
  const double delta = state.delta_move(0, 0, 1);
  state.move(0, 1);
  EXPECT_EQ(state.partition().cluster_count(), 1u);
  EXPECT_NEAR(delta, 0.0 - J(triangle(), Partition(std::vector<int>{0, 1, 1})), 1e-12);
}

}  // namespace
}  // namespace synwalk
