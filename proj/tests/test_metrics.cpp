#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "synwalk/error.hpp"
#include "synwalk/metrics.hpp"

namespace synwalk {
namespace {

using namespace synwalk::testing;

double natural_mi(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa;
  std::map<int, double> pb;
  for (std::size_t v = 0; v < a.size(); ++v) {
    joint[{a[v], b[v]}] += 1.0 / n;
    pa[a[v]] += 1.0 / n;
    pb[b[v]] += 1.0 / n;
  }
  double mi = 0.0;
  for (const auto& [key, p] : joint) mi += p * std::log(p / (pa[key.first] * pb[key.second]));
  return mi;
}

double natural_entropy(const std::vector<int>& a) {
  std::map<int, double> p;
  for (int x : a) p[x] += 1.0 / static_cast<double>(a.size());
  double h = 0.0;
  for (const auto& [_, q] : p) h -= q * std::log(q);
  return h;
}

// AMI with E[MI] averaged over every permutation of b's labels.
double exhaustive_ami(const std::vector<int>& a, std::vector<int> b) {
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  double sum = 0.0;
  double count = 0.0;
  std::vector<int> permuted(b.size());
  do {
    for (std::size_t i = 0; i < order.size(); ++i) permuted[i] = b[order[i]];
    sum += natural_mi(a, permuted);
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  const double emi = sum / count;
  return (natural_mi(a, b) - emi) / (std::max(natural_entropy(a), natural_entropy(b)) - emi);
}

TEST(Ami, FourNodeFixtureMatchesExhaustiveOracle) {
  const std::vector<int> a{0, 0, 1, 1};
  const std::vector<int> b{0, 1, 0, 1};
  EXPECT_NEAR(ami(Partition(a), Partition(b)), exhaustive_ami(a, b), 1e-10);
  // 24 permutations: 8 reproduce a (MI ln 2), 16 give MI 0, so E[MI] = ln 2 / 3
  // and AMI = -(ln 2 / 3) / (ln 2 - ln 2 / 3) = -1/2.
  EXPECT_NEAR(ami(Partition(a), Partition(b)), -0.5, 1e-12);
}

TEST(Ami, RandomSmallPartitionsMatchExhaustiveOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + uniform_below(rng, 4);
    const Partition a = random_partition(rng, n);
    const Partition b = random_partition(rng, n);
    if (a.cluster_count() == 1 || b.cluster_count() == 1) continue;
    const std::vector<int> va(a.assignment().begin(), a.assignment().end());
    const std::vector<int> vb(b.assignment().begin(), b.assignment().end());
    ASSERT_NEAR(ami(a, b), exhaustive_ami(va, vb), 1e-10);
  }
}

TEST(Ami, ExactEdgeCases) {
  const Partition a(std::vector<int>{0, 0, 1, 1, 2, 2, 2});
  EXPECT_EQ(ami(a, a), 1.0);
  EXPECT_EQ(ami(a, Partition::single_cluster(7)), 0.0);
  EXPECT_EQ(ami(Partition::single_cluster(7), Partition::single_cluster(7)), 1.0);
  EXPECT_THROW(ami(a, Partition::singletons(6)), DataError);
}

TEST(Ami, SymmetricAndLabelInvariant) {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Partition a = random_partition(rng, 40);
    const Partition b = random_partition(rng, 40);
    EXPECT_NEAR(ami(a, b), ami(b, a), 1e-12);
    std::vector<int> relabeled(b.assignment().begin(), b.assignment().end());
    for (int& c : relabeled) c = 100 - c;
    EXPECT_NEAR(ami(a, Partition(relabeled)), ami(a, b), 1e-12);
  }
}

TEST(Contingency, Fixtures) {
  const Partition a(std::vector<int>{0, 0, 1, 1});
  const ContingencyTable t = contingency(a, Partition(std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(t.counts, (std::vector<std::vector<std::size_t>>{{1, 1}, {1, 1}}));
  const ContingencyTable single = contingency(two_triangles_truth(), Partition::single_cluster(6));
  EXPECT_EQ(single.counts, (std::vector<std::vector<std::size_t>>{{3}, {3}}));
  const ContingencyTable same = contingency(two_triangles_truth(), two_triangles_truth());
  EXPECT_EQ(same.counts, (std::vector<std::vector<std::size_t>>{{3, 0}, {0, 3}}));
  EXPECT_EQ(same.n, 6u);
}

TEST(GreedyMatch, Fixtures) {
  ContingencyTable t;
  t.counts = {{5, 0}, {1, 4}};
  EXPECT_EQ(greedy_match(t), (ClusterMapping{{0, 0}, {1, 1}}));

  const Partition a(std::vector<int>{0, 0, 1, 1, 2, 2, 2});
  EXPECT_EQ(greedy_match(a, a), (ClusterMapping{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(greedy_match(a, Partition::single_cluster(7)), (ClusterMapping{{2, 0}}));

  ContingencyTable tie;
  tie.counts = {{2, 2}, {2, 2}};
  EXPECT_EQ(greedy_match(tie), (ClusterMapping{{0, 0}, {1, 1}}));
}

TEST(GreedyMatch, InjectiveWithMinSize) {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const Partition a = random_partition(rng, 30);
    const Partition b = random_partition(rng, 30);
    const ClusterMapping m = greedy_match(a, b);
    EXPECT_EQ(m.size(), std::min(a.cluster_count(), b.cluster_count()));
    std::set<int> targets;
    for (const auto& [_, j] : m) targets.insert(j);
    EXPECT_EQ(targets.size(), m.size());
  }
}

TEST(ClassifyNodes, Fixtures) {
  const Partition truth = two_triangles_truth();
  Classification c = classify_nodes(truth, truth, greedy_match(truth, truth));
  EXPECT_EQ(c.correct.size(), 6u);
  EXPECT_TRUE(c.misclassified.empty());

  const Partition pred(std::vector<int>{0, 0, 0, 0, 1, 1});
  c = classify_nodes(truth, pred, {{0, 0}, {1, 1}});
  EXPECT_EQ(c.misclassified, std::vector<NodeId>{3});

  c = classify_nodes(truth, pred, {{0, 0}});
  EXPECT_EQ(c.misclassified, (std::vector<NodeId>{3, 4, 5}));
  EXPECT_EQ(c.correct.size() + c.misclassified.size(), 6u);
}

TEST(NodeStatistics, MixingParameter) {
  // Node 0 has five links, two of them leave its cluster.
  const Graph g(6, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}, {0, 5, 1.0}});
  const Partition y(std::vector<int>{0, 0, 0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(mixing_parameter(g, y, 0), 0.4);
  EXPECT_DOUBLE_EQ(mixing_parameter(two_triangles(), two_triangles_truth(), 2), 0.0);
  EXPECT_DOUBLE_EQ(mixing_parameter(triangle(), Partition::singletons(3), 1), 1.0);
  EXPECT_THROW(mixing_parameter(Graph(2, {{0, 0, 1.0}}), Partition::singletons(2), 1), DataError);
  EXPECT_THROW(mixing_parameter(Graph(2, {{0, 1, 2.0}}), Partition::singletons(2), 0),
               UnsupportedInput);
}

TEST(NodeStatistics, NormalizedLocalDegree) {
  const Graph star(5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
  EXPECT_DOUBLE_EQ(nld(star, Partition::single_cluster(5), 0), 0.4);
  const Graph k5 = cliques({5});
  EXPECT_DOUBLE_EQ(nld(k5, Partition::single_cluster(5), 2), 2.0 / 5.0);
  EXPECT_THROW(nld(triangle(), Partition::singletons(3), 0), DataError);
}

TEST(ClusterStats, IsolatedTriangle) {
  const auto rows = cluster_stats(two_triangles(), two_triangles_truth());
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.size, 3u);
    EXPECT_EQ(r.density, 1.0);
    EXPECT_EQ(r.clustering_coefficient, 1.0);
    EXPECT_EQ(r.conductance, 0.0);
    EXPECT_EQ(r.cut_ratio, 0.0);
    EXPECT_FALSE(r.cut_ratio_undefined);
  }
}

TEST(ClusterStats, StarAndSmallCluster) {
  const Graph star(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const auto s = cluster_stats(star, Partition::single_cluster(4));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].density, 0.5);
  EXPECT_DOUBLE_EQ(s[0].clustering_coefficient, 0.0);
  EXPECT_DOUBLE_EQ(s[0].conductance, 0.0);
  EXPECT_TRUE(s[0].cut_ratio_undefined);

  // {0,1} has one internal link and two external ones.
  const Graph g(6, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}, {4, 5, 1.0}, {3, 4, 1.0}});
  const auto rows = cluster_stats(g, Partition(std::vector<int>{0, 0, 1, 1, 1, 1}), 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].conductance, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rows[0].cut_ratio, 0.25);
  EXPECT_EQ(cluster_stats(g, Partition(std::vector<int>{0, 0, 1, 1, 1, 1})).size(), 1u);
}

TEST(ClusterStats, FieldsInUnitInterval) {
  Rng rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_connected(rng(), 25, 0.2);
    for (const auto& r : cluster_stats(g, random_partition(rng, 25), 1)) {
      for (double x : {r.density, r.clustering_coefficient, r.conductance, r.cut_ratio}) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
      }
    }
  }
}

TEST(ClusterStats, CsvHeader) {
  std::ostringstream out;
  write_cluster_stats_csv(cluster_stats(two_triangles(), two_triangles_truth()), out);
  EXPECT_EQ(out.str(),
            "cluster,size,density,clustering_coefficient,conductance,cut_ratio\n"
            "0,3,1,1,0,0\n1,3,1,1,0,0\n");
}

}  // namespace
}  // namespace synwalk
