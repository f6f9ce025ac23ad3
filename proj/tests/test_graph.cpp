#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace rsgraph;
using rsgraph::testing::five_period;
using rsgraph::testing::random_instance;

namespace {

ReplenishmentGraph graph_for(const Instance& inst) {
  return build_graph(std::make_shared<const ConnectionMatrix>(build_connection_matrix(inst)), inst.costs);
}

std::set<std::pair<int, int>> arc_set(const ReplenishmentGraph& g) {
  std::set<std::pair<int, int>> s;
  for (ArcId id : g.live_arcs()) s.insert({g.arc(id).from.period, g.arc(id).to.period});
  return s;
}

// Cheapest source-sink cost by listing every subset of order periods.
double enumerate_paths(const ConnectionMatrix& m) {
  const int T = m.horizon();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << (T - 1)); ++mask) {
    double cost = 0.0;
    int from = 1;
    for (int t = 2; t <= T; ++t) {
      if (mask & (1u << (t - 2))) {
        cost += m.arc(from, t).expected_cost;
        from = t;
      }
    }
    cost += m.arc(from, T + 1).expected_cost;
    best = std::min(best, cost);
  }
  return best;
}

}  // namespace

TEST(NodeId, Labels) {
  EXPECT_EQ(to_string(NodeId{3, 0}), "3");
  EXPECT_EQ(to_string(NodeId{3, 1}), "3'");
  EXPECT_EQ(to_string(NodeId{3, 2}), "3''");
  EXPECT_EQ(to_string(NodeId{4, 5}), "4^5");
  EXPECT_LT((NodeId{3, 1}), (NodeId{4, 0}));
  EXPECT_LT((NodeId{3, 0}), (NodeId{3, 1}));
}

TEST(Graph, CompleteDagOnFivePeriods) {
  const auto g = graph_for(five_period());
  EXPECT_EQ(g.node_count(), 6u);
  EXPECT_EQ(g.arc_count(), 15u);
  for (ArcId id : g.live_arcs()) EXPECT_LT(g.arc(id).from.period, g.arc(id).to.period);
}

TEST(Graph, RelaxedPathOnFivePeriods) {
  const auto g = graph_for(five_period());
  const auto p = shortest_path(g);
  EXPECT_EQ(render_path(p), "1->2->3->4->6");
  EXPECT_NEAR(p.total_cost, 437.354, 1e-3);
}

TEST(Graph, FilteredFivePeriodTopology) {
  auto g = graph_for(five_period());
  EXPECT_EQ(filter_arcs(g), 8u);
  const std::set<std::pair<int, int>> expect{{1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}, {4, 6}, {5, 6}};
  EXPECT_EQ(arc_set(g), expect);
  EXPECT_EQ(render_path(shortest_path(g)), "1->2->3->4->6");
}

TEST(Graph, FilterKeepsUndominatedLongArc) {
  Instance inst;
  inst.means = {10, 10};
  inst.cv = 0.1;
  inst.costs = {5000.0, 0.0, 1.0, 4.0};
  auto g = graph_for(inst);
  ASSERT_LT(g.matrix().arc(1, 3).expected_cost,
            g.matrix().arc(1, 2).expected_cost + g.matrix().arc(2, 3).expected_cost);
  EXPECT_EQ(filter_arcs(g), 0u);
  EXPECT_EQ(g.arc_count(), 3u);
}

TEST(Graph, FilterPreservesShortestPathCost) {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 100; ++n) {
    const int T = 2 + static_cast<int>(rng() % 11);
    auto g = graph_for(random_instance(rng, T));
    const double before = shortest_path(g).total_cost;
    filter_arcs(g);
    ASSERT_NEAR(shortest_path(g).total_cost, before, 1e-9);
  }
}

TEST(Graph, FilteredArcsCanBeRestored) {
  auto g = graph_for(five_period());
  const std::size_t removed = filter_arcs(g);
  EXPECT_EQ(g.restore_filtered(), removed);
  EXPECT_EQ(g.arc_count(), 15u);
  EXPECT_EQ(g.restore_filtered(), 0u);
}

TEST(Graph, DijkstraMatchesEnumerationAndDp) {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 60; ++n) {
    const int T = 1 + static_cast<int>(rng() % 10);
    const auto g = graph_for(random_instance(rng, T));
    const auto a = shortest_path(g);
    const auto b = shortest_path_topological(g);
    ASSERT_NEAR(a.total_cost, enumerate_paths(g.matrix()), 1e-9);
    ASSERT_NEAR(a.total_cost, b.total_cost, 1e-9);
    ASSERT_EQ(render_path(a), render_path(b));
    ASSERT_EQ(a.nodes.front(), g.source());
    ASSERT_EQ(a.nodes.back(), g.sink());
  }
}

TEST(Graph, TiesPreferEarlierPredecessor) {
  // Zero-variance, zero-demand periods make every plan cost the same per order.
  Instance inst;
  inst.means = {0, 0, 0};
  inst.cv = 0.0;
  inst.costs = {0.0, 0.0, 1.0, 1.0};
  const auto g = graph_for(inst);
  EXPECT_EQ(render_path(shortest_path(g)), "1->4");
  EXPECT_EQ(render_path(shortest_path_topological(g)), "1->4");
}

TEST(Graph, NegativeArcCostIsInternalError) {
  auto g = graph_for(five_period());
  Arc a = g.arc(0);
  a.cost = -1.0;
  a.zero_reviews = {9};
  g.add_arc(a);
  EXPECT_THROW(shortest_path(g), InternalError);
}

TEST(Graph, AddArcDedupesAndChecksDirection) {
  auto g = graph_for(five_period());
  const Arc a = g.arc(3);
  EXPECT_EQ(g.add_arc(a), a.id);
  Arc back = a;
  back.to = NodeId{1, 0};
  back.from = NodeId{2, 0};
  EXPECT_THROW(g.add_arc(back), InternalError);
  g.remove_arc(a.id);
  EXPECT_THROW(g.remove_arc(a.id), InternalError);
}

TEST(Graph, DumpListsArcs) {
  auto g = graph_for(five_period());
  filter_arcs(g);
  const std::string dump = dump_graph(g);
  EXPECT_NE(dump.find("3 5 normal"), std::string::npos);
  EXPECT_EQ(dump.find("1 6 normal"), std::string::npos);
}
