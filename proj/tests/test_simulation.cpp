#include <gtest/gtest.h>

#include "support.hpp"

using namespace rsgraph;
using rsgraph::testing::five_period;

namespace {

SimulationOptions reps(std::size_t n, unsigned threads = 1) {
  SimulationOptions o;
  o.replications = n;
  o.threads = threads;
  return o;
}

}  // namespace

TEST(Simulation, SameSeedSameReport) {
  const auto rep = solve(five_period());
  const auto a = simulate_policy(five_period(), rep.policy, reps(1));
  const auto b = simulate_policy(five_period(), rep.policy, reps(1));
  EXPECT_EQ(a.mean_cost, b.mean_cost);
  auto other = reps(1);
  other.seed = 777;
  EXPECT_NE(simulate_policy(five_period(), rep.policy, other).mean_cost, a.mean_cost);
}

TEST(Simulation, ThreadCountDoesNotChangeResult) {
  const auto rep = solve(five_period());
  const auto a = simulate_policy(five_period(), rep.policy, reps(20000, 1));
  const auto b = simulate_policy(five_period(), rep.policy, reps(20000, 3));
  EXPECT_EQ(a.mean_cost, b.mean_cost);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.per_period_expected_inventory, b.per_period_expected_inventory);
  EXPECT_EQ(a.negative_order_events, b.negative_order_events);
}

TEST(Simulation, CostDecomposition) {
  const auto rep = solve(five_period());
  const auto s = simulate_policy(five_period(), rep.relaxed_policy, reps(5000));
  EXPECT_NEAR(s.mean_cost, s.mean_ordering + s.mean_holding + s.mean_penalty, 1e-9 * s.mean_cost);
  EXPECT_DOUBLE_EQ(s.mean_ordering, 4 * 50.0);
  EXPECT_LE(s.ci95_low, s.mean_cost);
  EXPECT_GE(s.ci95_high, s.mean_cost);
}

TEST(Simulation, ZeroVarianceIsExact) {
  auto inst = five_period();
  inst.cv = 0.0;
  const auto rep = solve(inst);
  const auto s = simulate_policy(inst, rep.policy, reps(10));
  EXPECT_NEAR(s.mean_cost, rep.augmented_cost, 1e-9);
  EXPECT_NEAR(s.std_error, 0.0, 1e-9);
  EXPECT_NEAR(s.mean_cost, analytic_policy_cost(inst, rep.policy), 1e-9);
}

TEST(Simulation, PlannedRuleMatchesAnalyticCost) {
  const auto inst = five_period();
  const auto rep = solve(inst);
  for (const auto* pol : {&rep.policy, &rep.relaxed_policy}) {
    const auto s = simulate_policy(inst, *pol, reps(200000));
    const double analytic = analytic_policy_cost(inst, *pol);
    EXPECT_LE(std::abs(s.mean_cost - analytic), 4 * s.std_error) << s.mean_cost << " vs " << analytic;
  }
  EXPECT_NEAR(analytic_policy_cost(inst, rep.policy), rep.augmented_cost, 1e-9);
  EXPECT_NEAR(analytic_policy_cost(inst, rep.relaxed_policy), rep.relaxed_cost, 1e-9);
}

TEST(Simulation, ClippedRuleNeverOrdersNegative) {
  const auto inst = five_period();
  const auto rep = solve(inst);
  auto o = reps(20000);
  o.rule = OrderRule::clipped;
  const auto clipped = simulate_policy(inst, rep.relaxed_policy, o);
  const auto planned = simulate_policy(inst, rep.relaxed_policy, reps(20000));
  // Same streams, so negative events are counted identically up to period 3;
  // afterwards the clipped path carries more stock.
  EXPECT_GT(clipped.negative_order_events, 0u);
  EXPECT_GT(clipped.per_period_expected_inventory[2], planned.per_period_expected_inventory[2]);
  EXPECT_DOUBLE_EQ(clipped.per_period_expected_inventory[0], planned.per_period_expected_inventory[0]);
}

TEST(Simulation, InventoryMeansFollowTrace) {
  const auto inst = five_period();
  const auto rep = solve(inst);
  const auto s = simulate_policy(inst, rep.policy, reps(100000));
  const auto trace = expected_trace(inst, rep.policy);
  ASSERT_EQ(trace.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(s.per_period_expected_inventory[k], trace[k].expected_closing,
                5 * s.per_period_inventory_std_error[k]);
  }
}

TEST(Simulation, ExpectedNegativeOrders) {
  const auto inst = five_period();
  const auto rep = solve(inst);
  EXPECT_EQ(expected_negative_orders(inst, rep.relaxed_policy), std::vector<int>{3});
  EXPECT_TRUE(expected_negative_orders(inst, rep.policy).empty());
}

TEST(Simulation, TraceCsv) {
  const auto inst = five_period();
  const auto rep = solve(inst);
  const std::string csv = trace_csv(expected_trace(inst, rep.policy));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "period,expected_opening,expected_closing,S_if_review");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  // Period 4 is not reviewed on the augmented policy.
  EXPECT_NE(csv.find("\n4,"), std::string::npos);
  const auto line4 = csv.substr(csv.find("\n4,") + 1);
  EXPECT_EQ(line4.substr(0, line4.find('\n')).back(), ',');
}

TEST(Simulation, RejectsMismatch) {
  auto inst = five_period();
  const auto rep = solve(inst);
  inst.means.push_back(10);
  EXPECT_THROW(simulate_policy(inst, rep.policy, reps(10)), InputError);
  EXPECT_THROW(simulate_policy(five_period(), rep.policy, reps(0)), InputError);
  EXPECT_THROW(parse_order_rule("sometimes"), InputError);
}
