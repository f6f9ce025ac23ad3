// Acceptance checks. One line per criterion; exit status 1 if any fails.
//   acceptance                 run all
//   acceptance --criterion N   run one

#include <boost/math/distributions/normal.hpp>

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace rsgraph;
using rsgraph::testing::five_period;
using rsgraph::testing::random_instance;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

void c1(Outcome& o) {
  const auto t0 = Clock::now();
  const auto rep = solve(five_period());
  const double t = seconds_since(t0);
  const auto relaxed = render_path(rep.relaxed);
  const auto final_path = render_path(rep.final_path);
  o.check(relaxed == "1->2->3->4->6", "relaxed path");
  o.check(final_path == "1->2->3'->5->6", "augmented path");
  o.check(t < 1.0, "runtime");
  o.detail << "relaxed " << relaxed << ", augmented " << final_path << ", " << std::setprecision(3)
           << t * 1000 << " ms";
}

void c2(Outcome& o) {
  const auto inst = five_period();
  const auto d = inst.profile();
  const auto& p = inst.costs;
  const auto s2 = optimize_order_up_to(2, 2, p, d);
  const auto s3 = optimize_order_up_to(3, 3, p, d);
  const auto s35 = optimize_order_up_to(3, 4, p, d);
  const auto s1 = optimize_order_up_to(1, 1, p, d);
  const auto merged = optimize_order_up_to(2, 3, p, d);
  const double merged_cost = merged.expected_cost + p.fixed;
  o.check(near(s2.order_up_to, 187, 0.5), "S2");
  o.check(near(s3.order_up_to, 37, 0.5), "S3");
  o.check(near(s35.order_up_to, 83, 0.5), "S(3,5)");
  o.check(near(merged.order_up_to, 203.3237, 0.01), "merged S");
  o.check(near(merged_cost, 264.9488, 0.5), "merged cost");
  o.check(near(merged.expected_closing_inventory, 53.3144, 0.01), "merged closing");
  o.check(near(s1.expected_closing_inventory, 49, 0.5), "I1");
  o.check(near(s2.expected_closing_inventory, 62, 0.5), "I2");
  o.detail << std::fixed << std::setprecision(4) << "S2 " << s2.order_up_to << ", S3 " << s3.order_up_to
           << ", S(3,5) " << s35.order_up_to << ", merged S " << merged.order_up_to << " cost "
           << merged_cost << " closing " << merged.expected_closing_inventory << ", I1 "
           << s1.expected_closing_inventory << ", I2 " << s2.expected_closing_inventory;
}

void c3(Outcome& o) {
  const auto inst = five_period();
  const auto rep = solve(inst);
  SimulationOptions opts;
  opts.replications = 500000;
  opts.threads = 0;
  const auto t0 = Clock::now();
  const auto aug = simulate_policy(inst, rep.policy, opts);
  const auto rel = simulate_policy(inst, rep.relaxed_policy, opts);
  const double t = seconds_since(t0);
  o.check(near(aug.mean_cost, 447.5, 0.01 * 447.5), "augmented mean");
  o.check(near(rel.mean_cost, 437.5, 0.01 * 437.5), "relaxed mean");
  o.check(t < 30.0, "runtime");
  o.detail << std::fixed << std::setprecision(3) << "augmented " << aug.mean_cost << " +/- " << aug.std_error
           << ", relaxed " << rel.mean_cost << " +/- " << rel.std_error << " (rule " << to_string(opts.rule)
           << ", 500000 reps each), " << std::setprecision(1) << t << " s";
}

void c4(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> mu(1, 500), cv(0.01, 0.5), b(0.5, 30), h(0.2, 5), shift(1, 5000);
  double worst = 0.0, worst_shift = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double m = mu(rng);
    const double s = cv(rng) * m;
    CostParams p{100, 0, h(rng), b(rng)};
    DemandProfile d({{m, s}});
    const double expect = m + s * boost::math::quantile(boost::math::normal(), p.critical_fractile());
    const double got = optimize_order_up_to(1, 1, p, d).order_up_to;
    worst = std::max(worst, std::abs(got - expect));
    CostParams q = p;
    q.fixed += shift(rng);
    worst_shift = std::max(worst_shift, std::abs(optimize_order_up_to(1, 1, q, d).order_up_to - got));
  }
  o.check(worst <= 1e-4, "fractile");
  o.check(worst_shift <= 1e-6, "K shift");
  o.detail << std::scientific << std::setprecision(2) << "max fractile error " << worst
           << ", max K-shift change " << worst_shift << " over 1000 cycles";
}

void c5(Outcome& o) {
  std::mt19937_64 rng(55);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const int T = 2 + static_cast<int>(rng() % 11);
    const auto inst = random_instance(rng, T);
    auto g = build_graph(std::make_shared<const ConnectionMatrix>(build_connection_matrix(inst)), inst.costs);
    const double before = shortest_path(g).total_cost;
    filter_arcs(g);
    worst = std::max(worst, std::abs(shortest_path(g).total_cost - before));
  }
  SolveOptions off;
  off.filter = false;
  const auto a = solve(five_period());
  const auto b = solve(five_period(), off);
  o.check(worst <= 1e-9, "filter changes shortest path cost");
  o.check(render_path(a.final_path) == render_path(b.final_path), "filtered vs unfiltered final path");
  o.detail << "max cost change " << std::scientific << std::setprecision(2) << worst
           << " over 100 instances; final path " << render_path(a.final_path) << " with and without filter";
}

void c6(Outcome& o) {
  std::mt19937_64 rng(66);
  OracleOptions free;
  free.constrained = false;
  double worst = 0.0, max_gap = 0.0, sum_gap = 0.0;
  int augmented = 0;
  bool below = false;
  for (int n = 0; n < 30; ++n) {
    const auto inst = random_instance(rng, 1 + static_cast<int>(rng() % 6));
    const auto rep = solve(inst);
    worst = std::max(worst, std::abs(schedule_enumeration_oracle(inst, free).cost - rep.relaxed_cost));
    const double bound = schedule_enumeration_oracle(inst).cost;
    if (rep.augmented_cost < bound - 1e-6 * bound) below = true;
    if (rep.negative_orders() > 0) {
      const double gap = 100.0 * (rep.augmented_cost - bound) / bound;
      max_gap = std::max(max_gap, gap);
      sum_gap += gap;
      ++augmented;
    }
  }
  o.check(worst <= 1e-6, "relaxed vs unconstrained oracle");
  o.check(!below, "augmented below constrained oracle");
  o.detail << "max |relaxed - oracle| " << std::scientific << std::setprecision(2) << worst << "; "
           << augmented << " augmented, gap to constrained oracle avg " << std::fixed << std::setprecision(2)
           << (augmented ? sum_gap / augmented : 0.0) << "% max " << max_gap << "%";
}

const std::vector<BenchRecord>& set_a_records() {
  static const std::vector<BenchRecord> recs = [] {
    BenchOptions opts;
    opts.threads = 0;
    return run_benchmark(materialize(set_a_grid(7, 10)), opts);
  }();
  return recs;
}

void c7(Outcome& o) {
  const auto& recs = set_a_records();
  std::size_t infeasible = 0, forbidden = 0;
  std::map<double, int> by_rho, by_b;
  for (const auto& r : recs) {
    if (!r.final_feasible) ++infeasible;
    if ((r.pattern == DemandPattern::erratic || r.fixed == 2500.0) && r.introduced_nodes > 0) ++forbidden;
    by_rho[r.cv] += r.negative_order_count > 0;
    by_b[r.penalty] += r.negative_order_count > 0;
  }
  auto monotone = [](const std::map<double, int>& m) {
    int prev = -1;
    for (const auto& [k, v] : m) {
      if (v < prev) return false;
      prev = v;
    }
    return true;
  };
  o.check(infeasible == 0, "negative orders left");
  o.check(forbidden == 0, "erratic or K=2500 augmented");
  o.check(monotone(by_rho), "rho trend");
  o.check(monotone(by_b), "b trend");
  o.detail << recs.size() << " instances, " << infeasible << " infeasible; instances with negative orders by rho";
  for (const auto& [k, v] : by_rho) o.detail << ' ' << v;
  o.detail << ", by b";
  for (const auto& [k, v] : by_b) o.detail << ' ' << v;
}

void c8(Outcome& o) {
  const auto& recs = set_a_records();
  double sum = 0.0;
  int n = 0;
  for (const auto& r : recs) {
    if (r.pattern == DemandPattern::lumpy && r.negative_order_count > 0) {
      sum += r.pct_increase;
      ++n;
    }
  }
  const double avg = n ? sum / n : 0.0;
  o.check(n > 0 && avg >= 1.5 && avg <= 5.5, "average outside [1.5, 5.5]");
  o.detail << "average increase " << std::fixed << std::setprecision(2) << avg << "% over " << n
           << " augmented lumpy instances";
}

void c9(Outcome& o) {
  auto g = extended_grid(7, 1);
  g.patterns = {DemandPattern::lumpy};
  g.horizons = {100};
  g.cvs = {0.3};
  g.penalties = {10};
  g.fixed_costs = {225};
  const auto inst = materialize(g).front();
  SolveOptions opts;
  opts.optimizer.mode = SearchMode::bisection;
  const auto t0 = Clock::now();
  const auto rep = solve(inst, opts);
  const double t = seconds_since(t0);
  o.check(t < 300.0, "runtime");
  o.check(check_feasibility(rep.final_path).empty(), "final path feasible");
  o.detail << inst.id << ": " << std::fixed << std::setprecision(4) << "negative orders "
           << rep.negative_orders() << ", t_prep " << rep.times.prep_s << " s, t_shortest_path "
           << std::setprecision(6) << rep.times.shortest_path_s << " s, t_augment " << rep.times.augment_s
           << " s, total " << std::setprecision(2) << t << " s";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Outcome&)>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9};
  std::optional<int> only;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) {
      only = std::atoi(argv[++a]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only && (*only < 1 || *only > static_cast<int>(criteria.size()))) {
    std::cerr << "criterion must be 1.." << criteria.size() << "\n";
    return 2;
  }
  bool all = true;
  for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
    if (only && *only != k) continue;
    Outcome o;
    try {
      criteria[static_cast<std::size_t>(k - 1)](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
