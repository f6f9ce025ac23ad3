#pragma once

// Monte Carlo evaluation of an (R_t, S_t) policy under Normal demand, and the
// analytic expected inventory profile.
//
// Two order rules:
//   planned - the review raises (or lowers) inventory to S exactly, so a
//             realised order may be negative. This is the accounting of the
//             relaxed cycle costs; the sample mean converges to the sum of
//             the path's arc costs.
//   clipped - the review orders max(0, S - I); excess stock is carried.
// A review always pays K, including zero-quantity reviews, which never order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rsgraph/demand.hpp"
#include "rsgraph/errors.hpp"
#include "rsgraph/instance.hpp"
#include "rsgraph/policy.hpp"

namespace rsgraph {

enum class OrderRule { planned, clipped };

inline const char* to_string(OrderRule r) { return r == OrderRule::planned ? "planned" : "clipped"; }

inline OrderRule parse_order_rule(const std::string& s) {
  if (s == "planned") return OrderRule::planned;
  if (s == "clipped") return OrderRule::clipped;
  throw InputError("unknown order rule '" + s + "' (expected planned or clipped)");
}

struct SimulationOptions {
  std::size_t replications = 500000;
  std::uint64_t seed = 12345;
  OrderRule rule = OrderRule::planned;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct SimulationReport {
  std::size_t replications = 0;
  OrderRule rule = OrderRule::planned;
  double mean_cost = 0.0;
  double std_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  double mean_ordering = 0.0;
  double mean_holding = 0.0;
  double mean_penalty = 0.0;
  std::vector<double> per_period_expected_inventory;  // mean closing net inventory
  std::vector<double> per_period_inventory_std_error;
  // Reviews where S was below the opening inventory (a negative realised order).
  std::size_t negative_order_events = 0;
  std::size_t review_events = 0;

  double negative_order_fraction() const {
    return review_events ? static_cast<double>(negative_order_events) / static_cast<double>(review_events)
                         : 0.0;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the independent stream used by replication `rep`.
inline std::uint64_t replication_seed(std::uint64_t master, std::uint64_t rep) {
  return splitmix64(splitmix64(master) ^ splitmix64(rep + 0x632BE59BD9B4E019ULL));
}

inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct ReplicationOutcome {
  double ordering = 0.0;
  double holding = 0.0;
  double penalty = 0.0;
  std::size_t negative_orders = 0;
  std::size_t reviews = 0;
};

}  // namespace detail

inline void check_compatible(const Instance& inst, const PolicyParams& policy) {
  if (policy.horizon() != inst.horizon()) {
    throw InputError("policy horizon " + std::to_string(policy.horizon()) +
                     " does not match instance horizon " + std::to_string(inst.horizon()));
  }
  validate(policy);
}

inline SimulationReport simulate_policy(const Instance& inst, const PolicyParams& policy,
                                        const SimulationOptions& opts = {}) {
  validate(inst);
  check_compatible(inst, policy);
  if (opts.replications < 1) throw InputError("replications must be at least 1");
  const int T = inst.horizon();
  const auto demands = inst.demands();
  const auto& c = inst.costs;
  const std::size_t n = opts.replications;

  std::vector<double> totals(n), ordering(n), holding(n), penalty(n);
  std::vector<std::size_t> neg(n), reviews(n);
  // Per-period closing inventory: Welford accumulators per fixed block of
  // replications, merged in block order so the result does not depend on
  // the thread count.
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const auto Tz = static_cast<std::size_t>(T);
  std::vector<double> block_mean(blocks * Tz, 0.0), block_m2(blocks * Tz, 0.0);

  auto run_block = [&](std::size_t b) {
    const std::size_t first = b * kBlock;
    const std::size_t last = std::min(n, first + kBlock);
    double* bm = block_mean.data() + b * Tz;
    double* bm2 = block_m2.data() + b * Tz;
    for (std::size_t r = first; r < last; ++r) {
      std::mt19937_64 rng(detail::replication_seed(opts.seed, r));
      std::normal_distribution<double> unit_normal(0.0, 1.0);
      double inv = inst.initial_inventory;
      detail::ReplicationOutcome o;
      const double count = static_cast<double>(r - first + 1);
      for (int t = 1; t <= T; ++t) {
        const auto& d = policy.at(t);
        if (d.review) {
          o.ordering += c.fixed;
          ++o.reviews;
          if (!d.zero_quantity) {
            double q = d.order_up_to - inv;
            if (q < 0.0) {
              ++o.negative_orders;
              if (opts.rule == OrderRule::clipped) q = 0.0;
            }
            o.ordering += c.unit * q;
            inv += q;
          }
        }
        const auto& pd = demands[static_cast<std::size_t>(t - 1)];
        inv -= pd.mean + pd.std_dev * unit_normal(rng);
        o.holding += c.holding * std::max(inv, 0.0);
        o.penalty += c.penalty * std::max(-inv, 0.0);
        const auto k = static_cast<std::size_t>(t - 1);
        const double delta = inv - bm[k];
        bm[k] += delta / count;
        bm2[k] += delta * (inv - bm[k]);
      }
      ordering[r] = o.ordering;
      holding[r] = o.holding;
      penalty[r] = o.penalty;
      totals[r] = o.ordering + o.holding + o.penalty;
      neg[r] = o.negative_orders;
      reviews[r] = o.reviews;
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += threads) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  SimulationReport rep;
  rep.replications = n;
  rep.rule = opts.rule;
  const double dn = static_cast<double>(n);
  rep.mean_cost = detail::pairwise_sum(totals) / dn;
  rep.mean_ordering = detail::pairwise_sum(ordering) / dn;
  rep.mean_holding = detail::pairwise_sum(holding) / dn;
  rep.mean_penalty = detail::pairwise_sum(penalty) / dn;
  std::vector<double> sq(n);
  for (std::size_t r = 0; r < n; ++r) sq[r] = (totals[r] - rep.mean_cost) * (totals[r] - rep.mean_cost);
  const double var = n > 1 ? detail::pairwise_sum(sq) / (dn - 1.0) : 0.0;
  rep.std_error = std::sqrt(var / dn);
  rep.ci95_low = rep.mean_cost - 1.96 * rep.std_error;
  rep.ci95_high = rep.mean_cost + 1.96 * rep.std_error;
  for (std::size_t k = 0; k < Tz; ++k) {
    double mean = 0.0, m2 = 0.0, count = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      const double nb = static_cast<double>(std::min(n, (b + 1) * kBlock) - b * kBlock);
      const double delta = block_mean[b * Tz + k] - mean;
      const double total = count + nb;
      mean += delta * nb / total;
      m2 += block_m2[b * Tz + k] + delta * delta * count * nb / total;
      count = total;
    }
    const double v = n > 1 ? m2 / (dn - 1.0) : 0.0;
    rep.per_period_expected_inventory.push_back(mean);
    rep.per_period_inventory_std_error.push_back(std::sqrt(v / dn));
  }
  for (std::size_t r = 0; r < n; ++r) {
    rep.negative_order_events += neg[r];
    rep.review_events += reviews[r];
  }
  return rep;
}

struct TraceRow {
  int period = 1;
  double expected_opening = 0.0;
  double expected_closing = 0.0;
  double order_up_to = std::numeric_limits<double>::quiet_NaN();  // NaN when not reviewed
};

/// Expected opening and closing net inventory per period under the planned
/// order rule. A planned level below the previous closing level shows up as
/// an opening drop (a negative expected order).
inline std::vector<TraceRow> expected_trace(const Instance& inst, const PolicyParams& policy) {
  check_compatible(inst, policy);
  std::vector<TraceRow> rows;
  double level = inst.initial_inventory;
  for (int t = 1; t <= inst.horizon(); ++t) {
    const auto& d = policy.at(t);
    TraceRow row;
    row.period = t;
    if (d.review && !d.zero_quantity) level = d.order_up_to;
    if (d.review) row.order_up_to = d.order_up_to;
    row.expected_opening = level;
    level -= inst.means[static_cast<std::size_t>(t - 1)];
    row.expected_closing = level;
    rows.push_back(row);
  }
  return rows;
}

/// Negative expected orders in a policy: reviews whose level is below the
/// expected inventory carried in.
inline std::vector<int> expected_negative_orders(const Instance& inst, const PolicyParams& policy) {
  std::vector<int> out;
  const auto rows = expected_trace(inst, policy);
  double carried = inst.initial_inventory;
  for (const auto& row : rows) {
    const auto& d = policy.at(row.period);
    if (d.review && !d.zero_quantity && row.period > 1 && d.order_up_to < carried - 1e-9) {
      out.push_back(row.period);
    }
    carried = row.expected_closing;
  }
  return out;
}

/// Expected total cost under the planned order rule, from loss functions.
/// Demand variance accumulates from the last non-zero review.
inline double analytic_policy_cost(const Instance& inst, const PolicyParams& policy) {
  check_compatible(inst, policy);
  const DemandProfile demand = inst.profile();
  const auto& c = inst.costs;
  double cost = -c.unit * inst.initial_inventory;
  int start = 0;
  double level = 0.0;
  double carried = inst.initial_inventory;
  for (int t = 1; t <= inst.horizon(); ++t) {
    const auto& d = policy.at(t);
    if (d.review) cost += c.fixed;
    if (d.review && !d.zero_quantity) {
      start = t;
      level = d.order_up_to;
      cost += c.unit * (level - carried);
    }
    const HorizonDemand dem = demand.cumulative(start, t);
    cost += c.holding * complementary_loss(level, dem) + c.penalty * loss(level, dem);
    carried = level - dem.mean;
  }
  return cost;
}

inline std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out.precision(10);
  out << "period,expected_opening,expected_closing,S_if_review\n";
  for (const auto& r : rows) {
    out << r.period << ',' << r.expected_opening << ',' << r.expected_closing << ',';
    if (std::isfinite(r.order_up_to)) out << r.order_up_to;
    out << '\n';
  }
  return out.str();
}

}  // namespace rsgraph
