#pragma once

// Expected cost of a replenishment cycle R(i, j) as a function of its
// order-up-to level, the minimising level, and the connection matrix over all
// candidate cycles.
//
// Holding and back-order costs are summed over every period k of the cycle,
// each evaluated against cumulative demand d(i..k). The unit ordering cost z
// telescopes over a plan to z * (total mean demand + final closing inventory
// - initial inventory), so each arc carries z * (cycle mean) and only a cycle
// that ends at the horizon also carries z * (its closing inventory).

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "rsgraph/demand.hpp"
#include "rsgraph/errors.hpp"
#include "rsgraph/instance.hpp"

namespace rsgraph {

struct CycleOptimum {
  int start = 1;  // first period covered
  int end = 1;    // last period covered
  double order_up_to = 0.0;
  double expected_cost = 0.0;
  double expected_closing_inventory = 0.0;
  std::vector<double> expected_holding;    // H_k, k = start..end
  std::vector<double> expected_backorder;  // B_k, k = start..end
};

enum class SearchMode { bisection, grid };

struct OptimizerOptions {
  SearchMode mode = SearchMode::bisection;
  double tolerance = 1e-9;  // absolute, on the order-up-to level
  int max_iterations = 200;
  double grid_step = 1.0;
  // Grid range is [grid_lower, grid_upper]; a non-finite upper bound means
  // 4 * (total mean demand over the horizon).
  double grid_lower = 0.0;
  double grid_upper = std::numeric_limits<double>::quiet_NaN();
};

inline void check_cycle_range(const DemandProfile& demand, int i, int j) {
  if (i < 1 || j < i || j > demand.horizon()) {
    std::ostringstream msg;
    msg << "cycle [" << i << ", " << j << "] outside horizon 1.." << demand.horizon();
    throw InputError(msg.str());
  }
}

/// K + sum over k = i..j of h * E[max(y - d(i..k), 0)] + b * E[max(d(i..k) - y, 0)].
inline double cycle_cost_at(int i, int j, double y, const CostParams& params,
                            const DemandProfile& demand) {
  check_cycle_range(demand, i, j);
  double cost = params.fixed;
  for (int k = i; k <= j; ++k) {
    const HorizonDemand d = demand.cumulative(i, k);
    cost += params.holding * complementary_loss(y, d) + params.penalty * loss(y, d);
  }
  return cost;
}

namespace detail {

// Linear cost attached to a cycle: z * (cycle mean) plus, for the final cycle,
// z * (closing inventory).
inline double unit_cost_term(int i, int j, double y, const CostParams& params,
                             const DemandProfile& demand) {
  if (params.unit == 0.0) return 0.0;
  const double cycle_mean = demand.mean(i, j);
  double term = params.unit * cycle_mean;
  if (j == demand.horizon()) term += params.unit * (y - cycle_mean);
  return term;
}

// Right derivative of the full cycle cost in y. Non-decreasing.
inline double cycle_cost_slope(int i, int j, double y, const CostParams& params,
                               const DemandProfile& demand) {
  double stockout_free = 0.0;  // sum of P(d(i..k) <= y)
  for (int k = i; k <= j; ++k) {
    const HorizonDemand d = demand.cumulative(i, k);
    if (d.std_dev <= 0.0) {
      stockout_free += (y >= d.mean) ? 1.0 : 0.0;
    } else {
      stockout_free += std_normal_cdf((y - d.mean) / d.std_dev);
    }
  }
  const double periods = static_cast<double>(j - i + 1);
  double slope = (params.holding + params.penalty) * stockout_free - periods * params.penalty;
  if (j == demand.horizon()) slope += params.unit;
  return slope;
}

inline double bisect_order_up_to(int i, int j, const CostParams& params,
                                 const DemandProfile& demand, const OptimizerOptions& opts) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int k = i; k <= j; ++k) {
    const HorizonDemand d = demand.cumulative(i, k);
    lo = std::min(lo, d.mean - 12.0 * d.std_dev);
    hi = std::max(hi, d.mean + 12.0 * d.std_dev);
  }
  lo -= 1.0;
  hi += 1.0;
  for (int expand = 0; expand < 60 && cycle_cost_slope(i, j, lo, params, demand) >= 0.0; ++expand) {
    lo -= (hi - lo);
  }
  for (int expand = 0; expand < 60 && cycle_cost_slope(i, j, hi, params, demand) < 0.0; ++expand) {
    hi += (hi - lo);
  }
  const double slope_lo = cycle_cost_slope(i, j, lo, params, demand);
  const double slope_hi = cycle_cost_slope(i, j, hi, params, demand);
  if (!(slope_lo < 0.0) || slope_hi < 0.0) {
    std::ostringstream msg;
    msg << "optimize_order_up_to: cannot bracket the minimiser of cycle [" << i << ", " << j
        << "] (slope " << slope_lo << " at " << lo << ", " << slope_hi << " at " << hi << ")";
    throw NumericalError(msg.str());
  }
  for (int it = 0; it < opts.max_iterations && hi - lo > opts.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cycle_cost_slope(i, j, mid, params, demand) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double grid_order_up_to(int i, int j, const CostParams& params,
                               const DemandProfile& demand, const OptimizerOptions& opts) {
  if (!(opts.grid_step > 0.0)) throw InputError("grid step must be positive");
  double upper = opts.grid_upper;
  if (!std::isfinite(upper)) upper = 4.0 * demand.mean(1, demand.horizon());
  upper = std::max(upper, opts.grid_lower);
  const auto points = static_cast<long long>(std::floor((upper - opts.grid_lower) / opts.grid_step)) + 1;
  double best_y = opts.grid_lower;
  double best_cost = std::numeric_limits<double>::infinity();
  for (long long g = 0; g < points; ++g) {
    const double y = opts.grid_lower + static_cast<double>(g) * opts.grid_step;
    const double cost = cycle_cost_at(i, j, y, params, demand) + unit_cost_term(i, j, y, params, demand);
    if (cost < best_cost) {
      best_cost = cost;
      best_y = y;
    }
  }
  return best_y;
}

}  // namespace detail

/// Full record for cycle [i, j] evaluated at a given order-up-to level.
inline CycleOptimum evaluate_cycle(int i, int j, double y, const CostParams& params,
                                   const DemandProfile& demand) {
  check_cycle_range(demand, i, j);
  CycleOptimum out;
  out.start = i;
  out.end = j;
  out.order_up_to = y;
  out.expected_cost = params.fixed + detail::unit_cost_term(i, j, y, params, demand);
  out.expected_holding.reserve(static_cast<std::size_t>(j - i + 1));
  out.expected_backorder.reserve(static_cast<std::size_t>(j - i + 1));
  for (int k = i; k <= j; ++k) {
    const HorizonDemand d = demand.cumulative(i, k);
    const double held = complementary_loss(y, d);
    const double short_ = loss(y, d);
    out.expected_holding.push_back(held);
    out.expected_backorder.push_back(short_);
    out.expected_cost += params.holding * held + params.penalty * short_;
  }
  out.expected_closing_inventory = y - demand.mean(i, j);
  return out;
}

/// Minimise the cycle cost over the order-up-to level.
inline CycleOptimum optimize_order_up_to(int i, int j, const CostParams& params,
                                         const DemandProfile& demand,
                                         const OptimizerOptions& opts = {}) {
  check_cycle_range(demand, i, j);
  const double y = (opts.mode == SearchMode::bisection)
                       ? detail::bisect_order_up_to(i, j, params, demand, opts)
                       : detail::grid_order_up_to(i, j, params, demand, opts);
  return evaluate_cycle(i, j, y, params, demand);
}

// Arc (i, j), 1 <= i < j <= T+1, holds the optimum of cycle R(i, j-1).
class ConnectionMatrix {
 public:
  ConnectionMatrix() = default;

  ConnectionMatrix(int horizon, std::vector<CycleOptimum> entries)
      : horizon_(horizon), entries_(std::move(entries)) {}

  int horizon() const { return horizon_; }
  std::size_t size() const { return entries_.size(); }

  const CycleOptimum& arc(int from, int to) const {
    if (from < 1 || to <= from || to > horizon_ + 1) {
      std::ostringstream msg;
      msg << "arc (" << from << ", " << to << ") outside 1.." << horizon_ + 1;
      throw InputError(msg.str());
    }
    return entries_[index(horizon_, from, to)];
  }

  const CycleOptimum& cycle(int first, int last) const { return arc(first, last + 1); }

  static std::size_t index(int horizon, int from, int to) {
    // Row `from` holds horizon + 1 - from entries.
    const auto f = static_cast<std::size_t>(from - 1);
    const auto t1 = static_cast<std::size_t>(horizon);
    return f * t1 - f * (f - 1) / 2 + static_cast<std::size_t>(to - from - 1);
  }

 private:
  int horizon_ = 0;
  std::vector<CycleOptimum> entries_;
};

/// Populate all T(T+1)/2 cycle optima. Entries are independent; `threads` = 0
/// uses the hardware concurrency.
inline ConnectionMatrix build_connection_matrix(const Instance& inst,
                                                const OptimizerOptions& opts = {},
                                                unsigned threads = 1) {
  validate(inst);
  const DemandProfile demand = inst.profile();
  const int T = inst.horizon();
  std::vector<CycleOptimum> entries(static_cast<std::size_t>(T) * static_cast<std::size_t>(T + 1) / 2);
  auto fill_row = [&](int from) {
    for (int to = from + 1; to <= T + 1; ++to) {
      entries[ConnectionMatrix::index(T, from, to)] =
          optimize_order_up_to(from, to - 1, inst.costs, demand, opts);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || T < 8) {
    for (int from = 1; from <= T; ++from) fill_row(from);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int from = 1 + static_cast<int>(w); from <= T; from += static_cast<int>(threads)) {
            fill_row(from);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return ConnectionMatrix(T, std::move(entries));
}

}  // namespace rsgraph
