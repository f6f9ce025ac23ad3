#pragma once

// Exhaustive reference solver for small horizons. Enumerates every review
// schedule with an order in period 1 and, per schedule, minimises the total
// expected cost over the order-up-to vector, optionally subject to
// S_c >= (expected closing inventory of the previous cycle). Normal loss
// values come from Boost.Math, independent of the solver's own loss code.
// The minimisation is a chain DP on a grid (step = mean period demand / 200)
// followed by local grid refinements around the incumbent.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "rsgraph/errors.hpp"
#include "rsgraph/instance.hpp"

namespace rsgraph {

struct OracleOptions {
  bool constrained = true;
  double step_fraction = 1.0 / 200.0;  // of the mean per-period demand
  int refinements = 4;
  int refine_factor = 25;  // each refinement divides the step by this
  int max_horizon = 8;
};

struct OracleResult {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> reviews;           // periods with an order (period 1 first)
  std::vector<double> order_up_to;    // one per review
  std::vector<bool> zero_quantity;    // S equal to the carried inventory
  double grid_step = 0.0;             // coarse step
  double final_step = 0.0;            // step after refinement
  bool constrained = true;
  std::size_t schedules = 0;
};

namespace oracle_detail {

struct Cycle {
  int first = 1;
  int last = 1;
};

class CycleCosts {
 public:
  explicit CycleCosts(const Instance& inst) : inst_(inst) {}

  // Expected cost of a cycle opened at level s, including z * (cycle mean)
  // and, for the final cycle, z * (closing level).
  double operator()(const Cycle& c, double s) const {
    const auto& p = inst_.costs;
    double cost = p.fixed;
    double mu = 0.0;
    double var = 0.0;
    for (int k = c.first; k <= c.last; ++k) {
      const double m = inst_.means[static_cast<std::size_t>(k - 1)];
      mu += m;
      var += (inst_.cv * m) * (inst_.cv * m);
      double over = 0.0;   // E[(s - D)^+]
      double under = 0.0;  // E[(D - s)^+]
      if (var <= 0.0) {
        over = std::max(s - mu, 0.0);
        under = std::max(mu - s, 0.0);
      } else {
        const double sd = std::sqrt(var);
        const boost::math::normal_distribution<double> nd(mu, sd);
        const double density = boost::math::pdf(nd, s);
        const double below = boost::math::cdf(nd, s);
        const double above = boost::math::cdf(boost::math::complement(nd, s));
        // E[(D - s)^+] = sd^2 f(s) + (mu - s) P(D > s)
        under = var * density + (mu - s) * above;
        over = var * density + (s - mu) * below;
      }
      cost += p.holding * over + p.penalty * under;
    }
    cost += p.unit * mu;
    if (c.last == inst_.horizon()) cost += p.unit * (s - mu);
    return cost;
  }

  double mean(const Cycle& c) const {
    double mu = 0.0;
    for (int k = c.first; k <= c.last; ++k) mu += inst_.means[static_cast<std::size_t>(k - 1)];
    return mu;
  }

 private:
  const Instance& inst_;
};

struct ChainSolution {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<double> levels;
};

// DP over per-cycle sorted grids: minimise sum f_c(S_c) subject to
// S_c >= S_{c-1} - mean_{c-1} when constrained.
inline ChainSolution solve_chain(const std::vector<Cycle>& cycles,
                                 const std::vector<std::vector<double>>& grids,
                                 const std::vector<std::vector<double>>& values,
                                 const std::vector<double>& means, bool constrained) {
  const std::size_t n = cycles.size();
  std::vector<std::vector<double>> best(n);
  std::vector<std::vector<std::size_t>> arg(n);
  best[0] = values[0];
  for (std::size_t c = 1; c < n; ++c) {
    const auto& prev_grid = grids[c - 1];
    const auto& prev_best = best[c - 1];
    // Prefix minima of the previous stage.
    std::vector<double> pmin(prev_best.size());
    std::vector<std::size_t> parg(prev_best.size());
    for (std::size_t g = 0; g < prev_best.size(); ++g) {
      if (g == 0 || prev_best[g] < pmin[g - 1]) {
        pmin[g] = prev_best[g];
        parg[g] = g;
      } else {
        pmin[g] = pmin[g - 1];
        parg[g] = parg[g - 1];
      }
    }
    const auto& grid = grids[c];
    best[c].assign(grid.size(), std::numeric_limits<double>::infinity());
    arg[c].assign(grid.size(), 0);
    std::size_t ptr = 0;  // count of previous levels <= S + mean
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::size_t limit = prev_grid.size();
      if (constrained) {
        const double cap = grid[g] + means[c - 1];
        while (ptr < prev_grid.size() && prev_grid[ptr] <= cap) ++ptr;
        limit = ptr;
      }
      if (limit == 0) continue;
      best[c][g] = values[c][g] + pmin[limit - 1];
      arg[c][g] = parg[limit - 1];
    }
  }
  ChainSolution sol;
  std::size_t at = 0;
  for (std::size_t g = 0; g < best[n - 1].size(); ++g) {
    if (best[n - 1][g] < sol.cost) {
      sol.cost = best[n - 1][g];
      at = g;
    }
  }
  if (!std::isfinite(sol.cost)) return sol;
  sol.levels.assign(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    sol.levels[c] = grids[c][at];
    if (c > 0) at = arg[c][at];
  }
  return sol;
}

}  // namespace oracle_detail

inline OracleResult schedule_enumeration_oracle(const Instance& inst, const OracleOptions& opts = {}) {
  using namespace oracle_detail;
  validate(inst);
  const int T = inst.horizon();
  if (T > opts.max_horizon) {
    throw InputError("schedule enumeration oracle supports horizons up to " +
                     std::to_string(opts.max_horizon) + ", got " + std::to_string(T));
  }
  const CycleCosts cost(inst);
  double total_mean = 0.0;
  double total_var = 0.0;
  for (double m : inst.means) {
    total_mean += m;
    total_var += (inst.cv * m) * (inst.cv * m);
  }
  const double step = std::max(total_mean / T, 1e-3) * opts.step_fraction;
  const double lo = -8.0 * std::sqrt(total_var) - 1.0;
  const double hi = total_mean + 8.0 * std::sqrt(total_var) + 1.0;
  std::vector<double> base;
  for (double s = lo; s <= hi; s += step) base.push_back(s);

  std::map<std::pair<int, int>, std::vector<double>> cached;
  auto base_values = [&](const Cycle& c) -> const std::vector<double>& {
    auto [it, inserted] = cached.try_emplace({c.first, c.last});
    if (inserted) {
      it->second.reserve(base.size());
      for (double s : base) it->second.push_back(cost(c, s));
    }
    return it->second;
  };

  OracleResult result;
  result.constrained = opts.constrained;
  result.grid_step = step;
  double final_step = step;
  const unsigned schedules = 1u << static_cast<unsigned>(T - 1);
  for (unsigned mask = 0; mask < schedules; ++mask) {
    std::vector<int> reviews{1};
    for (int t = 2; t <= T; ++t) {
      if (mask & (1u << static_cast<unsigned>(t - 2))) reviews.push_back(t);
    }
    std::vector<Cycle> cycles;
    std::vector<double> means;
    for (std::size_t r = 0; r < reviews.size(); ++r) {
      const int last = (r + 1 < reviews.size()) ? reviews[r + 1] - 1 : T;
      cycles.push_back({reviews[r], last});
      means.push_back(cost.mean(cycles.back()));
    }
    std::vector<std::vector<double>> grids(cycles.size(), base);
    std::vector<std::vector<double>> values;
    for (const auto& c : cycles) values.push_back(base_values(c));
    ChainSolution sol = solve_chain(cycles, grids, values, means, opts.constrained);
    double s = step;
    for (int pass = 0; pass < opts.refinements && std::isfinite(sol.cost); ++pass) {
      const double fine = s / opts.refine_factor;
      const int half = 2 * opts.refine_factor;
      for (std::size_t c = 0; c < cycles.size(); ++c) {
        grids[c].clear();
        values[c].clear();
        for (int j = -half; j <= half; ++j) {
          const double level = sol.levels[c] + j * fine;
          grids[c].push_back(level);
          values[c].push_back(cost(cycles[c], level));
        }
      }
      ChainSolution refined = solve_chain(cycles, grids, values, means, opts.constrained);
      if (refined.cost <= sol.cost) sol = std::move(refined);
      s = fine;
    }
    final_step = s;
    ++result.schedules;
    if (sol.cost < result.cost) {
      result.cost = sol.cost;
      result.reviews = reviews;
      result.order_up_to = sol.levels;
      result.zero_quantity.assign(reviews.size(), false);
      for (std::size_t c = 1; c < cycles.size(); ++c) {
        const double carried = sol.levels[c - 1] - means[c - 1];
        result.zero_quantity[c] = sol.levels[c] <= carried + 10.0 * s;
      }
    }
  }
  result.final_step = final_step;
  result.cost -= inst.costs.unit * inst.initial_inventory;
  return result;
}

}  // namespace rsgraph
