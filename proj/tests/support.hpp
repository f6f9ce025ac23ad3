#pragma once

#include <random>

#include "rsgraph/rsgraph.hpp"

namespace rsgraph::testing {

inline Instance five_period() {
  Instance inst;
  inst.id = "five-period";
  inst.means = {100, 125, 25, 40, 30};
  inst.cv = 0.3;
  inst.costs = {50.0, 0.0, 1.0, 19.0};
  return inst;
}

// Random costs and an erratic or lumpy demand vector.
inline Instance random_instance(std::mt19937_64& rng, int horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance inst;
  inst.pattern = u(rng) < 0.5 ? DemandPattern::erratic : DemandPattern::lumpy;
  inst.means = generate_means(inst.pattern, horizon, rng);
  inst.cv = 0.05 + 0.25 * u(rng);
  inst.costs.fixed = 20.0 + 600.0 * u(rng);
  inst.costs.holding = 1.0;
  inst.costs.penalty = 2.0 + 18.0 * u(rng);
  inst.id = "random";
  return inst;
}

}  // namespace rsgraph::testing
