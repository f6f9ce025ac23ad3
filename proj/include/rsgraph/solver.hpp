#pragma once

// End-to-end pipeline: connection matrix, relaxed shortest path, and (only
// when the relaxed path has a negative expected order) filtering followed by
// repetitive augmentation.

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "rsgraph/augmentation.hpp"
#include "rsgraph/cycle_cost.hpp"
#include "rsgraph/graph.hpp"
#include "rsgraph/instance.hpp"
#include "rsgraph/policy.hpp"

namespace rsgraph {

struct SolveOptions {
  OptimizerOptions optimizer;
  bool filter = true;
  AugmentOptions augment;
  unsigned threads = 1;  // connection-matrix population
  bool keep_graph_dumps = false;
};

struct StageTimes {
  double prep_s = 0.0;           // connection matrix
  double shortest_path_s = 0.0;  // first Dijkstra on the complete graph
  double augment_s = 0.0;        // filter + augmentation + re-optimisation
};

struct SolveReport {
  std::shared_ptr<const ConnectionMatrix> matrix;
  PathSolution relaxed;
  PathSolution final_path;
  PolicyParams relaxed_policy;
  PolicyParams policy;
  AugmentationTrace trace;
  std::size_t filtered_arcs = 0;
  // Path costs plus the constant -z * initial_inventory.
  double relaxed_cost = 0.0;
  double augmented_cost = 0.0;
  StageTimes times;
  std::string unfiltered_dump;
  std::string filtered_dump;
  std::string augmented_dump;

  std::size_t negative_orders() const { return trace.violations_initial; }
  double pct_increase() const {
    return relaxed_cost != 0.0 ? 100.0 * (augmented_cost - relaxed_cost) / relaxed_cost : 0.0;
  }
};

inline SolveReport solve(const Instance& inst, const SolveOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  validate(inst);
  const DemandProfile demand = inst.profile();
  const double offset = -inst.costs.unit * inst.initial_inventory;
  SolveReport rep;

  auto t0 = clock::now();
  rep.matrix = std::make_shared<const ConnectionMatrix>(
      build_connection_matrix(inst, opts.optimizer, opts.threads));
  auto t1 = clock::now();
  rep.times.prep_s = std::chrono::duration<double>(t1 - t0).count();

  ReplenishmentGraph graph = build_graph(rep.matrix, inst.costs);
  if (opts.keep_graph_dumps) rep.unfiltered_dump = dump_graph(graph);
  t0 = clock::now();
  rep.relaxed = shortest_path(graph);
  t1 = clock::now();
  rep.times.shortest_path_s = std::chrono::duration<double>(t1 - t0).count();
  rep.relaxed_policy = extract_policy(rep.relaxed, demand, PolicySource::relaxed);
  rep.relaxed_cost = rep.relaxed.total_cost + offset;

  const auto violations = check_feasibility(rep.relaxed);
  if (violations.empty()) {
    rep.final_path = rep.relaxed;
    rep.policy = rep.relaxed_policy;
    rep.augmented_cost = rep.relaxed_cost;
    if (opts.keep_graph_dumps) {
      ReplenishmentGraph filtered = graph;
      if (opts.filter) filter_arcs(filtered);
      rep.filtered_dump = dump_graph(filtered);
      rep.augmented_dump = rep.filtered_dump;
    }
    return rep;
  }

  t0 = clock::now();
  if (opts.filter) rep.filtered_arcs = filter_arcs(graph);
  if (opts.keep_graph_dumps) rep.filtered_dump = dump_graph(graph);
  AugmentResult aug = repetitive_augment(graph, demand, opts.augment);
  t1 = clock::now();
  rep.times.augment_s = std::chrono::duration<double>(t1 - t0).count();
  if (opts.keep_graph_dumps) rep.augmented_dump = dump_graph(graph);
  rep.final_path = std::move(aug.path);
  rep.policy = std::move(aug.policy);
  rep.policy.source = PolicySource::augmented;
  rep.trace = std::move(aug.trace);
  rep.trace.violations_initial = violations.size();
  rep.augmented_cost = rep.final_path.total_cost + offset;
  return rep;
}

}  // namespace rsgraph
