#pragma once

// Repair of negative expected orders in a shortest-path solution. A violation
// at node i (inbound arc from m closes above the outbound order-up-to level)
// is fixed by
//   redirect   - the inbound arc (m, i) is moved onto a new virtual node i',
//   duplicate  - i' gets copies of the longer cycles leaving i,
//   recompute  - merged cycles R(m, k), k = i..j, start at m with a
//                zero-quantity review at i costing an extra K each,
// and the shortest path is re-solved until no violation remains.

#include <chrono>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rsgraph/cycle_cost.hpp"
#include "rsgraph/errors.hpp"
#include "rsgraph/graph.hpp"
#include "rsgraph/policy.hpp"

namespace rsgraph {

inline constexpr double kFeasibilityTolerance = 1e-9;

struct FeasibilityViolation {
  NodeId node;
  Arc inbound;   // closes at inbound.closing_inventory
  Arc outbound;  // opens at outbound.order_up_to
  double gap = 0.0;  // inbound.closing_inventory - outbound.order_up_to > 0
};

struct AugmentationTrace {
  std::vector<NodeId> introduced_nodes;
  std::size_t redirected_arcs = 0;
  std::size_t duplicated_arcs = 0;
  std::size_t recomputed_arcs = 0;
  std::size_t restored_arcs = 0;
  std::size_t iterations = 0;
  std::size_t violations_initial = 0;
  std::chrono::duration<double> wall_time{0.0};
  std::vector<std::string> log;

  std::string render() const {
    std::ostringstream out;
    out << "introduced_nodes " << introduced_nodes.size() << "\n"
        << "redirected_arcs " << redirected_arcs << "\n"
        << "duplicated_arcs " << duplicated_arcs << "\n"
        << "recomputed_arcs " << recomputed_arcs << "\n"
        << "restored_arcs " << restored_arcs << "\n"
        << "iterations " << iterations << "\n"
        << "violations_initial " << violations_initial << "\n"
        << "wall_time_s " << wall_time.count() << "\n";
    for (const auto& line : log) out << line << "\n";
    return out.str();
  }
};

/// One violation per consecutive arc pair whose inbound closing inventory
/// exceeds the outbound order-up-to level.
inline std::vector<FeasibilityViolation> check_feasibility(const PathSolution& path) {
  std::vector<FeasibilityViolation> out;
  for (std::size_t k = 1; k < path.arcs.size(); ++k) {
    const Arc& in = path.arcs[k - 1];
    const Arc& next = path.arcs[k];
    const double gap = in.closing_inventory - next.order_up_to;
    if (gap > kFeasibilityTolerance) out.push_back({next.from, in, next, gap});
  }
  return out;
}

/// Applies redirect / duplicate / recompute for one violation. Returns the new node.
inline NodeId augment_once(ReplenishmentGraph& g, const FeasibilityViolation& violation,
                           AugmentationTrace* trace = nullptr) {
  const Arc& in = violation.inbound;
  const Arc& out = violation.outbound;
  if (!g.is_live(in.id) || !g.is_live(out.id) || g.arc(in.id).to != violation.node ||
      g.arc(out.id).from != violation.node) {
    throw InternalError("augment_once: violation at " + to_string(violation.node) +
                        " references stale arcs");
  }
  const NodeId m = in.from;
  const NodeId i = violation.node;
  const NodeId w = out.to;
  const int T = g.horizon();
  const double K = g.params().fixed;

  const NodeId copy = g.add_virtual_node(i.period);
  std::size_t duplicated = 0;
  std::size_t recomputed = 0;

  // Filtered arcs were only dominated in the relaxed problem.
  const std::size_t restored = g.restore_filtered();

  // Redirect.
  g.remove_arc(in.id);
  Arc redirected = g.arc(in.id);
  redirected.to = copy;
  redirected.redirected = true;
  g.add_arc(redirected);

  // Duplicate the cycles leaving i that end beyond w. Cycles the filter removed
  // are restored from the connection matrix.
  std::set<int> plain_ends;
  for (ArcId id : g.out_arcs(i)) {
    Arc a = g.arc(id);
    if (a.to.period <= w.period) continue;
    if (a.zero_reviews.empty()) plain_ends.insert(a.to.period);
    a.from = copy;
    if (a.kind == ArcKind::normal) a.kind = ArcKind::duplicated;
    a.redirected = false;
    g.add_arc(a);
    ++duplicated;
  }
  for (int e = w.period + 1; e <= T + 1; ++e) {
    if (plain_ends.contains(e)) continue;
    g.add_arc(arc_from_cycle(g.matrix().arc(i.period, e), copy, {e, 0}, ArcKind::duplicated));
    ++duplicated;
  }

  // Recompute: merged cycles starting at m, one per end period i..w-1.
  for (int k = i.period; k < w.period; ++k) {
    std::vector<int> zero = in.zero_reviews;
    zero.push_back(i.period);
    for (int r : out.zero_reviews) {
      if (r <= k) zero.push_back(r);
    }
    std::sort(zero.begin(), zero.end());
    const CycleOptimum& merged = g.matrix().cycle(in.cycle_start, k);
    const NodeId target = (k + 1 == w.period) ? w : NodeId{k + 1, 0};
    Arc a = arc_from_cycle(merged, m, target, ArcKind::recomputed);
    a.cost = merged.expected_cost + K * static_cast<double>(zero.size());
    a.zero_reviews = std::move(zero);
    a.via = copy;
    g.add_arc(std::move(a));
    ++recomputed;
  }

  if (trace) {
    trace->introduced_nodes.push_back(copy);
    ++trace->redirected_arcs;
    trace->duplicated_arcs += duplicated;
    trace->recomputed_arcs += recomputed;
    trace->restored_arcs += restored;
    std::ostringstream line;
    line << "augment " << to_string(i) << " -> " << to_string(copy) << ": inbound "
         << to_string(m) << "->" << to_string(i) << " closes at " << in.closing_inventory
         << ", outbound " << to_string(i) << "->" << to_string(w) << " opens at "
         << out.order_up_to << " (gap " << violation.gap << "); " << duplicated
         << " duplicated, " << recomputed << " recomputed, " << restored << " restored";
    trace->log.push_back(line.str());
  }
  return copy;
}

struct AugmentOptions {
  // Maximum number of augmentations; 0 means 10 * T.
  std::size_t max_augmentations = 0;
};

struct AugmentResult {
  PathSolution relaxed;  // first shortest path
  PathSolution path;     // final, violation-free
  PolicyParams policy;
  AugmentationTrace trace;
};

/// Shortest path, then repeatedly augment the earliest violation and re-solve
/// until the path carries no negative expected order.
inline AugmentResult repetitive_augment(ReplenishmentGraph& g, const DemandProfile& demand,
                                        const AugmentOptions& opts = {}) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t cap =
      opts.max_augmentations ? opts.max_augmentations : 10 * static_cast<std::size_t>(g.horizon());
  AugmentResult result;
  result.relaxed = shortest_path(g);
  PathSolution current = result.relaxed;
  auto violations = check_feasibility(current);
  result.trace.violations_initial = violations.size();
  while (!violations.empty()) {
    if (result.trace.introduced_nodes.size() >= cap) {
      result.trace.wall_time = std::chrono::steady_clock::now() - started;
      std::ostringstream msg;
      msg << "augmentation did not terminate within " << cap << " augmentations; last path "
          << render_path(current) << " still has " << violations.size() << " violation(s)";
      throw NonTerminationError(msg.str(), result.trace.render());
    }
    augment_once(g, violations.front(), &result.trace);
    ++result.trace.iterations;
    current = shortest_path(g);
    violations = check_feasibility(current);
  }
  result.path = std::move(current);
  result.policy = extract_policy(result.path, demand,
                                 result.trace.introduced_nodes.empty() ? PolicySource::relaxed
                                                                       : PolicySource::augmented);
  result.trace.wall_time = std::chrono::steady_clock::now() - started;
  return result;
}

}  // namespace rsgraph
