#pragma once

// Replenishment DAG: node t is the start of period t, node T+1 is the end of
// the horizon, arc (i, j) is the cycle R(i, j-1). Augmentation adds virtual
// copies of nodes (tag > 0, rendered with primes) and merged-cycle arcs.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "rsgraph/cycle_cost.hpp"
#include "rsgraph/errors.hpp"

namespace rsgraph {

struct NodeId {
  int period = 1;
  int tag = 0;  // 0 for original nodes, k for the k-th virtual copy

  auto operator<=>(const NodeId&) const = default;
};

inline std::string to_string(NodeId n) {
  std::string s = std::to_string(n.period);
  if (n.tag <= 3) {
    s.append(static_cast<std::size_t>(n.tag), '\'');
  } else {
    s += "^" + std::to_string(n.tag);
  }
  return s;
}

enum class ArcKind { normal, duplicated, recomputed };

inline const char* to_string(ArcKind k) {
  switch (k) {
    case ArcKind::normal: return "normal";
    case ArcKind::duplicated: return "duplicated";
    case ArcKind::recomputed: return "recomputed";
  }
  return "normal";
}

using ArcId = std::size_t;

struct Arc {
  ArcId id = 0;
  NodeId from;
  NodeId to;
  double cost = 0.0;
  ArcKind kind = ArcKind::normal;
  int cycle_start = 1;  // period of the (non-zero) order opening the cycle
  int cycle_end = 1;    // last period covered
  double order_up_to = 0.0;
  double closing_inventory = 0.0;
  // Periods inside the cycle that are reviewed but order nothing. Each costs K.
  std::vector<int> zero_reviews;
  // Recomputed arcs start at the anchor node `from` (the upstream node whose
  // cycle absorbed the infeasible one); `via` is the virtual node that owns them.
  std::optional<NodeId> via;
  bool redirected = false;
};

class ReplenishmentGraph {
 public:
  ReplenishmentGraph(std::shared_ptr<const ConnectionMatrix> matrix, CostParams params)
      : matrix_(std::move(matrix)), params_(params) {
    if (!matrix_) throw InputError("graph requires a connection matrix");
    for (int t = 1; t <= horizon() + 1; ++t) add_node({t, 0});
  }

  int horizon() const { return matrix_->horizon(); }
  const ConnectionMatrix& matrix() const { return *matrix_; }
  const std::shared_ptr<const ConnectionMatrix>& matrix_ptr() const { return matrix_; }
  const CostParams& params() const { return params_; }

  NodeId source() const { return {1, 0}; }
  NodeId sink() const { return {horizon() + 1, 0}; }

  bool has_node(NodeId n) const { return index_.contains(n); }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t node_index(NodeId n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw InternalError("unknown node " + to_string(n));
    return it->second;
  }

  // Fresh virtual copy of `period`.
  NodeId add_virtual_node(int period) {
    NodeId n{period, ++virtual_count_[period]};
    add_node(n);
    return n;
  }

  // Adds the arc unless an identical live arc exists; returns the live id.
  ArcId add_arc(Arc arc) {
    const std::size_t u = node_index(arc.from);
    const std::size_t v = node_index(arc.to);
    if (arc.from.period >= arc.to.period) {
      throw InternalError("arc " + to_string(arc.from) + "->" + to_string(arc.to) +
                          " does not increase the period");
    }
    for (ArcId existing : out_[u]) {
      const Arc& a = arcs_[existing];
      if (live_[existing] && a.to == arc.to && a.cycle_start == arc.cycle_start &&
          a.cycle_end == arc.cycle_end && a.zero_reviews == arc.zero_reviews) {
        return existing;
      }
    }
    arc.id = arcs_.size();
    arcs_.push_back(std::move(arc));
    live_.push_back(true);
    filtered_.push_back(false);
    out_[u].push_back(arcs_.back().id);
    in_[v].push_back(arcs_.back().id);
    return arcs_.back().id;
  }

  void remove_arc(ArcId id) {
    if (id >= arcs_.size() || !live_[id]) {
      throw InternalError("remove_arc: arc " + std::to_string(id) + " is not live");
    }
    live_[id] = false;
  }

  // Removal by the dominance filter; such arcs can be brought back later.
  void filter_out(ArcId id) {
    remove_arc(id);
    filtered_[id] = true;
  }

  bool is_filtered(ArcId id) const { return id < arcs_.size() && filtered_[id]; }

  // Revives every filtered arc. Returns how many came back.
  std::size_t restore_filtered() {
    std::size_t count = 0;
    for (ArcId id = 0; id < arcs_.size(); ++id) {
      if (!filtered_[id]) continue;
      filtered_[id] = false;
      live_[id] = true;
      ++count;
    }
    return count;
  }

  bool is_live(ArcId id) const { return id < arcs_.size() && live_[id]; }
  const Arc& arc(ArcId id) const { return arcs_.at(id); }

  std::vector<ArcId> out_arcs(NodeId n) const { return live_subset(out_[node_index(n)]); }
  std::vector<ArcId> in_arcs(NodeId n) const { return live_subset(in_[node_index(n)]); }

  std::vector<ArcId> live_arcs() const {
    std::vector<ArcId> ids;
    for (ArcId id = 0; id < arcs_.size(); ++id) {
      if (live_[id]) ids.push_back(id);
    }
    return ids;
  }

  std::size_t arc_count() const {
    return static_cast<std::size_t>(std::count(live_.begin(), live_.end(), true));
  }

  // A non-source node with no live inbound arc. Kept in storage; reported as removed.
  bool is_isolated(NodeId n) const { return n != source() && in_arcs(n).empty(); }

  std::size_t virtual_node_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                  [](NodeId n) { return n.tag > 0; }));
  }

 private:
  void add_node(NodeId n) {
    index_.emplace(n, nodes_.size());
    nodes_.push_back(n);
    out_.emplace_back();
    in_.emplace_back();
  }

  std::vector<ArcId> live_subset(const std::vector<ArcId>& ids) const {
    std::vector<ArcId> out;
    for (ArcId id : ids) {
      if (live_[id]) out.push_back(id);
    }
    return out;
  }

  std::shared_ptr<const ConnectionMatrix> matrix_;
  CostParams params_;
  std::vector<NodeId> nodes_;
  std::map<NodeId, std::size_t> index_;
  std::map<int, int> virtual_count_;
  std::vector<Arc> arcs_;
  std::vector<bool> live_;
  std::vector<bool> filtered_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

inline Arc arc_from_cycle(const CycleOptimum& c, NodeId from, NodeId to, ArcKind kind) {
  Arc a;
  a.from = from;
  a.to = to;
  a.cost = c.expected_cost;
  a.kind = kind;
  a.cycle_start = c.start;
  a.cycle_end = c.end;
  a.order_up_to = c.order_up_to;
  a.closing_inventory = c.expected_closing_inventory;
  return a;
}

/// Complete DAG over nodes 1..T+1 with one arc per matrix entry.
inline ReplenishmentGraph build_graph(std::shared_ptr<const ConnectionMatrix> matrix,
                                      const CostParams& params) {
  ReplenishmentGraph g(std::move(matrix), params);
  const int T = g.horizon();
  for (int i = 1; i <= T; ++i) {
    for (int j = i + 1; j <= T + 1; ++j) {
      g.add_arc(arc_from_cycle(g.matrix().arc(i, j), {i, 0}, {j, 0}, ArcKind::normal));
    }
  }
  return g;
}

inline constexpr double kFilterTolerance = 1e-9;

/// Removes every arc (a, b) that some path a -> ... -> b through at least one
/// intermediate node matches or beats. Expects the unaugmented graph.
/// Returns the number of arcs removed.
inline std::size_t filter_arcs(ReplenishmentGraph& g) {
  const int T = g.horizon();
  const double inf = std::numeric_limits<double>::infinity();
  // Cheapest live original arc between each pair of original nodes.
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(T + 2),
                                        std::vector<double>(static_cast<std::size_t>(T + 2), inf));
  std::vector<std::vector<std::vector<ArcId>>> ids(
      static_cast<std::size_t>(T + 2), std::vector<std::vector<ArcId>>(static_cast<std::size_t>(T + 2)));
  for (ArcId id : g.live_arcs()) {
    const Arc& a = g.arc(id);
    if (a.from.tag != 0 || a.to.tag != 0) {
      throw InternalError("filter_arcs expects a graph without virtual nodes");
    }
    auto& c = cost[static_cast<std::size_t>(a.from.period)][static_cast<std::size_t>(a.to.period)];
    c = std::min(c, a.cost);
    ids[static_cast<std::size_t>(a.from.period)][static_cast<std::size_t>(a.to.period)].push_back(id);
  }
  std::vector<ArcId> doomed;
  std::vector<double> dist(static_cast<std::size_t>(T + 2));
  for (int a = 1; a <= T; ++a) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[static_cast<std::size_t>(a)] = 0.0;
    for (int v = a + 1; v <= T + 1; ++v) {
      for (int u = a; u < v; ++u) {
        dist[static_cast<std::size_t>(v)] =
            std::min(dist[static_cast<std::size_t>(v)],
                     dist[static_cast<std::size_t>(u)] + cost[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]);
      }
    }
    for (int b = a + 2; b <= T + 1; ++b) {
      double via = inf;
      for (int u = a + 1; u < b; ++u) {
        via = std::min(via, dist[static_cast<std::size_t>(u)] +
                                cost[static_cast<std::size_t>(u)][static_cast<std::size_t>(b)]);
      }
      for (ArcId id : ids[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) {
        if (via <= g.arc(id).cost + kFilterTolerance) doomed.push_back(id);
      }
    }
  }
  for (ArcId id : doomed) g.filter_out(id);
  return doomed.size();
}

struct PathSolution {
  std::vector<NodeId> nodes;  // source -> sink
  std::vector<Arc> arcs;
  double total_cost = 0.0;
};

inline std::string render_path(const PathSolution& p) {
  std::string s;
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    if (k > 0) s += (p.arcs[k - 1].kind == ArcKind::recomputed) ? "=>" : "->";
    s += to_string(p.nodes[k]);
  }
  return s;
}

namespace detail {

// Tie-break key for equal-cost predecessors: smaller period, then smaller tag,
// then the older arc.
inline bool prefer_predecessor(const ReplenishmentGraph& g, ArcId candidate, ArcId incumbent) {
  const Arc& c = g.arc(candidate);
  const Arc& i = g.arc(incumbent);
  if (c.from != i.from) return c.from < i.from;
  return candidate < incumbent;
}

inline PathSolution trace_back(const ReplenishmentGraph& g, const std::vector<double>& dist,
                               const std::vector<std::optional<ArcId>>& pred) {
  const std::size_t sink = g.node_index(g.sink());
  if (!std::isfinite(dist[sink])) {
    throw InternalError("sink " + to_string(g.sink()) + " is unreachable from the source");
  }
  PathSolution path;
  std::size_t v = sink;
  const std::size_t src = g.node_index(g.source());
  while (v != src) {
    if (!pred[v]) throw InternalError("broken predecessor chain at " + to_string(g.nodes()[v]));
    const Arc& a = g.arc(*pred[v]);
    path.arcs.push_back(a);
    v = g.node_index(a.from);
  }
  std::reverse(path.arcs.begin(), path.arcs.end());
  path.nodes.push_back(g.source());
  for (const Arc& a : path.arcs) {
    path.nodes.push_back(a.to);
    path.total_cost += a.cost;
  }
  return path;
}

}  // namespace detail

/// Dijkstra from the source to the sink. Arc costs must be nonnegative.
inline PathSolution shortest_path(const ReplenishmentGraph& g) {
  const std::size_t n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<std::optional<ArcId>> pred(n);
  std::vector<bool> settled(n, false);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const std::size_t src = g.node_index(g.source());
  dist[src] = 0.0;
  heap.emplace(0.0, g.source());
  while (!heap.empty()) {
    const auto [d, node] = heap.top();
    heap.pop();
    const std::size_t u = g.node_index(node);
    if (settled[u]) continue;
    settled[u] = true;
    for (ArcId id : g.out_arcs(node)) {
      const Arc& a = g.arc(id);
      if (a.cost < 0.0) {
        throw InternalError("negative arc cost on " + to_string(a.from) + "->" + to_string(a.to));
      }
      const std::size_t v = g.node_index(a.to);
      const double nd = d + a.cost;
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = id;
        heap.emplace(nd, a.to);
      } else if (nd == dist[v] && pred[v] && detail::prefer_predecessor(g, id, *pred[v])) {
        pred[v] = id;
      }
    }
  }
  return detail::trace_back(g, dist, pred);
}

/// Dynamic programme over nodes in period order; same result as shortest_path.
inline PathSolution shortest_path_topological(const ReplenishmentGraph& g) {
  std::vector<NodeId> order = g.nodes();
  std::sort(order.begin(), order.end());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.node_count(), inf);
  std::vector<std::optional<ArcId>> pred(g.node_count());
  dist[g.node_index(g.source())] = 0.0;
  for (NodeId node : order) {
    const double d = dist[g.node_index(node)];
    if (!std::isfinite(d)) continue;
    for (ArcId id : g.out_arcs(node)) {
      const Arc& a = g.arc(id);
      const std::size_t v = g.node_index(a.to);
      const double nd = d + a.cost;
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = id;
      } else if (nd == dist[v] && pred[v] && detail::prefer_predecessor(g, id, *pred[v])) {
        pred[v] = id;
      }
    }
  }
  return detail::trace_back(g, dist, pred);
}

/// One arc per line: from to kind cost order_up_to closing_inventory.
inline std::string dump_graph(const ReplenishmentGraph& g) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "# from to kind cost order_up_to closing_inventory\n";
  for (NodeId n : g.nodes()) {
    if (g.is_isolated(n)) out << "# isolated " << to_string(n) << "\n";
  }
  for (ArcId id : g.live_arcs()) {
    const Arc& a = g.arc(id);
    out << to_string(a.from) << ' ' << to_string(a.to) << ' ' << to_string(a.kind) << ' ' << a.cost
        << ' ' << a.order_up_to << ' ' << a.closing_inventory << '\n';
  }
  return out.str();
}

}  // namespace rsgraph
