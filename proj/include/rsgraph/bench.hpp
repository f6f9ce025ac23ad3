#pragma once

// Test-bed generation and the benchmark harness.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rsgraph/errors.hpp"
#include "rsgraph/instance.hpp"
#include "rsgraph/solver.hpp"

namespace rsgraph {

/// Per-period mean demands. Erratic: U[0, 100]. Lumpy: U[0, 420] with
/// probability 0.2, otherwise U[0, 20].
template <class Rng>
std::vector<double> generate_means(DemandPattern pattern, int horizon, Rng& rng) {
  if (horizon < 1) throw InputError("horizon must be at least 1");
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(horizon));
  std::uniform_real_distribution<double> erratic(0.0, 100.0);
  std::uniform_real_distribution<double> peak(0.0, 420.0);
  std::uniform_real_distribution<double> low(0.0, 20.0);
  std::bernoulli_distribution is_peak(0.2);
  for (int t = 0; t < horizon; ++t) {
    switch (pattern) {
      case DemandPattern::erratic: means.push_back(erratic(rng)); break;
      case DemandPattern::lumpy: means.push_back(is_peak(rng) ? peak(rng) : low(rng)); break;
      case DemandPattern::explicit_means:
        throw InputError("cannot generate means for the explicit pattern");
    }
  }
  return means;
}

inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

inline std::vector<Instance> generate_instances(DemandPattern pattern, int horizon, double cv,
                                                const CostParams& costs, int count,
                                                std::uint64_t seed) {
  if (count < 1) throw InputError("instance count must be at least 1");
  std::vector<Instance> out;
  for (int r = 0; r < count; ++r) {
    Instance inst;
    inst.pattern = pattern;
    inst.cv = cv;
    inst.costs = costs;
    inst.seed = derive_seed({seed, static_cast<std::uint64_t>(r)});
    std::mt19937_64 rng(inst.seed);
    inst.means = generate_means(pattern, horizon, rng);
    std::ostringstream id;
    id << to_string(pattern) << "-T" << horizon << "-r" << r;
    inst.id = id.str();
    validate(inst);
    out.push_back(std::move(inst));
  }
  return out;
}

// Full factorial grid. Demand means depend only on (pattern, T, replicate) and
// are shared across all cost and cv cells.
struct GridSpec {
  std::string name = "A";
  std::vector<DemandPattern> patterns{DemandPattern::erratic, DemandPattern::lumpy};
  std::vector<int> horizons{20, 30, 40};
  std::vector<double> cvs{0.1, 0.2, 0.3};
  std::vector<double> penalties{2.0, 5.0, 10.0};
  std::vector<double> fixed_costs{225.0, 900.0, 2500.0};
  double holding = 1.0;
  double unit = 0.0;
  int replicates = 10;
  std::uint64_t seed = 7;

  std::size_t size() const {
    return patterns.size() * horizons.size() * cvs.size() * penalties.size() * fixed_costs.size() *
           static_cast<std::size_t>(std::max(replicates, 0));
  }
};

inline GridSpec set_a_grid(std::uint64_t seed = 7, int replicates = 10) {
  GridSpec g;
  g.seed = seed;
  g.replicates = replicates;
  return g;
}

inline GridSpec extended_grid(std::uint64_t seed = 7, int replicates = 10) {
  GridSpec g = set_a_grid(seed, replicates);
  g.name = "extended";
  g.horizons = {50, 75, 100};
  return g;
}

inline std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

inline std::vector<Instance> materialize(const GridSpec& grid) {
  if (grid.size() == 0) throw InputError("benchmark grid is empty");
  std::vector<Instance> out;
  out.reserve(grid.size());
  for (std::size_t p = 0; p < grid.patterns.size(); ++p) {
    for (int T : grid.horizons) {
      for (int r = 0; r < grid.replicates; ++r) {
        const std::uint64_t seed =
            derive_seed({grid.seed, static_cast<std::uint64_t>(grid.patterns[p]),
                         static_cast<std::uint64_t>(T), static_cast<std::uint64_t>(r)});
        std::mt19937_64 rng(seed);
        const std::vector<double> means = generate_means(grid.patterns[p], T, rng);
        for (double cv : grid.cvs) {
          for (double b : grid.penalties) {
            for (double K : grid.fixed_costs) {
              Instance inst;
              inst.pattern = grid.patterns[p];
              inst.means = means;
              inst.cv = cv;
              inst.costs = {K, grid.unit, grid.holding, b};
              inst.seed = seed;
              std::ostringstream id;
              id << grid.name << '-' << to_string(inst.pattern) << "-T" << T << "-rho"
                 << format_number(cv) << "-b" << format_number(b) << "-K" << format_number(K)
                 << "-r" << std::setw(2) << std::setfill('0') << r;
              inst.id = id.str();
              validate(inst);
              out.push_back(std::move(inst));
            }
          }
        }
      }
    }
  }
  return out;
}

struct BenchRecord {
  std::string id;
  DemandPattern pattern = DemandPattern::explicit_means;
  int horizon = 0;
  double cv = 0.0;
  double penalty = 0.0;
  double fixed = 0.0;
  std::size_t negative_order_count = 0;
  std::size_t introduced_nodes = 0;
  double relaxed_cost = 0.0;
  double augmented_cost = 0.0;
  double pct_increase = 0.0;
  double t_prep = 0.0;
  double t_shortest_path = 0.0;
  double t_augment = 0.0;
  std::size_t iterations = 0;
  bool final_feasible = true;
};

struct BenchOptions {
  SolveOptions solve;
  unsigned threads = 0;  // worker pool size, 0 = hardware concurrency
  std::function<void(std::size_t done, std::size_t total)> progress;
};

inline BenchRecord bench_one(const Instance& inst, const SolveOptions& opts) {
  const SolveReport rep = solve(inst, opts);
  BenchRecord r;
  r.id = inst.id;
  r.pattern = inst.pattern;
  r.horizon = inst.horizon();
  r.cv = inst.cv;
  r.penalty = inst.costs.penalty;
  r.fixed = inst.costs.fixed;
  r.negative_order_count = rep.negative_orders();
  r.introduced_nodes = rep.trace.introduced_nodes.size();
  r.relaxed_cost = rep.relaxed_cost;
  r.augmented_cost = rep.augmented_cost;
  r.pct_increase = rep.pct_increase();
  r.t_prep = rep.times.prep_s;
  r.t_shortest_path = rep.times.shortest_path_s;
  r.t_augment = rep.times.augment_s;
  r.iterations = rep.trace.iterations;
  r.final_feasible = check_feasibility(rep.final_path).empty();
  return r;
}

/// Solves every instance on a worker pool; records come back in input order.
inline std::vector<BenchRecord> run_benchmark(const std::vector<Instance>& instances,
                                              const BenchOptions& opts = {}) {
  if (instances.empty()) throw InputError("benchmark has no instances");
  std::vector<BenchRecord> records(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, instances.size()));
  SolveOptions solve_opts = opts.solve;
  solve_opts.threads = 1;
  auto worker = [&] {
    for (std::size_t k = next++; k < instances.size(); k = next++) {
      try {
        records[k] = bench_one(instances[k], solve_opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
      const std::size_t d = ++done;
      if (opts.progress && threads == 1) opts.progress(d, instances.size());
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "id,pattern,T,rho,b,K,negative_order_count,introduced_nodes,relaxed_cost,augmented_cost,"
         "pct_increase,t_prep,t_shortest_path,t_augment,iterations\n";
  for (const auto& r : records) {
    out << r.id << ',' << to_string(r.pattern) << ',' << r.horizon << ',' << r.cv << ','
        << r.penalty << ',' << r.fixed << ',' << r.negative_order_count << ','
        << r.introduced_nodes << ',' << r.relaxed_cost << ',' << r.augmented_cost << ','
        << r.pct_increase << ',' << r.t_prep << ',' << r.t_shortest_path << ',' << r.t_augment
        << ',' << r.iterations << '\n';
  }
  return out.str();
}

struct PivotRow {
  std::string setting;
  std::string value;
  std::size_t instances = 0;
  std::size_t with_negative_orders = 0;
  std::size_t negative_orders = 0;
  std::size_t introduced_nodes = 0;
  double avg_pct_increase = 0.0;  // over instances with negative orders
  double avg_t_prep = 0.0;
  double avg_t_shortest_path = 0.0;
  double avg_t_augment = 0.0;  // over instances with negative orders
};

/// One row per level of pattern, T, rho, b and K, plus a total row.
inline std::vector<PivotRow> pivot(const std::vector<BenchRecord>& records) {
  using Key = std::function<std::string(const BenchRecord&)>;
  const std::vector<std::pair<std::string, Key>> settings{
      {"pattern", [](const BenchRecord& r) { return to_string(r.pattern); }},
      {"T", [](const BenchRecord& r) { return std::to_string(r.horizon); }},
      {"rho", [](const BenchRecord& r) { return format_number(r.cv); }},
      {"b", [](const BenchRecord& r) { return format_number(r.penalty); }},
      {"K", [](const BenchRecord& r) { return format_number(r.fixed); }},
      {"total", [](const BenchRecord&) { return std::string("all"); }},
  };
  std::vector<PivotRow> rows;
  for (const auto& [name, key] : settings) {
    std::vector<std::string> order;
    std::map<std::string, PivotRow> acc;
    for (const auto& r : records) {
      const std::string v = key(r);
      auto [it, inserted] = acc.try_emplace(v);
      if (inserted) {
        order.push_back(v);
        it->second.setting = name;
        it->second.value = v;
      }
      PivotRow& p = it->second;
      ++p.instances;
      p.avg_t_prep += r.t_prep;
      p.avg_t_shortest_path += r.t_shortest_path;
      if (r.negative_order_count > 0) {
        ++p.with_negative_orders;
        p.negative_orders += r.negative_order_count;
        p.introduced_nodes += r.introduced_nodes;
        p.avg_pct_increase += r.pct_increase;
        p.avg_t_augment += r.t_augment;
      }
    }
    for (const auto& v : order) {
      PivotRow p = acc.at(v);
      p.avg_t_prep /= static_cast<double>(p.instances);
      p.avg_t_shortest_path /= static_cast<double>(p.instances);
      if (p.with_negative_orders > 0) {
        p.avg_pct_increase /= static_cast<double>(p.with_negative_orders);
        p.avg_t_augment /= static_cast<double>(p.with_negative_orders);
      }
      rows.push_back(p);
    }
  }
  return rows;
}

inline std::string pivot_csv(const std::vector<PivotRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(8);
  out << "setting,value,instances,instances_with_negative_orders,negative_orders,introduced_nodes,"
         "avg_pct_increase,avg_t_prep,avg_t_shortest_path,avg_t_augment\n";
  for (const auto& p : rows) {
    out << p.setting << ',' << p.value << ',' << p.instances << ',' << p.with_negative_orders << ','
        << p.negative_orders << ',' << p.introduced_nodes << ',' << p.avg_pct_increase << ','
        << p.avg_t_prep << ',' << p.avg_t_shortest_path << ',' << p.avg_t_augment << '\n';
  }
  return out.str();
}

inline std::string pivot_text(const std::vector<PivotRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "setting" << std::right << std::setw(8) << "n"
      << std::setw(10) << "neg.inst" << std::setw(10) << "neg.ord" << std::setw(10) << "nodes"
      << std::setw(10) << "cost +%" << std::setw(12) << "t_prep" << std::setw(12) << "t_sp"
      << std::setw(12) << "t_aug" << '\n';
  out << std::fixed;
  for (const auto& p : rows) {
    out << std::left << std::setw(16) << (p.setting + "=" + p.value) << std::right << std::setw(8)
        << p.instances << std::setw(10) << p.with_negative_orders << std::setw(10)
        << p.negative_orders << std::setw(10) << p.introduced_nodes << std::setprecision(2)
        << std::setw(10) << p.avg_pct_increase << std::setprecision(5) << std::setw(12)
        << p.avg_t_prep << std::setw(12) << p.avg_t_shortest_path << std::setw(12)
        << p.avg_t_augment << '\n';
  }
  return out.str();
}

/// Writes bench.csv and summary.csv into `dir`.
inline void write_benchmark(const std::vector<BenchRecord>& records, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create directory '" + dir + "': " + ec.message());
  write_text_file((std::filesystem::path(dir) / "bench.csv").string(), bench_csv(records));
  write_text_file((std::filesystem::path(dir) / "summary.csv").string(), pivot_csv(pivot(records)));
}

}  // namespace rsgraph
