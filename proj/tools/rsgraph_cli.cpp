// rsgraph: solve, simulate, bench, gen, export-graph.
//
// Exit codes: 0 ok, 2 bad input, 3 augmentation cap hit, 4 I/O failure.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rsgraph/rsgraph.hpp"

namespace fs = std::filesystem;
using namespace rsgraph;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNonTermination = 3;
constexpr int kIoError = 4;

struct SolveFlags {
  bool no_filter = false;
  std::string mode = "bisection";
  double grid_step = 1.0;
  std::size_t max_augment = 0;
  unsigned threads = 1;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_flag("--no-filter", f.no_filter, "Skip arc filtering before augmentation");
  cmd->add_option("--mode", f.mode, "Order-up-to search: bisection or grid")
      ->check(CLI::IsMember({"bisection", "grid"}))
      ->capture_default_str();
  cmd->add_option("--grid-step", f.grid_step, "Step of the grid search")->capture_default_str();
  cmd->add_option("--max-augment", f.max_augment, "Augmentation cap (0 = 10 x horizon)")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Threads for the connection matrix (0 = all cores)")
      ->capture_default_str();
}

SolveOptions to_options(const SolveFlags& f) {
  SolveOptions o;
  o.filter = !f.no_filter;
  o.optimizer.mode = f.mode == "grid" ? SearchMode::grid : SearchMode::bisection;
  o.optimizer.grid_step = f.grid_step;
  o.augment.max_augmentations = f.max_augment;
  o.threads = f.threads;
  return o;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Runs solve and turns the iteration cap into a trace file.
SolveReport solve_or_dump_trace(const Instance& inst, const SolveOptions& opts,
                                const std::string& trace_path) {
  try {
    return solve(inst, opts);
  } catch (const NonTerminationError& e) {
    write_text_file(trace_path, e.trace());
    throw;
  }
}

void print_summary(const Instance& inst, const SolveReport& rep) {
  std::cout << "instance        " << (inst.id.empty() ? "-" : inst.id) << " (T=" << inst.horizon()
            << ")\n"
            << "relaxed path    " << render_path(rep.relaxed) << "\n"
            << "relaxed cost    " << fixed(rep.relaxed_cost) << "\n"
            << "violations      " << rep.negative_orders() << "\n"
            << "filtered arcs   " << rep.filtered_arcs << "\n"
            << "nodes added     " << rep.trace.introduced_nodes.size() << "\n"
            << "final path      " << render_path(rep.final_path) << "\n"
            << "final cost      " << fixed(rep.augmented_cost) << "\n"
            << "increase        " << fixed(rep.pct_increase(), 3) << " %\n"
            << "t_prep          " << fixed(rep.times.prep_s, 6) << " s\n"
            << "t_shortest_path " << fixed(rep.times.shortest_path_s, 6) << " s\n"
            << "t_augment       " << fixed(rep.times.augment_s, 6) << " s\n";
  const auto reviews = rep.policy.review_periods();
  std::cout << "reviews        ";
  for (int t : reviews) std::cout << ' ' << t << (rep.policy.at(t).zero_quantity ? "(0)" : "");
  std::cout << "\n";
}

std::vector<Instance> load_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::ios_base::failure("'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (const auto& f : files) {
    out.push_back(load_instance(f));
    if (out.back().id.empty()) out.back().id = fs::path(f).stem().string();
  }
  return out;
}

GridSpec grid_from(const std::string& set, std::uint64_t seed, int reps, const std::vector<int>& horizons) {
  GridSpec g;
  if (set == "A") {
    g = set_a_grid(seed, reps);
  } else if (set == "extended") {
    g = extended_grid(seed, reps);
  } else {
    throw InputError("unknown grid '" + set + "' (expected A or extended)");
  }
  if (!horizons.empty()) g.horizons = horizons;
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic lot sizing by shortest paths with repetitive augmentation"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and write its policy");
  std::string instance_path;
  std::string policy_out;
  std::string relaxed_out;
  std::string trace_out;
  SolveFlags solve_flags;
  solve_cmd->add_option("instance", instance_path, "Instance JSON file")->required();
  solve_cmd->add_option("-o,--out", policy_out, "Write the final policy here");
  solve_cmd->add_option("--relaxed-out", relaxed_out, "Write the relaxed policy here");
  solve_cmd->add_option("--trace-out", trace_out,
                        "Augmentation trace file (default: <instance>.trace.txt)");
  add_solve_flags(solve_cmd, solve_flags);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy");
  std::string sim_instance;
  std::string sim_policy;
  std::string sim_trace_csv;
  SimulationOptions sim_opts;
  std::string rule = "planned";
  sim_cmd->add_option("instance", sim_instance, "Instance JSON file")->required();
  sim_cmd->add_option("policy", sim_policy, "Policy JSON file")->required();
  sim_cmd->add_option("-n,--replications", sim_opts.replications)->capture_default_str();
  sim_cmd->add_option("--seed", sim_opts.seed)->capture_default_str();
  sim_cmd->add_option("--rule", rule, "planned: reviews set inventory to S; clipped: order max(0, S - I)")
      ->capture_default_str();
  sim_cmd->add_option("--threads", sim_opts.threads, "0 = all cores")->capture_default_str();
  sim_cmd->add_option("--trace-csv", sim_trace_csv, "Expected inventory trace CSV");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark a generated grid or a directory of instances");
  std::string bench_set = "A";
  int bench_reps = 3;
  std::uint64_t bench_seed = 7;
  std::vector<int> bench_horizons;
  std::string bench_dir;
  std::string bench_out = "bench_out";
  unsigned bench_threads = 0;
  SolveFlags bench_flags;
  bench_cmd->add_option("--set", bench_set, "A or extended")->capture_default_str();
  bench_cmd->add_option("--reps", bench_reps, "Replicates per cell")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed)->capture_default_str();
  bench_cmd->add_option("--horizons", bench_horizons, "Override the grid horizons");
  bench_cmd->add_option("--instances", bench_dir, "Benchmark every *.json in this directory instead");
  bench_cmd->add_option("--out", bench_out, "Directory for bench.csv and summary.csv")->capture_default_str();
  bench_cmd->add_option("--workers", bench_threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_solve_flags(bench_cmd, bench_flags);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated grid as instance files");
  std::string gen_set = "A";
  int gen_reps = 10;
  std::uint64_t gen_seed = 7;
  std::vector<int> gen_horizons;
  std::string gen_out = "instances";
  gen_cmd->add_option("--set", gen_set, "A or extended")->capture_default_str();
  gen_cmd->add_option("--reps", gen_reps)->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_cmd->add_option("--horizons", gen_horizons);
  gen_cmd->add_option("--out", gen_out)->capture_default_str();

  // export-graph
  auto* export_cmd = app.add_subcommand("export-graph", "Dump the graph before and after filtering and augmentation");
  std::string export_instance;
  std::string export_out = "graphs";
  SolveFlags export_flags;
  export_cmd->add_option("instance", export_instance)->required();
  export_cmd->add_option("--out", export_out, "Output directory")->capture_default_str();
  add_solve_flags(export_cmd, export_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) {
      const Instance inst = load_instance(instance_path);
      const std::string trace_path = trace_out.empty() ? instance_path + ".trace.txt" : trace_out;
      const SolveReport rep = solve_or_dump_trace(inst, to_options(solve_flags), trace_path);
      print_summary(inst, rep);
      if (!policy_out.empty()) save_policy(rep.policy, policy_out);
      if (!relaxed_out.empty()) save_policy(rep.relaxed_policy, relaxed_out);
      if (!trace_out.empty()) write_text_file(trace_out, rep.trace.render());
    } else if (*sim_cmd) {
      const Instance inst = load_instance(sim_instance);
      const PolicyParams pol = load_policy(sim_policy);
      sim_opts.rule = parse_order_rule(rule);
      const auto negative = expected_negative_orders(inst, pol);
      if (!negative.empty()) {
        std::cerr << "warning: policy has " << negative.size()
                  << " expected negative order(s) at period(s)";
        for (int t : negative) std::cerr << ' ' << t;
        std::cerr << (sim_opts.rule == OrderRule::clipped ? "; realised negative orders are clipped to zero\n"
                                                          : "; reviews lower inventory to S there\n");
      }
      const auto r = simulate_policy(inst, pol, sim_opts);
      std::cout << "replications    " << r.replications << " (rule " << to_string(r.rule)
                << ", seed " << sim_opts.seed << ")\n"
                << "mean cost       " << fixed(r.mean_cost) << " +/- " << fixed(r.std_error) << "\n"
                << "95% CI          [" << fixed(r.ci95_low) << ", " << fixed(r.ci95_high) << "]\n"
                << "ordering        " << fixed(r.mean_ordering) << "\n"
                << "holding         " << fixed(r.mean_holding) << "\n"
                << "penalty         " << fixed(r.mean_penalty) << "\n"
                << "analytic        " << fixed(analytic_policy_cost(inst, pol)) << " (planned rule)\n"
                << "negative orders " << r.negative_order_events << " of " << r.review_events
                << " reviews\n";
      if (!sim_trace_csv.empty()) write_text_file(sim_trace_csv, trace_csv(expected_trace(inst, pol)));
    } else if (*bench_cmd) {
      const std::vector<Instance> instances =
          bench_dir.empty() ? materialize(grid_from(bench_set, bench_seed, bench_reps, bench_horizons))
                            : load_directory(bench_dir);
      if (instances.empty()) throw InputError("no instances to benchmark");
      BenchOptions opts;
      opts.solve = to_options(bench_flags);
      opts.threads = bench_threads;
      const auto records = run_benchmark(instances, opts);
      write_benchmark(records, bench_out);
      std::cout << pivot_text(pivot(records));
      std::cout << "wrote " << records.size() << " records to " << bench_out << "\n";
    } else if (*gen_cmd) {
      const auto instances = materialize(grid_from(gen_set, gen_seed, gen_reps, gen_horizons));
      std::error_code ec;
      fs::create_directories(gen_out, ec);
      if (ec) throw std::ios_base::failure("cannot create directory '" + gen_out + "': " + ec.message());
      for (const auto& inst : instances) save_instance(inst, (fs::path(gen_out) / (inst.id + ".json")).string());
      std::cout << "wrote " << instances.size() << " instances to " << gen_out << "\n";
    } else if (*export_cmd) {
      const Instance inst = load_instance(export_instance);
      SolveOptions opts = to_options(export_flags);
      opts.keep_graph_dumps = true;
      std::error_code ec;
      fs::create_directories(export_out, ec);
      if (ec) throw std::ios_base::failure("cannot create directory '" + export_out + "': " + ec.message());
      const SolveReport rep =
          solve_or_dump_trace(inst, opts, (fs::path(export_out) / "trace.txt").string());
      write_text_file((fs::path(export_out) / "unfiltered.txt").string(), rep.unfiltered_dump);
      write_text_file((fs::path(export_out) / "filtered.txt").string(), rep.filtered_dump);
      write_text_file((fs::path(export_out) / "augmented.txt").string(), rep.augmented_dump);
      std::cout << "final path " << render_path(rep.final_path) << "\n"
                << "wrote unfiltered.txt, filtered.txt, augmented.txt to " << export_out << "\n";
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NonTerminationError& e) {
    std::cerr << "augmentation did not terminate: " << e.what() << "\n";
    if (*solve_cmd) {
      std::cerr << "trace written to " << (trace_out.empty() ? instance_path + ".trace.txt" : trace_out) << "\n";
    }
    return kNonTermination;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
