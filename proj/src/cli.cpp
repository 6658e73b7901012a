#include "synwalk/cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "synwalk/bench.hpp"
#include "synwalk/error.hpp"
#include "synwalk/graph.hpp"
#include "synwalk/metrics.hpp"
#include "synwalk/objective.hpp"
#include "synwalk/optimizer.hpp"

namespace synwalk::cli {

namespace {

// Raised for bad flag values discovered after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

Graph read_graph(const std::string& path, bool directed) {
  auto in = open_in(path);
  return load_edge_list(in, directed);
}

Partition read_partition_file(const std::string& path, const Graph& g) {
  auto in = open_in(path);
  return read_partition(in, g.labels());
}

Criterion objective_flag(const std::string& name) {
  try {
    return parse_criterion(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " (expected synwalk, modularity or relaxed_mi)");
  }
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("invalid community size '" + item + "'");
    }
  }
  return sizes;
}

struct DetectArgs {
  std::string graph;
  std::string objective = "synwalk";
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  std::string out;
  std::string report;
  bool directed = false;
};

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  const Criterion objective = objective_flag(a.objective);
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  const Graph g = read_graph(a.graph, a.directed);

  OptimizerConfig cfg;
  cfg.objective = objective;
  OptimizerResult best;
  for (std::size_t r = 0; r < a.restarts; ++r) {
    cfg.seed = a.seed + r;
    OptimizerResult result = optimize(g, cfg);
    if (r == 0 || result.objective_value > best.objective_value) best = std::move(result);
  }

  if (!a.out.empty()) {
    auto file = open_out(a.out);
    write_partition(best.partition, g.labels(), file);
  }
  const std::string json = best.report.to_json();
  if (!a.report.empty()) {
    auto file = open_out(a.report);
    file << json << '\n';
  }
  out << json << '\n';
  err << std::setprecision(10) << "K=" << best.partition.cluster_count()
      << " J=" << best.report.value << " bound=" << best.report.bound_node_mi << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string graph;
  std::string truth;
  std::string pred;
  std::string nodes_csv;
  bool directed = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Graph g = read_graph(a.graph, a.directed);
  const Partition truth = read_partition_file(a.truth, g);
  const Partition pred = read_partition_file(a.pred, g);
  const ClusterMapping mapping = greedy_match(truth, pred);
  const Classification cls = classify_nodes(truth, pred, mapping);
  nlohmann::json j;
  j["ami"] = ami(truth, pred);
  j["matches"] = mapping.size();
  j["misclassified"] = cls.misclassified.size();
  j["k_true"] = truth.cluster_count();
  j["k_pred"] = pred.cluster_count();
  if (!a.nodes_csv.empty()) {
    auto file = open_out(a.nodes_csv);
    classification_export(g, truth, pred, file);
  }
  out << j.dump() << '\n';
  return kExitOk;
}

struct StatsArgs {
  std::string graph;
  std::string partition;
  std::size_t min_size = 3;
  std::string csv;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  if (a.min_size < 1) throw UsageError("--min-size must be >= 1");
  const Graph g = read_graph(a.graph, false);
  const Partition y = read_partition_file(a.partition, g);
  const auto rows = cluster_stats(g, y, a.min_size);
  if (!a.csv.empty()) {
    auto file = open_out(a.csv);
    write_cluster_stats_csv(rows, file);
  }
  nlohmann::json j;
  j["clusters"] = y.cluster_count();
  j["nontrivial_clusters"] = rows.size();
  j["nontrivial_fraction"] =
      static_cast<double>(rows.size()) / static_cast<double>(y.cluster_count());
  j["modularity"] = modularity(g, y);
  out << j.dump() << '\n';
  return kExitOk;
}

struct GenArgs {
  std::string config;
  std::optional<std::size_t> n;
  std::optional<double> k_avg;
  std::optional<double> mu;
  std::optional<std::string> sizes;
  std::optional<std::size_t> communities;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string truth;
  std::string labels;
};

// key=value lines; '#' comments.
std::map<std::string, std::string> read_key_values(const std::string& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int cmd_gen(GenArgs a, std::ostream& out) {
  if (!a.config.empty()) {
    for (const auto& [key, value] : read_key_values(a.config)) {
      try {
        if (key == "n" && !a.n) a.n = std::stoull(value);
        else if (key == "k_avg" && !a.k_avg) a.k_avg = std::stod(value);
        else if (key == "mu" && !a.mu) a.mu = std::stod(value);
        else if (key == "sizes" && !a.sizes) a.sizes = value;
        else if (key == "communities" && !a.communities) a.communities = std::stoull(value);
        else if (key == "seed" && !a.seed) a.seed = std::stoull(value);
        else if (key != "n" && key != "k_avg" && key != "mu" && key != "sizes" &&
                 key != "communities" && key != "seed") {
          throw DataError("unknown generator key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        throw DataError("invalid value for generator key '" + key + "'");
      }
    }
  }
  if (!a.n || !a.k_avg || !a.mu) throw UsageError("gen needs n, k_avg and mu");
  PlantedPartitionParams params;
  params.n = *a.n;
  params.k_avg = *a.k_avg;
  params.mu = *a.mu;
  params.seed = a.seed.value_or(0);
  if (a.sizes) {
    params.community_sizes = parse_sizes(*a.sizes);
  } else if (a.communities) {
    if (*a.communities == 0 || params.n % *a.communities != 0) {
      throw UsageError("--communities must divide n");
    }
    params.community_sizes.assign(*a.communities, params.n / *a.communities);
  } else {
    throw UsageError("gen needs --sizes or --communities");
  }
  const PlantedGraph planted = planted_partition(params);
  if (!a.out.empty()) {
    auto file = open_out(a.out);
    write_edge_list(planted.graph, file);
  }
  if (!a.truth.empty()) {
    auto file = open_out(a.truth);
    write_partition(planted.truth, planted.graph.labels(), file);
  }
  if (!a.labels.empty()) {
    auto file = open_out(a.labels);
    planted.graph.labels().write(file);
  }
  double degree_sum = 0.0;
  double mixing_sum = 0.0;
  std::size_t with_links = 0;
  for (NodeId v = 0; v < planted.graph.size(); ++v) {
    degree_sum += planted.graph.degree(v);
    if (planted.graph.degree(v) > 0.0) {
      mixing_sum += mixing_parameter(planted.graph, planted.truth, v);
      ++with_links;
    }
  }
  nlohmann::json j;
  j["n"] = planted.graph.size();
  j["edges"] = planted.graph.edges().size();
  j["k_avg"] = degree_sum / static_cast<double>(planted.graph.size());
  j["mu"] = with_links > 0 ? mixing_sum / static_cast<double>(with_links) : 0.0;
  out << j.dump() << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string out;
  std::string aggregate;
  std::optional<std::size_t> threads;
  bool timing = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepSpec spec;
  {
    auto in = open_in(a.config);
    spec = read_sweep_spec(in);
  }
  if (!a.out.empty()) spec.output = a.out;
  if (!a.aggregate.empty()) spec.aggregate_output = a.aggregate;
  if (a.threads) spec.threads = *a.threads;
  if (a.timing) spec.timing = true;
  if (spec.output.empty()) throw UsageError("sweep needs an output path (--out or config)");

  const auto rows = run_sweep(spec);
  {
    auto file = open_out(spec.output);
    write_sweep_csv(rows, spec.timing, file);
  }
  const auto aggregate = aggregate_sweep(rows);
  if (!spec.aggregate_output.empty()) {
    auto file = open_out(spec.aggregate_output);
    write_aggregate_csv(aggregate, file);
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.ok() ? 0 : 1;
  nlohmann::json j;
  j["rows"] = rows.size();
  j["failed"] = failed;
  j["grid_points"] = aggregate.size();
  out << j.dump() << '\n';
  return kExitOk;
}

struct OracleArgs {
  std::string graph;
  std::string objective = "synwalk";
  std::size_t cap = 12;
  std::string out;
  bool directed = false;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const Criterion objective = objective_flag(a.objective);
  const Graph g = read_graph(a.graph, a.directed);
  if (g.size() > a.cap) {
    throw UsageError("oracle is capped at " + std::to_string(a.cap) + " nodes; graph has " +
                     std::to_string(g.size()));
  }
  const BruteForceResult best = brute_force_optimum(g, objective, a.cap);
  if (!a.out.empty()) {
    auto file = open_out(a.out);
    write_partition(best.partition, g.labels(), file);
  }
  nlohmann::json j;
  j["value"] = best.value;
  j["clusters"] = best.partition.cluster_count();
  j["evaluated"] = best.evaluated;
  nlohmann::json assignment = nlohmann::json::object();
  for (NodeId v = 0; v < g.size(); ++v) {
    assignment[std::to_string(g.labels().label(v))] = best.partition.cluster_of(v);
  }
  j["partition"] = assignment;
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community detection by synthesizing random walks"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* sc_detect = app.add_subcommand("detect", "Find a partition maximizing an objective");
  sc_detect->add_option("--graph", detect.graph, "Edge list")->required();
  sc_detect->add_option("--objective", detect.objective, "synwalk | modularity | relaxed_mi");
  sc_detect->add_option("--seed", detect.seed, "Random seed");
  sc_detect->add_option("--restarts", detect.restarts, "Runs with seeds seed..seed+restarts-1");
  sc_detect->add_option("--out", detect.out, "Partition output path");
  sc_detect->add_option("--report", detect.report, "Objective report JSON path");
  sc_detect->add_flag("--directed", detect.directed, "Treat edges as directed");

  EvalArgs eval;
  auto* sc_eval = app.add_subcommand("eval", "Compare a predicted partition with a reference");
  sc_eval->add_option("--graph", eval.graph, "Edge list")->required();
  sc_eval->add_option("--truth", eval.truth, "Reference partition")->required();
  sc_eval->add_option("--pred", eval.pred, "Predicted partition")->required();
  sc_eval->add_option("--nodes-csv", eval.nodes_csv, "Per-node classification CSV path");
  sc_eval->add_flag("--directed", eval.directed, "Treat edges as directed");

  StatsArgs stats;
  auto* sc_stats = app.add_subcommand("stats", "Per-cluster statistics and modularity");
  sc_stats->add_option("--graph", stats.graph, "Edge list")->required();
  sc_stats->add_option("--partition", stats.partition, "Partition")->required();
  sc_stats->add_option("--min-size", stats.min_size, "Smallest non-trivial cluster size");
  sc_stats->add_option("--csv", stats.csv, "Cluster statistics CSV path");

  GenArgs gen;
  auto* sc_gen = app.add_subcommand("gen", "Generate a planted-partition benchmark graph");
  sc_gen->add_option("--config", gen.config, "key=value parameter file");
  sc_gen->add_option("--n", gen.n, "Node count");
  sc_gen->add_option("--k-avg", gen.k_avg, "Mean degree");
  sc_gen->add_option("--mu", gen.mu, "Mixing parameter");
  sc_gen->add_option("--sizes", gen.sizes, "Comma-separated community sizes");
  sc_gen->add_option("--communities", gen.communities, "Equal-size community count");
  sc_gen->add_option("--seed", gen.seed, "Random seed");
  sc_gen->add_option("--out", gen.out, "Edge list output path");
  sc_gen->add_option("--truth", gen.truth, "Planted partition output path");
  sc_gen->add_option("--labels", gen.labels, "Label map output path");

  SweepArgs sweep;
  auto* sc_sweep = app.add_subcommand("sweep", "Run an AMI sweep over planted partitions");
  sc_sweep->add_option("--config", sweep.config, "JSON sweep configuration")->required();
  sc_sweep->add_option("--out", sweep.out, "Results CSV path");
  sc_sweep->add_option("--aggregate", sweep.aggregate, "Aggregate CSV path");
  sc_sweep->add_option("--threads", sweep.threads, "Worker threads (0: all cores)");
  sc_sweep->add_flag("--timing", sweep.timing, "Record wall-clock ms per run");

  OracleArgs oracle;
  auto* sc_oracle = app.add_subcommand("oracle", "Exhaustive optimum for small graphs");
  sc_oracle->add_option("--graph", oracle.graph, "Edge list")->required();
  sc_oracle->add_option("--objective", oracle.objective, "synwalk | modularity | relaxed_mi");
  sc_oracle->add_option("--cap", oracle.cap, "Largest admissible node count");
  sc_oracle->add_option("--out", oracle.out, "Partition output path");
  sc_oracle->add_flag("--directed", oracle.directed, "Treat edges as directed");

  std::vector<const char*> argv{"synwalk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*sc_detect) return cmd_detect(detect, out, err);
    if (*sc_eval) return cmd_eval(eval, out);
    if (*sc_stats) return cmd_stats(stats, out);
    if (*sc_gen) return cmd_gen(gen, out);
    if (*sc_sweep) return cmd_sweep(sweep, out);
    if (*sc_oracle) return cmd_oracle(oracle, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace synwalk::cli
