#include "synwalk/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "synwalk/error.hpp"
#include "synwalk/metrics.hpp"
#include "synwalk/optimizer.hpp"
#include "synwalk/random.hpp"

namespace synwalk {

namespace {

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(sizes[i]);
  }
  return s;
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

}  // namespace

void SweepSpec::validate() const {
  if (graphs.empty()) throw DataError("sweep needs at least one graph configuration");
  if (mu.empty()) throw DataError("sweep needs at least one mu value");
  if (realizations < 1) throw DataError("realizations must be >= 1");
  if (objectives.empty()) throw DataError("sweep needs at least one objective");
  for (double m : mu) {
    if (!(m >= 0.0 && m < 1.0)) throw DataError("mu values must lie in [0, 1)");
  }
}

SweepSpec read_sweep_spec(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("sweep config: ") + e.what());
  }
  SweepSpec spec;
  try {
    for (const auto& g : j.at("graphs")) {
      SweepGraph sg;
      sg.n = g.at("n").get<std::size_t>();
      sg.k_avg = g.at("k_avg").get<double>();
      if (g.contains("community_sizes")) {
        sg.community_sizes = g.at("community_sizes").get<std::vector<std::size_t>>();
      } else {
        const auto k = g.at("communities").get<std::size_t>();
        if (k == 0 || sg.n % k != 0) {
          throw DataError("sweep config: 'communities' must divide n");
        }
        sg.community_sizes.assign(k, sg.n / k);
      }
      spec.graphs.push_back(std::move(sg));
    }
    spec.mu = j.at("mu").get<std::vector<double>>();
    spec.realizations = j.value("realizations", std::size_t{1});
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("objectives")) {
      spec.objectives.clear();
      for (const auto& name : j.at("objectives")) {
        spec.objectives.push_back(parse_criterion(name.get<std::string>()));
      }
    }
    spec.output = j.value("output", std::string{});
    spec.aggregate_output = j.value("aggregate_output", std::string{});
    spec.threads = j.value("threads", std::size_t{0});
    spec.timing = j.value("timing", false);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("sweep config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("sweep config: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::uint64_t realization_seed(std::uint64_t base, const SweepGraph& graph, double mu,
                               std::size_t realization) {
  std::uint64_t h = hash_combine(0, graph.n);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(graph.k_avg));
  for (std::size_t s : graph.community_sizes) h = hash_combine(h, s);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(mu));
  h = hash_combine(h, realization);
  return base ^ h;
}

std::vector<SweepResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Unit {
    std::size_t graph;
    std::size_t mu;
    std::size_t realization;
  };
  std::vector<Unit> units;
  for (std::size_t g = 0; g < spec.graphs.size(); ++g) {
    for (std::size_t m = 0; m < spec.mu.size(); ++m) {
      for (std::size_t r = 0; r < spec.realizations; ++r) units.push_back({g, m, r});
    }
  }
  const std::size_t per_unit = spec.objectives.size();
  std::vector<SweepResultRow> rows(units.size() * per_unit);

  auto run_unit = [&](std::size_t u) {
    const Unit& unit = units[u];
    const SweepGraph& sg = spec.graphs[unit.graph];
    const double mu = spec.mu[unit.mu];
    const std::uint64_t seed = realization_seed(spec.seed, sg, mu, unit.realization);
    for (std::size_t o = 0; o < per_unit; ++o) {
      SweepResultRow& row = rows[u * per_unit + o];
      row.graph_index = unit.graph;
      row.mu_index = unit.mu;
      row.n = sg.n;
      row.k_avg = sg.k_avg;
      row.sizes = sg.community_sizes;
      row.mu = mu;
      row.realization = unit.realization;
      row.seed = seed;
      row.objective = spec.objectives[o];
    }
    try {
      const PlantedGraph planted =
          planted_partition({sg.n, sg.k_avg, mu, sg.community_sizes, seed});
      for (std::size_t o = 0; o < per_unit; ++o) {
        SweepResultRow& row = rows[u * per_unit + o];
        try {
          OptimizerConfig cfg;
          cfg.objective = row.objective;
          cfg.seed = seed;
          const auto start = std::chrono::steady_clock::now();
          const OptimizerResult result = optimize(planted.graph, cfg);
          const auto stop = std::chrono::steady_clock::now();
          row.ami = ami(planted.truth, result.partition);
          row.objective_value = result.objective_value;
          row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      }
    } catch (const std::exception& e) {
      for (std::size_t o = 0; o < per_unit; ++o) rows[u * per_unit + o].error = e.what();
    }
  };

  std::size_t threads = spec.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, units.size());
  if (threads <= 1) {
    for (std::size_t u = 0; u < units.size(); ++u) run_unit(u);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t u = next++; u < units.size(); u = next++) run_unit(u);
      });
    }
  }
  // Units were laid out in (graph, mu, realization, objective) order, so the
  // row vector is already sorted regardless of completion order.
  return rows;
}

void write_sweep_csv(const std::vector<SweepResultRow>& rows, bool timing, std::ostream& out) {
  out << "n,k_avg,sizes,mu,realization,objective,ami,objective_value,ms\n";
  for (const auto& r : rows) {
    out << r.n << ',' << fmt(r.k_avg) << ',' << join_sizes(r.sizes) << ',' << fmt(r.mu) << ','
        << r.realization << ',' << to_string(r.objective) << ',';
    if (r.ok()) {
      out << fmt(r.ami) << ',' << fmt(r.objective_value) << ',';
      out << (timing ? fmt(std::round(r.ms * 1000.0) / 1000.0) : std::string("NA"));
    } else {
      out << "ERROR,ERROR,NA";
    }
    out << '\n';
  }
}

std::vector<SweepAggregateRow> aggregate_sweep(const std::vector<SweepResultRow>& rows) {
  using Key = std::tuple<std::size_t, std::size_t, int>;
  std::map<Key, std::vector<const SweepResultRow*>> groups;
  for (const auto& r : rows) {
    groups[{r.graph_index, r.mu_index, static_cast<int>(r.objective)}].push_back(&r);
  }
  std::vector<SweepAggregateRow> result;
  for (const auto& [key, members] : groups) {
    const SweepResultRow& first = *members.front();
    SweepAggregateRow agg;
    agg.n = first.n;
    agg.k_avg = first.k_avg;
    agg.sizes = first.sizes;
    agg.mu = first.mu;
    agg.objective = first.objective;
    double sum = 0.0;
    for (const auto* r : members) {
      if (!r->ok()) continue;
      sum += r->ami;
      ++agg.count;
    }
    if (agg.count > 0) agg.ami_mean = sum / static_cast<double>(agg.count);
    if (agg.count > 1) {
      double sq = 0.0;
      for (const auto* r : members) {
        if (r->ok()) sq += (r->ami - agg.ami_mean) * (r->ami - agg.ami_mean);
      }
      agg.ami_std = std::sqrt(sq / static_cast<double>(agg.count - 1));
    }
    result.push_back(std::move(agg));
  }
  return result;
}

void write_aggregate_csv(const std::vector<SweepAggregateRow>& rows, std::ostream& out) {
  out << "n,k_avg,sizes,mu,objective,ami_mean,ami_std,count\n";
  for (const auto& r : rows) {
    out << r.n << ',' << fmt(r.k_avg) << ',' << join_sizes(r.sizes) << ',' << fmt(r.mu) << ','
        << to_string(r.objective) << ',' << fmt(r.ami_mean) << ',' << fmt(r.ami_std) << ','
        << r.count << '\n';
  }
}

void classification_export(const Graph& g, const Partition& truth, const Partition& pred,
                           std::ostream& out) {
  if (truth.size() != g.size() || pred.size() != g.size()) {
    throw DataError("partitions do not match the graph");
  }
  const Classification cls = classify_nodes(truth, pred, greedy_match(truth, pred));
  std::vector<char> correct(g.size(), 0);
  for (NodeId v : cls.correct) correct[v] = 1;
  const auto true_sizes = truth.cluster_sizes();
  const auto pred_sizes = pred.cluster_sizes();

  auto nld_or_na = [&](const Partition& y, const std::vector<std::size_t>& sizes, NodeId v) {
    return sizes[static_cast<std::size_t>(y.cluster_of(v))] >= 2 ? fmt(nld(g, y, v))
                                                                   : std::string("NA");
  };

  out << "node,degree,nld_true,nld_pred,mixing,correct\n";
  for (NodeId v = 0; v < g.size(); ++v) {
    out << g.labels().label(v) << ',' << fmt(g.degree(v)) << ','
        << nld_or_na(truth, true_sizes, v) << ',' << nld_or_na(pred, pred_sizes, v) << ','
        << (g.degree(v) > 0.0 ? fmt(mixing_parameter(g, truth, v)) : std::string("NA")) << ','
        << int{correct[v]} << '\n';
  }
}

}  // namespace synwalk
