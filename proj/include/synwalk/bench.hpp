#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "synwalk/graph.hpp"
#include "synwalk/objective.hpp"
#include "synwalk/partition.hpp"

namespace synwalk {

struct SweepGraph {
  std::size_t n = 0;
  double k_avg = 0.0;
  std::vector<std::size_t> community_sizes;
};

struct SweepSpec {
  std::vector<SweepGraph> graphs;
  std::vector<double> mu;
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  std::vector<Criterion> objectives{Criterion::synwalk};
  std::string output;            // raw rows CSV
  std::string aggregate_output;  // per grid point summary CSV
  std::size_t threads = 0;       // 0: hardware concurrency
  bool timing = false;           // wall-clock ms column; off keeps output reproducible

  void validate() const;
};

// Reads the JSON sweep config. Throws DataError on malformed input.
SweepSpec read_sweep_spec(std::istream& in);

struct SweepResultRow {
  std::size_t graph_index = 0;
  std::size_t mu_index = 0;
  std::size_t n = 0;
  double k_avg = 0.0;
  std::vector<std::size_t> sizes;
  double mu = 0.0;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  Criterion objective = Criterion::synwalk;
  double ami = 0.0;
  double objective_value = 0.0;
  double ms = 0.0;
  std::string error;  // non-empty marks a failed realization

  bool ok() const { return error.empty(); }
};

// Seed for one realization, shared by the generator and the optimizer.
std::uint64_t realization_seed(std::uint64_t base, const SweepGraph& graph, double mu,
                               std::size_t realization);

// Runs every (graph, mu, realization, objective) unit, possibly on several
// threads, and returns rows ordered by (graph, mu, realization, objective).
std::vector<SweepResultRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(const std::vector<SweepResultRow>& rows, bool timing, std::ostream& out);

struct SweepAggregateRow {
  std::size_t n = 0;
  double k_avg = 0.0;
  std::vector<std::size_t> sizes;
  double mu = 0.0;
  Criterion objective = Criterion::synwalk;
  double ami_mean = 0.0;
  double ami_std = 0.0;  // sample standard deviation
  std::size_t count = 0;
};

std::vector<SweepAggregateRow> aggregate_sweep(const std::vector<SweepResultRow>& rows);
void write_aggregate_csv(const std::vector<SweepAggregateRow>& rows, std::ostream& out);

// Per-node export for the classification analysis, CSV
// "node,degree,nld_true,nld_pred,mixing,correct". mixing is taken w.r.t. the
// true partition; undefined values are written as NA.
void classification_export(const Graph& g, const Partition& truth, const Partition& pred,
                           std::ostream& out);

}  // namespace synwalk
