#include "synwalk/partition.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "synwalk/error.hpp"
#include "synwalk/graph.hpp"

namespace synwalk {

Partition::Partition(std::span<const int> labels) : assignment_(labels.size()) {
  std::unordered_map<int, int> dense;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("negative cluster id");
    auto [it, inserted] = dense.emplace(labels[i], static_cast<int>(dense.size()));
    assignment_[i] = it->second;
  }
  k_ = dense.size();
}

Partition Partition::singletons(std::size_t n) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
  return Partition(labels);
}

Partition Partition::single_cluster(std::size_t n) {
  return Partition(std::vector<int>(n, 0));
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (int c : assignment_) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

std::vector<std::vector<std::uint32_t>> Partition::members() const {
  std::vector<std::vector<std::uint32_t>> result(k_);
  for (std::size_t v = 0; v < assignment_.size(); ++v) {
    result[static_cast<std::size_t>(assignment_[v])].push_back(static_cast<std::uint32_t>(v));
  }
  return result;
}

Partition Partition::compose(const Partition& coarse) const {
  if (coarse.size() != k_) {
    throw std::invalid_argument("coarse partition must cover every cluster");
  }
  std::vector<int> labels(assignment_.size());
  for (std::size_t v = 0; v < assignment_.size(); ++v) {
    labels[v] = coarse.cluster_of(static_cast<std::size_t>(assignment_[v]));
  }
  return Partition(labels);
}

void write_partition(const Partition& y, const LabelMap& labels, std::ostream& out) {
  if (labels.size() != y.size()) {
    throw DataError("partition and label map sizes differ");
  }
  for (std::size_t v = 0; v < y.size(); ++v) {
    out << labels.label(static_cast<NodeId>(v)) << ' ' << y.cluster_of(v) << '\n';
  }
}

Partition read_partition(std::istream& in, const LabelMap& labels) {
  std::vector<int> cluster(labels.size(), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long label = -1;
    long long c = -1;
    std::string extra;
    if (!(fields >> label >> c) || (fields >> extra) || label < 0 || c < 0) {
      throw ParseError(line_no, "expected 'node_label cluster_index'");
    }
    NodeId v = labels.index(static_cast<std::uint64_t>(label));
    if (cluster[v] >= 0) {
      throw ParseError(line_no, "node " + std::to_string(label) + " assigned twice");
    }
    cluster[v] = static_cast<int>(c);
  }
  for (std::size_t v = 0; v < cluster.size(); ++v) {
    if (cluster[v] < 0) {
      throw DataError("node " + std::to_string(labels.label(static_cast<NodeId>(v))) +
                      " has no cluster");
    }
  }
  return Partition(cluster);
}

}  // namespace synwalk
