#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace synwalk {

class LabelMap;

// Total assignment of nodes to clusters 0..K-1 with no empty cluster.
class Partition {
 public:
  Partition() = default;

  // Relabels arbitrary non-negative cluster ids densely in order of first
  // appearance. Throws std::invalid_argument on negative ids.
  explicit Partition(std::span<const int> labels);
  explicit Partition(const std::vector<int>& labels)
      : Partition(std::span<const int>(labels)) {}

  static Partition singletons(std::size_t n);
  static Partition single_cluster(std::size_t n);

  std::size_t size() const { return assignment_.size(); }
  std::size_t cluster_count() const { return k_; }
  int cluster_of(std::size_t node) const { return assignment_.at(node); }
  std::span<const int> assignment() const { return assignment_; }

  std::vector<std::size_t> cluster_sizes() const;
  std::vector<std::vector<std::uint32_t>> members() const;

  // partition of the coarse level applied on top of this one:
  // result(node) = coarse(this(node)).
  Partition compose(const Partition& coarse) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> assignment_;
  std::size_t k_ = 0;
};

// "node_label cluster_index" per line, in dense node order.
void write_partition(const Partition& y, const LabelMap& labels,
                     std::ostream& out);

// Every label of the map must be assigned exactly once; unknown labels and
// missing nodes raise DataError.
Partition read_partition(std::istream& in, const LabelMap& labels);

}  // namespace synwalk
