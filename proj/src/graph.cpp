#include "synwalk/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>

#include "synwalk/error.hpp"
#include "synwalk/random.hpp"

namespace synwalk {

LabelMap::LabelMap(std::vector<std::uint64_t> labels)
    : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<NodeId>(i)).second) {
      throw DataError("duplicate node label " + std::to_string(labels_[i]));
    }
  }
}

LabelMap LabelMap::identity(std::size_t n) {
  std::vector<std::uint64_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::uint64_t{0});
  return LabelMap(std::move(labels));
}

NodeId LabelMap::index(std::uint64_t label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw DataError("unknown node label " + std::to_string(label));
  }
  return it->second;
}

void LabelMap::write(std::ostream& out) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out << labels_[i] << ' ' << i << '\n';
  }
}

Graph::Graph(std::size_t n, std::vector<Edge> edges, bool directed,
             LabelMap labels)
    : n_(n), directed_(directed), labels_(std::move(labels)) {
  if (n_ == 0) throw std::invalid_argument("graph needs at least one node");
  if (labels_.size() == 0) labels_ = LabelMap::identity(n_);
  if (labels_.size() != n_) {
    throw std::invalid_argument("label map size does not match node count");
  }
  for (Edge& e : edges) {
    if (e.source >= n_ || e.target >= n_) {
      throw std::out_of_range("edge endpoint out of range");
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("edge weights must be finite and >= 0");
    }
    if (!directed_ && e.source > e.target) std::swap(e.source, e.target);
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().source == e.source &&
        edges_.back().target == e.target) {
      edges_.back().weight += e.weight;
    } else {
      edges_.push_back(e);
    }
  }

  // CSR adjacency, built by counting then filling.
  auto build = [this](bool reverse, std::vector<std::size_t>& offsets,
                      std::vector<Neighbor>& adj) {
    offsets.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
      NodeId from = reverse ? e.target : e.source;
      NodeId to = reverse ? e.source : e.target;
      ++offsets[from + 1];
      if (!directed_ && from != to) ++offsets[to + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    adj.resize(offsets.back());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const Edge& e : edges_) {
      NodeId from = reverse ? e.target : e.source;
      NodeId to = reverse ? e.source : e.target;
      if (!directed_ && from == to) {
        adj[cursor[from]++] = {to, 2.0 * e.weight};
        continue;
      }
      adj[cursor[from]++] = {to, e.weight};
      if (!directed_) adj[cursor[to]++] = {from, e.weight};
    }
    // Keep each row sorted by neighbor index for deterministic scans.
    for (std::size_t v = 0; v < n_; ++v) {
      std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                adj.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]),
                [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
  };
  build(false, out_offsets_, out_adj_);
  if (directed_) build(true, in_offsets_, in_adj_);

  degree_.assign(n_, 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    for (std::size_t k = out_offsets_[v]; k < out_offsets_[v + 1]; ++k) {
      degree_[v] += out_adj_[k].weight;
    }
  }
}

void Graph::check_node(NodeId node) const {
  if (node >= n_) {
    throw std::out_of_range("node " + std::to_string(node) + " out of range");
  }
}

std::span<const Neighbor> Graph::out_neighbors(NodeId node) const {
  check_node(node);
  return std::span<const Neighbor>(out_adj_).subspan(
      out_offsets_[node], out_offsets_[node + 1] - out_offsets_[node]);
}

std::span<const Neighbor> Graph::in_neighbors(NodeId node) const {
  if (!directed_) return out_neighbors(node);
  check_node(node);
  return std::span<const Neighbor>(in_adj_).subspan(
      in_offsets_[node], in_offsets_[node + 1] - in_offsets_[node]);
}

double Graph::degree(NodeId node) const {
  check_node(node);
  return degree_[node];
}

bool Graph::unweighted() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.weight == 1.0; });
}

bool Graph::has_self_loops() const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.source == e.target; });
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::uint64_t parse_label(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "invalid node label '" + std::string(token) + "'");
  }
  return value;
}

double parse_weight(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(line_no, "invalid weight '" + std::string(token) + "'");
  }
  if (value < 0.0) throw ParseError(line_no, "negative weight");
  return value;
}

}  // namespace

Graph load_edge_list(std::istream& in, bool directed) {
  std::vector<std::uint64_t> labels;
  std::unordered_map<std::uint64_t, NodeId> index;
  std::vector<Edge> edges;
  auto dense = [&](std::uint64_t label) {
    auto [it, inserted] = index.emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected 'u v' or 'u v w', got " +
                                    std::to_string(tokens.size()) + " tokens");
    }
    std::uint64_t u = parse_label(tokens[0], line_no);
    std::uint64_t v = parse_label(tokens[1], line_no);
    double w = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 1.0;
    NodeId du = dense(u);
    NodeId dv = dense(v);
    edges.push_back({du, dv, w});
  }
  if (labels.empty()) throw DataError("edge list contains no edges");
  const std::size_t n = labels.size();
  return Graph(n, std::move(edges), directed, LabelMap(std::move(labels)));
}

void write_edge_list(const Graph& g, std::ostream& out) {
  std::ostringstream buf;
  buf.precision(17);
  for (const Edge& e : g.edges()) {
    buf << g.labels().label(e.source) << ' ' << g.labels().label(e.target) << ' '
        << e.weight << '\n';
  }
  out << buf.str();
}

double density(const Graph& g) {
  if (g.directed()) throw UnsupportedInput("density is defined for undirected graphs");
  if (g.size() < 2) throw std::invalid_argument("density needs at least two nodes");
  std::size_t links = 0;
  for (const Edge& e : g.edges()) {
    if (e.source != e.target) ++links;
  }
  const double n = static_cast<double>(g.size());
  return 2.0 * static_cast<double>(links) / (n * (n - 1.0));
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<NodeId>> result;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(result.size());
    result.emplace_back();
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      result.back().push_back(v);
      auto visit = [&](std::span<const Neighbor> nbrs) {
        for (const Neighbor& nb : nbrs) {
          if (comp[nb.node] < 0) {
            comp[nb.node] = id;
            stack.push_back(nb.node);
          }
        }
      };
      visit(g.out_neighbors(v));
      if (g.directed()) visit(g.in_neighbors(v));
    }
    std::sort(result.back().begin(), result.back().end());
  }
  return result;
}

PlantedGraph planted_partition(const PlantedPartitionParams& params) {
  const std::size_t n = params.n;
  const auto& sizes = params.community_sizes;
  if (n < 2) throw DataError("planted partition needs n >= 2");
  if (!(params.mu >= 0.0 && params.mu < 1.0)) throw DataError("mu must lie in [0, 1)");
  if (!(params.k_avg > 0.0) || params.k_avg >= static_cast<double>(n)) {
    throw DataError("k_avg must lie in (0, n)");
  }
  if (sizes.empty() ||
      std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) != n) {
    throw DataError("community sizes must sum to n");
  }
  if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s < 2; })) {
    throw DataError("every community needs at least two nodes");
  }

  const double internal_degree = (1.0 - params.mu) * params.k_avg;
  std::vector<double> p_in(sizes.size());
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    p_in[c] = internal_degree / static_cast<double>(sizes[c] - 1);
    if (p_in[c] > 1.0) {
      throw DataError("infeasible: internal degree " + std::to_string(internal_degree) +
                      " exceeds community capacity " + std::to_string(sizes[c] - 1));
    }
  }
  double external_pairs = 0.0;
  for (std::size_t s : sizes) {
    external_pairs += static_cast<double>(s) * static_cast<double>(n - s);
  }
  external_pairs /= 2.0;
  double p_out = 0.0;
  if (params.mu > 0.0) {
    if (external_pairs == 0.0) {
      throw DataError("infeasible: mu > 0 with a single community");
    }
    p_out = params.mu * params.k_avg * static_cast<double>(n) / (2.0 * external_pairs);
    if (p_out > 1.0) throw DataError("infeasible: external degree too large");
  }

  std::vector<int> community(n);
  {
    std::size_t v = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      for (std::size_t k = 0; k < sizes[c]; ++k) community[v++] = static_cast<int>(c);
    }
  }

  Rng rng(params.seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool same = community[u] == community[v];
      const double p = same ? p_in[static_cast<std::size_t>(community[u])] : p_out;
      // Draw unconditionally so the stream layout does not depend on mu.
      if (uniform01(rng) < p) edges.push_back({u, v, 1.0});
    }
  }
  return {Graph(n, std::move(edges), false), Partition(community)};
}

}  // namespace synwalk
