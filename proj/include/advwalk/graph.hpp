#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "advwalk/alias_table.hpp"
#include "advwalk/random.hpp"

namespace advwalk {

using NodeId = std::int32_t;

struct Arc {
  NodeId source;
  NodeId target;
  double weight;
};

struct NodePair {
  NodeId first;
  NodeId second;
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

/// Preprocessed weighted graph in CSR form with one neighbor sampler per node.
///
/// Invariants: no self-loops, strictly positive weights, out-degree >= 1 for every node,
/// undirected graphs hold both arcs of every edge with equal weight.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `names.size()` nodes. Arcs are merged by summing weights; for
  /// undirected graphs each arc is mirrored. Nodes keep their ids; throws DataError if the
  /// result violates an invariant (self-loop, non-positive weight, isolated node).
  static Graph from_arcs(std::vector<std::string> names, std::span<const Arc> arcs,
                         bool directed);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t arc_count() const noexcept { return neighbors_.size(); }
  /// Undirected edge count (arc_count / 2) for undirected graphs, arc count otherwise.
  std::size_t edge_count() const noexcept { return directed_ ? arc_count() : arc_count() / 2; }
  bool directed() const noexcept { return directed_; }

  std::size_t out_degree(NodeId v) const noexcept {
    return static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
  }
  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], out_degree(v)};
  }
  std::span<const double> weights(NodeId v) const noexcept {
    return {weights_.data() + offsets_[v], out_degree(v)};
  }
  /// Arc weight, 0 when absent.
  double weight(NodeId u, NodeId v) const noexcept;
  bool has_arc(NodeId u, NodeId v) const noexcept { return weight(u, v) > 0.0; }

  /// Draws a neighbor of `v` with probability proportional to the arc weight.
  NodeId sample_neighbor(NodeId v, Rng& rng) const {
    return neighbors_[offsets_[v] + static_cast<std::int64_t>(samplers_[v].sample(rng))];
  }

  const std::string& name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<NodeId> find(const std::string& name) const;

  std::span<const std::int64_t> offsets() const noexcept { return offsets_; }

 private:
  std::vector<std::int64_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<double> weights_;
  std::vector<AliasTable> samplers_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  bool directed_ = false;
};

struct EdgeListOptions {
  bool directed = false;
  bool weighted = false;
};

/// Parses `src dst [weight]` lines (tab or space separated, `#` comments), then drops
/// self-loops and, until fixpoint, nodes left without outgoing arcs. Surviving nodes are
/// numbered in order of first appearance.
Graph parse_edge_list(std::istream& in, const EdgeListOptions& options);
Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options);

/// Writes the canonical edge list: loading it back yields the same graph with the same ids,
/// and writing that graph reproduces the file byte for byte.
void write_edge_list(std::ostream& out, const Graph& graph);
void save_edge_list(const std::filesystem::path& path, const Graph& graph);

/// Writes `id<TAB>name` lines.
void save_node_map(const std::filesystem::path& path, const Graph& graph);

/// Renumbers nodes in the order the canonical writer introduces them.
Graph canonicalize(const Graph& graph);

/// Unigram noise distribution over nodes, weight out_degree^0.75.
AliasTable negative_distribution(const Graph& graph);

/// `node<TAB>label` records in file order.
struct LabelRecord {
  std::string node;
  std::string label;
};
std::vector<LabelRecord> read_labels(std::istream& in);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);

}  // namespace advwalk
