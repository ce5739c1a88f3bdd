#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "advwalk/graph.hpp"
#include "advwalk/model.hpp"

namespace advwalk::eval {

/// Hidden-edge split of an undirected graph. The residual graph keeps the source graph's
/// node ids and names, and every node keeps degree >= 1.
struct LinkSplit {
  Graph residual;
  std::vector<NodePair> test_edges;      // first < second, sorted
  std::vector<NodePair> test_negatives;  // 2x test_edges, non-edges of the source graph
  double keep_ratio = 0.8;
  std::uint64_t seed = 0;

  /// True for residual and hidden edges, in either orientation.
  bool is_source_edge(NodeId u, NodeId v) const;
};

/// Hides round((1 - keep_ratio) * |E|) edges picked uniformly at random, rejecting picks
/// that would leave an endpoint without edges. Throws DataError after 100 * |E| rejections
/// or if the graph is directed.
LinkSplit split_link_prediction(const Graph& graph, double keep_ratio, std::uint64_t seed);

/// Writes `residual.edges` (canonical edge list) and `test.tsv` (`u<TAB>v<TAB>label`, 1 for
/// hidden edges, 0 for negatives) under `dir`.
void save_link_split(const std::filesystem::path& dir, const LinkSplit& split);
/// Reads a split written by save_link_split; node ids follow the residual edge list.
LinkSplit load_link_split(const std::filesystem::path& dir);

/// Row k is the elementwise product of the embeddings of pairs[k]'s endpoints.
Eigen::MatrixXd hadamard_features(const RowMatrix<double>& embeddings,
                                  std::span<const NodePair> pairs);

/// Fits the linear classifier on residual edges plus as many sampled non-edges (hidden test
/// edges and test negatives excluded), then returns the AUC of its decision values on the
/// test edges against the test negatives. Embedding rows follow the split's node ids.
double auc_link_prediction(const RowMatrix<double>& embeddings, const LinkSplit& split,
                           std::uint64_t seed);

}  // namespace advwalk::eval
