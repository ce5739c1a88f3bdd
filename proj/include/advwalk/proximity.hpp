#pragma once

#include <filesystem>
#include <span>

#include <Eigen/SparseCore>

#include "advwalk/graph.hpp"
#include "advwalk/walker.hpp"

namespace advwalk {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row-normalized adjacency: entry (i, j) = A_ij / sum_k A_ik.
SparseMatrix transition_matrix(const Graph& graph);

/// Shifted positive PMI over the first `order` transition powers:
///   S = P + P^2 + ... + P^order
///   M_ij = max(log(S_ij / sum_k S_kj) - log(shift), 0)
/// Only strictly positive entries are stored. Throws std::invalid_argument if order < 1 or
/// shift <= 0.
SparseMatrix shifted_ppmi(const Graph& graph, int order, double shift);

/// Per-pair scale factors 1 - M_ij / max(M), defined for every (i, j); pairs absent from M
/// map to 1. When M has no positive entry every factor is 1.
class ScaleMatrix {
 public:
  ScaleMatrix(SparseMatrix ppmi, int order, double shift);

  /// Builds M from the graph; `shift` <= 0 selects 1/N.
  static ScaleMatrix from_graph(const Graph& graph, int order = 2, double shift = 0.0);

  double operator()(NodeId i, NodeId j) const;
  double ppmi(NodeId i, NodeId j) const;
  double max_ppmi() const noexcept { return max_; }
  int order() const noexcept { return order_; }
  double shift() const noexcept { return shift_; }
  const SparseMatrix& matrix() const noexcept { return ppmi_; }

  /// Overwrites batch.scale with the factor of every (target, context) pair.
  void apply(PairBatch& batch) const;

  /// `i<TAB>j<TAB>M_ij<TAB>phi_ij` for every stored entry, by node name.
  void save_tsv(const std::filesystem::path& path, const Graph& graph) const;

 private:
  SparseMatrix ppmi_;
  double max_ = 0.0;
  int order_;
  double shift_;
};

}  // namespace advwalk
