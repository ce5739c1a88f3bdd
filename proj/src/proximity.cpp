#include "advwalk/proximity.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "advwalk/error.hpp"

namespace advwalk {

SparseMatrix transition_matrix(const Graph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(graph.arc_count());
  for (NodeId u = 0; u < static_cast<NodeId>(n); ++u) {
    const auto nbrs = graph.neighbors(u);
    const auto ws = graph.weights(u);
    double total = 0.0;
    for (double w : ws) total += w;
    for (std::size_t k = 0; k < nbrs.size(); ++k) triplets.emplace_back(u, nbrs[k], ws[k] / total);
  }
  SparseMatrix p(n, n);
  p.setFromTriplets(triplets.begin(), triplets.end());
  return p;
}

SparseMatrix shifted_ppmi(const Graph& graph, int order, double shift) {
  if (order < 1) throw std::invalid_argument("shifted_ppmi: order must be >= 1");
  if (!(shift > 0.0)) throw std::invalid_argument("shifted_ppmi: shift must be > 0");

  const SparseMatrix step = transition_matrix(graph);
  SparseMatrix power = step;
  SparseMatrix sum = step;
  for (int k = 2; k <= order; ++k) {
    power = SparseMatrix(power * step);
    sum += power;
  }

  const auto n = sum.cols();
  Eigen::VectorXd column_sum = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < sum.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(sum, r); it; ++it) column_sum[it.col()] += it.value();

  const double log_shift = std::log(shift);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index r = 0; r < sum.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(sum, r); it; ++it) {
      if (it.value() <= 0.0) continue;
      if (column_sum[it.col()] <= 0.0) throw DataError("shifted_ppmi: degenerate column");
      const double m = std::log(it.value() / column_sum[it.col()]) - log_shift;
      if (m > 0.0) triplets.emplace_back(it.row(), it.col(), m);
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

ScaleMatrix::ScaleMatrix(SparseMatrix ppmi, int order, double shift)
    : ppmi_(std::move(ppmi)), order_(order), shift_(shift) {
  ppmi_.makeCompressed();
  for (Eigen::Index k = 0; k < ppmi_.nonZeros(); ++k) max_ = std::max(max_, ppmi_.valuePtr()[k]);
}

ScaleMatrix ScaleMatrix::from_graph(const Graph& graph, int order, double shift) {
  if (shift <= 0.0) shift = 1.0 / static_cast<double>(graph.node_count());
  return ScaleMatrix(shifted_ppmi(graph, order, shift), order, shift);
}

double ScaleMatrix::ppmi(NodeId i, NodeId j) const {
  if (i < 0 || j < 0 || i >= ppmi_.rows() || j >= ppmi_.cols()) return 0.0;
  return ppmi_.coeff(i, j);
}

double ScaleMatrix::operator()(NodeId i, NodeId j) const {
  if (max_ <= 0.0) return 1.0;
  return 1.0 - ppmi(i, j) / max_;
}

void ScaleMatrix::apply(PairBatch& batch) const {
  batch.scale.resize(batch.size());
  for (std::size_t p = 0; p < batch.size(); ++p)
    batch.scale[p] = (*this)(batch.targets[p], batch.contexts[p]);
}

void ScaleMatrix::save_tsv(const std::filesystem::path& path, const Graph& graph) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index r = 0; r < ppmi_.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(ppmi_, r); it; ++it) {
      const auto i = static_cast<NodeId>(it.row());
      const auto j = static_cast<NodeId>(it.col());
      out << graph.name(i) << '\t' << graph.name(j) << '\t' << it.value() << '\t' << (*this)(i, j)
          << '\n';
    }
}

}  // namespace advwalk
