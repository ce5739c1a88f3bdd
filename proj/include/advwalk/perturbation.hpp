#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "advwalk/error.hpp"
#include "advwalk/loss.hpp"

namespace advwalk {

/// Gradient norms below this are treated as zero.
inline constexpr double kZeroGradientNorm = 1e-12;

namespace detail {

// Rescales each row to norm `eps`; rows with vanishing norm are zeroed and counted.
template <typename Scalar>
std::size_t normalize_rows(RowMatrix<Scalar>& rows, Scalar eps) {
  std::size_t zeros = 0;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const Scalar norm = rows.row(r).norm();
    if (norm < Scalar(kZeroGradientNorm)) {
      rows.row(r).setZero();
      ++zeros;
    } else {
      rows.row(r) *= eps / norm;
    }
  }
  return zeros;
}

}  // namespace detail

/// Fast gradient method: every row of `gradient` becomes eps * g / ||g||.
template <typename Scalar>
PerturbationSet<Scalar> perturbations_from_gradient(RowSet<Scalar> gradient, Scalar eps) {
  PerturbationSet<Scalar> out{std::move(gradient), 0};
  out.zero_gradient_rows = detail::normalize_rows(out.rows.target, eps) +
                           detail::normalize_rows(out.rows.context, eps);
  return out;
}

/// Perturbations along the gradient of the clean batch loss, for every node of the batch,
/// on both its target and context row. Parameters are held constant.
template <typename Scalar>
PerturbationSet<Scalar> fast_gradient_perturbations(const EmbeddingModel<Scalar>& model,
                                                    const PairBatch& batch, Scalar eps) {
  if (!(eps > Scalar(0))) throw std::invalid_argument("fast_gradient_perturbations: eps must be > 0");
  return perturbations_from_gradient(batch_gradient(model, batch), eps);
}

/// Gaussian directions rescaled to norm exactly eps, one per batch node and row kind.
template <typename Scalar>
PerturbationSet<Scalar> random_perturbations(const PairBatch& batch, Eigen::Index nodes,
                                             Eigen::Index dim, Scalar eps, Rng& rng) {
  if (!(eps > Scalar(0))) throw std::invalid_argument("random_perturbations: eps must be > 0");
  PerturbationSet<Scalar> out{RowSet<Scalar>::for_batch(batch, nodes, dim), 0};
  std::normal_distribution<double> normal;
  for (RowMatrix<Scalar>* rows : {&out.rows.target, &out.rows.context}) {
    for (Eigen::Index r = 0; r < rows->rows(); ++r) {
      Scalar norm = 0;
      while (norm < Scalar(kZeroGradientNorm)) {
        for (Eigen::Index k = 0; k < dim; ++k) (*rows)(r, k) = static_cast<Scalar>(normal(rng));
        norm = rows->row(r).norm();
      }
      rows->row(r) *= eps / norm;
    }
  }
  return out;
}

/// For every node t: its T nearest nodes by Euclidean distance and the unit vectors
/// (e_k - e_t) / ||e_k - e_t|| pointing at them.
template <typename Scalar>
struct NeighborDirections {
  Eigen::Index per_node = 0;
  std::vector<NodeId> neighbors;                            // node-major, per_node each
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> directions;  // dim x (nodes * per_node)

  std::span<const NodeId> neighbors_of(NodeId t) const {
    return {neighbors.data() + static_cast<std::size_t>(t) * static_cast<std::size_t>(per_node),
            static_cast<std::size_t>(per_node)};
  }
  auto directions_of(NodeId t) const { return directions.middleCols(t * per_node, per_node); }
};

/// Candidates closer than 1e-12 are skipped in favor of the next nearest. Throws DataError
/// when fewer than T usable candidates exist for some node. Ties break toward lower ids.
template <typename Scalar>
NeighborDirections<Scalar> build_neighbor_directions(const RowMatrix<Scalar>& embeddings,
                                                     Eigen::Index per_node) {
  if (per_node < 1) throw std::invalid_argument("build_neighbor_directions: T must be >= 1");
  const Eigen::Index n = embeddings.rows();
  const Eigen::Index d = embeddings.cols();
  NeighborDirections<Scalar> out;
  out.per_node = per_node;
  out.neighbors.reserve(static_cast<std::size_t>(n * per_node));
  out.directions.resize(d, n * per_node);

  std::vector<std::pair<Scalar, NodeId>> candidates(static_cast<std::size_t>(n));
  Vector<Scalar> diff(d);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index k = 0; k < n; ++k)
      candidates[k] = {(embeddings.row(k) - embeddings.row(t)).squaredNorm(), static_cast<NodeId>(k)};
    std::sort(candidates.begin(), candidates.end());
    Eigen::Index found = 0;
    for (const auto& [dist2, k] : candidates) {
      if (found == per_node) break;
      if (k == t) continue;
      diff = (embeddings.row(k) - embeddings.row(t)).transpose();
      const Scalar norm = diff.norm();
      if (norm < Scalar(kZeroGradientNorm)) continue;
      out.directions.col(t * per_node + found) = diff / norm;
      out.neighbors.push_back(k);
      ++found;
    }
    if (found < per_node)
      throw DataError("build_neighbor_directions: not enough distinct neighbors for node " +
                      std::to_string(t));
  }
  return out;
}

/// Gradient of the regularizer with respect to each batch node's direction weights, taken
/// at w = 0: g_t = V_t^T dL/dn_t. Rows follow `RowSet::for_batch` order, T columns each.
template <typename Scalar>
struct DirectionWeights {
  RowSet<Scalar> rows;  // only used for node order
  RowMatrix<Scalar> target;
  RowMatrix<Scalar> context;
};

template <typename Scalar>
DirectionWeights<Scalar> direction_weight_gradient(const EmbeddingModel<Scalar>& model,
                                                   const PairBatch& batch,
                                                   const NeighborDirections<Scalar>& target_dirs,
                                                   const NeighborDirections<Scalar>& context_dirs,
                                                   bool use_scale) {
  auto grad = batch_gradient(model, batch, static_cast<const PerturbationSet<Scalar>*>(nullptr),
                             use_scale, GradientWrt::perturbation);
  const auto count = static_cast<Eigen::Index>(grad.size());
  DirectionWeights<Scalar> out;
  out.target.resize(count, target_dirs.per_node);
  out.context.resize(count, context_dirs.per_node);
  for (Eigen::Index s = 0; s < count; ++s) {
    const NodeId t = grad.nodes()[static_cast<std::size_t>(s)];
    out.target.row(s).noalias() = grad.target.row(s) * target_dirs.directions_of(t);
    out.context.row(s).noalias() = grad.context.row(s) * context_dirs.directions_of(t);
  }
  out.rows = std::move(grad);
  return out;
}

/// Interpretable perturbations: each batch node's perturbation is restricted to the span of
/// its neighbor directions, n_t = V_t w_t with w_t = eps * g_t / ||g_t|| (see
/// direction_weight_gradient). Context rows use directions among context embeddings.
template <typename Scalar>
struct InterpretablePerturbations {
  PerturbationSet<Scalar> perturbation;
  RowMatrix<Scalar> target_weights;   // rows follow perturbation.rows.nodes()
  RowMatrix<Scalar> context_weights;
};

template <typename Scalar>
InterpretablePerturbations<Scalar> interpretable_perturbations(
    const EmbeddingModel<Scalar>& model, const PairBatch& batch,
    const NeighborDirections<Scalar>& target_dirs, const NeighborDirections<Scalar>& context_dirs,
    Scalar eps, bool use_scale = true) {
  if (!(eps > Scalar(0))) throw std::invalid_argument("interpretable_perturbations: eps must be > 0");
  auto weights = direction_weight_gradient(model, batch, target_dirs, context_dirs, use_scale);
  InterpretablePerturbations<Scalar> out;
  out.perturbation.zero_gradient_rows =
      detail::normalize_rows(weights.target, eps) + detail::normalize_rows(weights.context, eps);
  out.perturbation.rows = std::move(weights.rows);
  RowSet<Scalar>& rows = out.perturbation.rows;
  for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(rows.size()); ++s) {
    const NodeId t = rows.nodes()[static_cast<std::size_t>(s)];
    rows.target.row(s).noalias() = (target_dirs.directions_of(t) * weights.target.row(s).transpose()).transpose();
    rows.context.row(s).noalias() = (context_dirs.directions_of(t) * weights.context.row(s).transpose()).transpose();
  }
  out.target_weights = std::move(weights.target);
  out.context_weights = std::move(weights.context);
  return out;
}

}  // namespace advwalk
