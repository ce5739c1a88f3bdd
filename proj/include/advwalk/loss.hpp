#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "advwalk/graph.hpp"
#include "advwalk/model.hpp"
#include "advwalk/walker.hpp"

namespace advwalk {

template <typename Scalar>
Scalar log_sigmoid(Scalar x) {
  return x >= Scalar(0) ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// Target and context rows for a sorted subset of nodes. Used for gradients and for
/// perturbations; nodes outside the subset read as zero.
template <typename Scalar>
class RowSet {
 public:
  RowSet() = default;

  /// `nodes` must be sorted and unique, all in [0, total_nodes).
  RowSet(std::vector<NodeId> nodes, Eigen::Index total_nodes, Eigen::Index dim)
      : nodes_(std::move(nodes)), slots_(static_cast<std::size_t>(total_nodes), -1) {
    for (std::size_t s = 0; s < nodes_.size(); ++s) slots_[nodes_[s]] = static_cast<std::int32_t>(s);
    target = RowMatrix<Scalar>::Zero(static_cast<Eigen::Index>(nodes_.size()), dim);
    context = RowMatrix<Scalar>::Zero(static_cast<Eigen::Index>(nodes_.size()), dim);
  }

  /// Every node that appears in the batch as target, context or negative.
  static RowSet for_batch(const PairBatch& batch, Eigen::Index total_nodes, Eigen::Index dim) {
    std::vector<NodeId> ids;
    ids.reserve(batch.targets.size() + batch.contexts.size() + batch.negatives.size());
    ids.insert(ids.end(), batch.targets.begin(), batch.targets.end());
    ids.insert(ids.end(), batch.contexts.begin(), batch.contexts.end());
    ids.insert(ids.end(), batch.negatives.begin(), batch.negatives.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return RowSet(std::move(ids), total_nodes, dim);
  }

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  Eigen::Index dim() const noexcept { return target.cols(); }
  /// Row index of `v`, or -1.
  Eigen::Index slot(NodeId v) const noexcept {
    return v >= 0 && static_cast<std::size_t>(v) < slots_.size() ? slots_[v] : -1;
  }
  bool contains(NodeId v) const noexcept { return slot(v) >= 0; }

  RowMatrix<Scalar> target;
  RowMatrix<Scalar> context;

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::int32_t> slots_;
};

/// Per-node perturbations of target rows (n_i) and context rows (n'_j).
template <typename Scalar>
struct PerturbationSet {
  RowSet<Scalar> rows;
  /// Rows left at zero because their generating gradient vanished.
  std::size_t zero_gradient_rows = 0;
};

enum class GradientWrt {
  parameters,    // d/dU and d/dU' with perturbations held constant
  perturbation,  // d/dn and d/dn', positive-term paths carry the pair's scale factor
};

/// Negative-sampling loss of a batch, optionally on perturbed embeddings:
///
///   -sum_pairs [ log sig((u'_j + phi n'_j)^T (u_i + phi n_i))
///                + sum_k log sig(-(u'_k + n'_k)^T (u_i + n_i)) ]
///
/// phi is the pair's scale factor when `use_scale` is set and 1 otherwise; it applies to the
/// positive term only. Without a perturbation set every n is zero. If `gradient` is given,
/// the gradient of the loss is added into it; its rows must cover every batch node.
template <typename Scalar>
Scalar accumulate_loss(const EmbeddingModel<Scalar>& model, const PairBatch& batch,
                       const PerturbationSet<Scalar>* perturbation, bool use_scale,
                       RowSet<Scalar>* gradient, GradientWrt wrt = GradientWrt::parameters) {
  const Eigen::Index d = model.dim();
  const RowSet<Scalar>* noise = perturbation ? &perturbation->rows : nullptr;
  Vector<Scalar> a(d), b(d), a_neg(d), c(d);
  Scalar total = 0;

  auto add_noise = [&](Vector<Scalar>& v, const RowMatrix<Scalar>& rows, NodeId node, Scalar w) {
    if (!noise) return;
    const Eigen::Index s = noise->slot(node);
    if (s >= 0) v.noalias() += w * rows.row(s).transpose();
  };

  for (std::size_t p = 0; p < batch.size(); ++p) {
    const NodeId i = batch.targets[p];
    const NodeId j = batch.contexts[p];
    const Scalar phi = use_scale ? static_cast<Scalar>(batch.scale[p]) : Scalar(1);

    a = model.target.row(i).transpose();
    a_neg = a;
    b = model.context.row(j).transpose();
    if (noise) {
      add_noise(a, noise->target, i, phi);
      add_noise(a_neg, noise->target, i, Scalar(1));
      add_noise(b, noise->context, j, phi);
    }

    const Scalar pos_score = a.dot(b);
    total -= log_sigmoid(pos_score);
    Eigen::Index gi = -1;
    if (gradient) {
      // d/ds [-log sig(s)] = sig(s) - 1
      Scalar coeff = sigmoid(pos_score) - Scalar(1);
      if (wrt == GradientWrt::perturbation) coeff *= phi;
      gi = gradient->slot(i);
      gradient->target.row(gi).noalias() += coeff * b.transpose();
      gradient->context.row(gradient->slot(j)).noalias() += coeff * a.transpose();
    }

    for (NodeId k : batch.negatives_of(p)) {
      c = model.context.row(k).transpose();
      if (noise) add_noise(c, noise->context, k, Scalar(1));
      const Scalar neg_score = c.dot(a_neg);
      total -= log_sigmoid(-neg_score);
      if (gradient) {
        // d/ds [-log sig(-s)] = sig(s)
        const Scalar coeff = sigmoid(neg_score);
        gradient->target.row(gi).noalias() += coeff * c.transpose();
        gradient->context.row(gradient->slot(k)).noalias() += coeff * a_neg.transpose();
      }
    }
  }
  return total;
}

template <typename Scalar>
Scalar batch_loss(const EmbeddingModel<Scalar>& model, const PairBatch& batch,
                  const PerturbationSet<Scalar>* perturbation = nullptr, bool use_scale = false) {
  return accumulate_loss(model, batch, perturbation, use_scale, static_cast<RowSet<Scalar>*>(nullptr));
}

/// Gradient of the batch loss over every batch node, with respect to `wrt`.
template <typename Scalar>
RowSet<Scalar> batch_gradient(const EmbeddingModel<Scalar>& model, const PairBatch& batch,
                              const PerturbationSet<Scalar>* perturbation = nullptr,
                              bool use_scale = false, GradientWrt wrt = GradientWrt::parameters,
                              Scalar* loss = nullptr) {
  auto grad = RowSet<Scalar>::for_batch(batch, model.nodes(), model.dim());
  const Scalar value = accumulate_loss(model, batch, perturbation, use_scale, &grad, wrt);
  if (loss) *loss = value;
  return grad;
}

}  // namespace advwalk
