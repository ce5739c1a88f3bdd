#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "advwalk/eval/node_classification.hpp"
#include "advwalk/graph.hpp"
#include "advwalk/model.hpp"
#include "advwalk/walker.hpp"

namespace advwalk::eval {

enum class AttackMode { adversarial, random };

std::string_view to_string(AttackMode mode);

struct AttackPoint {
  double eps = 0.0;
  double accuracy = 0.0;
};

/// Unit rows along the gradient of the full-corpus clean loss with respect to each node's
/// target embedding. The corpus is one epoch of walks drawn with `walk` (its seed included).
/// Rows of nodes with vanishing gradient are zero.
RowMatrix<double> adversarial_directions(const EmbeddingModel<double>& model, const Graph& graph,
                                         const WalkConfig& walk);

/// Unit Gaussian directions, one per row.
RowMatrix<double> random_directions(Eigen::Index nodes, Eigen::Index dim, std::uint64_t seed);

/// Perturbs every target embedding by eps along its attack direction, then reruns node
/// classification with the same split seed. eps = 0 reproduces the clean accuracy.
/// Adversarial directions use `walk`'s sampling parameters with a corpus seed derived from
/// `seed`.
std::vector<AttackPoint> attack(const EmbeddingModel<double>& model, const Graph& graph,
                                const LabeledNodes& nodes, std::span<const double> eps_grid,
                                AttackMode mode, double train_ratio, std::uint64_t seed,
                                const WalkConfig& walk = {});

}  // namespace advwalk::eval
