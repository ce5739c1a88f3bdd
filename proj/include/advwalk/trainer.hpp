#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advwalk/graph.hpp"
#include "advwalk/model.hpp"
#include "advwalk/walker.hpp"

namespace advwalk {

enum class Method {
  dwns,   // negative-sampling DeepWalk
  rand,   // regularizer with Gaussian perturbations
  advt,   // regularizer with fast-gradient perturbations and adaptive scale factors
  iadvt,  // regularizer with perturbations restricted to nearest-neighbor directions
};

std::string_view to_string(Method method);
/// Throws std::invalid_argument on unknown names.
Method parse_method(std::string_view name);

struct TrainConfig {
  Method method = Method::dwns;
  int epochs = 100;          // total, including pretraining
  int pretrain_epochs = 10;  // plain dwns epochs before the regularizer switches on
  int batch_size = 1024;
  double learning_rate = 0.001;
  double eps = 0.9;
  double lambda = 1.0;
  int neighbors = 5;  // iadvt direction count
  int dim = 128;
  int ppmi_order = 2;
  double ppmi_shift = 0.0;  // <= 0 selects 1/N
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double clean_loss = 0.0;  // summed over the epoch's batches, before each update
  double reg_loss = 0.0;    // perturbed loss, unweighted by lambda
  std::size_t zero_gradient_rows = 0;
};

struct TrainResult {
  EmbeddingModel<double> model;
  std::vector<EpochStats> history;
};

/// Invoked after every epoch; return false to stop early.
using EpochCallback = std::function<bool(const EpochStats&, const EmbeddingModel<double>&)>;

/// Mini-batch SGD on clean loss + lambda * perturbed loss. The first `pretrain_epochs`
/// epochs run plain dwns from a random init; iadvt freezes its neighbor directions at the
/// end of pretraining. Perturbations are constants within each step. Throws NumericalError
/// if a parameter becomes non-finite.
TrainResult train(const Graph& graph, const WalkConfig& walk, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Continues training from `initial`, starting at epoch index `first_epoch`. Epochs below
/// config.pretrain_epochs run as dwns. Yields the same result as an uninterrupted run when
/// `initial` is that run's state after `first_epoch` epochs.
TrainResult train_from(const Graph& graph, const WalkConfig& walk, const TrainConfig& config,
                       EmbeddingModel<double> initial, int first_epoch,
                       const EpochCallback& on_epoch = {});

/// Epoch-loss log: `epoch,clean_loss,reg_loss,zero_grad_count`.
void save_history(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace advwalk
