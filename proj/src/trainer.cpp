#include "advwalk/trainer.hpp"

#include <fstream>
#include <optional>
#include <stdexcept>

#include "advwalk/error.hpp"
#include "advwalk/loss.hpp"
#include "advwalk/perturbation.hpp"
#include "advwalk/proximity.hpp"

namespace advwalk {
namespace {

constexpr std::uint64_t kInitStream = 0x494E4954;
constexpr std::uint64_t kPerturbStream = 0x50455254;

void sgd_step(EmbeddingModel<double>& model, const RowSet<double>& clean,
              const RowSet<double>* reg, double lambda, double lr, int epoch, std::size_t batch) {
  const auto& nodes = clean.nodes();
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    const NodeId v = nodes[s];
    const auto r = static_cast<Eigen::Index>(s);
    if (reg) {
      model.target.row(v).noalias() -= lr * (clean.target.row(r) + lambda * reg->target.row(r));
      model.context.row(v).noalias() -= lr * (clean.context.row(r) + lambda * reg->context.row(r));
    } else {
      model.target.row(v).noalias() -= lr * clean.target.row(r);
      model.context.row(v).noalias() -= lr * clean.context.row(r);
    }
    if (!model.target.row(v).allFinite() || !model.context.row(v).allFinite())
      throw NumericalError("non-finite embedding for node " + std::to_string(v), epoch, batch);
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::dwns: return "dwns";
    case Method::rand: return "rand";
    case Method::advt: return "advt";
    case Method::iadvt: return "iadvt";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "dwns") return Method::dwns;
  if (name == "rand") return Method::rand;
  if (name == "advt") return Method::advt;
  if (name == "iadvt") return Method::iadvt;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (pretrain_epochs < 0) throw std::invalid_argument("pretrain epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (ppmi_order < 1) throw std::invalid_argument("ppmi order must be >= 1");
  if (method == Method::iadvt) {
    if (neighbors < 1) throw std::invalid_argument("iadvt needs neighbors >= 1");
    if (pretrain_epochs < 1 && epochs > 0)
      throw std::invalid_argument("iadvt needs at least one pretraining epoch");
  }
}

TrainResult train(const Graph& graph, const WalkConfig& walk, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  Rng init_rng(derive_seed(config.seed, {kInitStream}));
  auto model = init_model<double>(static_cast<Eigen::Index>(graph.node_count()), config.dim, init_rng);
  return train_from(graph, walk, config, std::move(model), 0, on_epoch);
}

TrainResult train_from(const Graph& graph, const WalkConfig& walk, const TrainConfig& config,
                       EmbeddingModel<double> initial, int first_epoch,
                       const EpochCallback& on_epoch) {
  config.validate();
  walk.validate();
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (initial.nodes() != n || initial.context.rows() != n || initial.context.cols() != initial.dim())
    throw std::invalid_argument("train_from: model shape does not match graph");
  if (config.method == Method::iadvt && first_epoch > config.pretrain_epochs)
    throw std::invalid_argument("train_from: iadvt cannot resume after its directions were frozen");

  TrainResult result{std::move(initial), {}};
  EmbeddingModel<double>& model = result.model;
  const AliasTable noise = negative_distribution(graph);
  const bool regularized = config.method != Method::dwns && first_epoch < config.epochs &&
                           config.epochs > config.pretrain_epochs;
  std::optional<ScaleMatrix> scale;
  if (regularized) scale = ScaleMatrix::from_graph(graph, config.ppmi_order, config.ppmi_shift);
  std::optional<NeighborDirections<double>> target_dirs;
  std::optional<NeighborDirections<double>> context_dirs;

  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  for (int epoch = first_epoch; epoch < config.epochs; ++epoch) {
    const bool adversarial = config.method != Method::dwns && epoch >= config.pretrain_epochs;
    PairBatch corpus = epoch_corpus(graph, walk, noise, epoch);
    if (adversarial) scale->apply(corpus);
    if (adversarial && config.method == Method::iadvt && !target_dirs) {
      target_dirs = build_neighbor_directions(model.target, config.neighbors);
      context_dirs = build_neighbor_directions(model.context, config.neighbors);
    }
    Rng perturb_rng(derive_seed(config.seed, {kPerturbStream, static_cast<std::uint64_t>(epoch)}));

    EpochStats stats;
    stats.epoch = epoch;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < corpus.size(); begin += batch_size, ++batch_index) {
      const PairBatch batch = corpus.slice(begin, std::min(corpus.size(), begin + batch_size));
      double clean_loss = 0.0;
      RowSet<double> clean = batch_gradient(model, batch, static_cast<const PerturbationSet<double>*>(nullptr),
                                            false, GradientWrt::parameters, &clean_loss);
      stats.clean_loss += clean_loss;
      if (!adversarial) {
        sgd_step(model, clean, nullptr, 0.0, config.learning_rate, epoch, batch_index);
        continue;
      }

      std::optional<PerturbationSet<double>> perturbation;
      if (config.eps > 0.0) {
        switch (config.method) {
          case Method::rand:
            perturbation = random_perturbations(batch, n, model.dim(), config.eps, perturb_rng);
            break;
          case Method::advt:
            perturbation = perturbations_from_gradient(clean, config.eps);
            break;
          case Method::iadvt:
            perturbation = interpretable_perturbations(model, batch, *target_dirs, *context_dirs,
                                                       config.eps)
                               .perturbation;
            break;
          case Method::dwns: break;
        }
      }
      double reg_loss = 0.0;
      const RowSet<double> reg =
          batch_gradient(model, batch, perturbation ? &*perturbation : nullptr, true,
                         GradientWrt::parameters, &reg_loss);
      stats.reg_loss += reg_loss;
      if (perturbation) stats.zero_gradient_rows += perturbation->zero_gradient_rows;
      sgd_step(model, clean, config.lambda == 0.0 ? nullptr : &reg, config.lambda,
               config.learning_rate, epoch, batch_index);
    }
    result.history.push_back(stats);
    if (on_epoch && !on_epoch(stats, model)) break;
  }
  return result;
}

void save_history(const std::string& path, const std::vector<EpochStats>& history) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  out << "epoch,clean_loss,reg_loss,zero_grad_count\n";
  for (const auto& s : history)
    out << s.epoch << ',' << s.clean_loss << ',' << s.reg_loss << ',' << s.zero_gradient_rows << '\n';
}

}  // namespace advwalk
