#include "advwalk/eval/attack.hpp"

#include <random>

#include "advwalk/loss.hpp"
#include "advwalk/perturbation.hpp"

namespace advwalk::eval {
namespace {

constexpr std::uint64_t kCorpusStream = 0x4154434B;
constexpr std::uint64_t kRandomStream = 0x524E44;

}  // namespace

std::string_view to_string(AttackMode mode) {
  return mode == AttackMode::adversarial ? "adversarial" : "random";
}

RowMatrix<double> adversarial_directions(const EmbeddingModel<double>& model, const Graph& graph,
                                         const WalkConfig& walk) {
  const AliasTable noise = negative_distribution(graph);
  const PairBatch corpus = epoch_corpus(graph, walk, noise, 0);
  std::vector<NodeId> all(static_cast<std::size_t>(model.nodes()));
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<NodeId>(v);
  RowSet<double> grad(std::move(all), model.nodes(), model.dim());
  accumulate_loss(model, corpus, static_cast<const PerturbationSet<double>*>(nullptr), false, &grad);
  detail::normalize_rows(grad.target, 1.0);
  return std::move(grad.target);
}

RowMatrix<double> random_directions(Eigen::Index nodes, Eigen::Index dim, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {kRandomStream}));
  std::normal_distribution<double> normal;
  RowMatrix<double> out(nodes, dim);
  for (Eigen::Index i = 0; i < nodes; ++i) {
    double norm = 0.0;
    while (norm < kZeroGradientNorm) {
      for (Eigen::Index k = 0; k < dim; ++k) out(i, k) = normal(rng);
      norm = out.row(i).norm();
    }
    out.row(i) /= norm;
  }
  return out;
}

std::vector<AttackPoint> attack(const EmbeddingModel<double>& model, const Graph& graph,
                                const LabeledNodes& nodes, std::span<const double> eps_grid,
                                AttackMode mode, double train_ratio, std::uint64_t seed,
                                const WalkConfig& walk) {
  RowMatrix<double> directions;
  if (mode == AttackMode::adversarial) {
    WalkConfig corpus = walk;
    corpus.seed = derive_seed(seed, {kCorpusStream});
    directions = adversarial_directions(model, graph, corpus);
  } else {
    directions = random_directions(model.nodes(), model.dim(), seed);
  }

  std::vector<AttackPoint> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const RowMatrix<double> perturbed = model.target + eps * directions;
    out.push_back({eps, node_classification(perturbed, nodes, train_ratio, seed)});
  }
  return out;
}

}  // namespace advwalk::eval
