#include "advwalk/walker.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace advwalk {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5348;
constexpr std::uint64_t kWalkStream = 0x57414C4B;
constexpr std::uint64_t kPairStream = 0x50414952;
constexpr int kMaxRedraws = 10;

}  // namespace

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw std::invalid_argument("walks_per_node must be >= 1");
  if (walk_length < 2) throw std::invalid_argument("walk_length must be >= 2");
  if (window < 1 || window >= walk_length)
    throw std::invalid_argument("window must satisfy 1 <= window < walk_length");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
}

std::vector<Walk> generate_walks(const Graph& graph, const WalkConfig& config, std::uint64_t seed) {
  config.validate();
  const auto n = static_cast<NodeId>(graph.node_count());
  std::vector<Walk> walks;
  walks.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(config.walks_per_node));

  std::vector<NodeId> starts(static_cast<std::size_t>(n));
  for (int pass = 0; pass < config.walks_per_node; ++pass) {
    std::iota(starts.begin(), starts.end(), 0);
    Rng shuffle_rng(derive_seed(seed, {kShuffleStream, static_cast<std::uint64_t>(pass)}));
    std::shuffle(starts.begin(), starts.end(), shuffle_rng);
    for (NodeId start : starts) {
      Rng rng(derive_seed(seed, {kWalkStream, static_cast<std::uint64_t>(pass),
                                 static_cast<std::uint64_t>(start)}));
      Walk walk;
      walk.reserve(static_cast<std::size_t>(config.walk_length));
      walk.push_back(start);
      while (walk.size() < static_cast<std::size_t>(config.walk_length)) {
        const NodeId current = walk.back();
        if (graph.out_degree(current) == 0) break;
        walk.push_back(graph.sample_neighbor(current, rng));
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

std::vector<NodePair> build_pairs(std::span<const Walk> walks, int window) {
  std::vector<NodePair> pairs;
  std::size_t expected = 0;
  for (const Walk& w : walks) expected += w.size() * 2 * static_cast<std::size_t>(window);
  pairs.reserve(expected);
  for (const Walk& walk : walks) {
    const auto len = static_cast<std::ptrdiff_t>(walk.size());
    for (std::ptrdiff_t i = 0; i < len; ++i) {
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + window);
      for (std::ptrdiff_t j = lo; j <= hi; ++j)
        if (j != i) pairs.push_back({walk[i], walk[j]});
    }
  }
  return pairs;
}

PairBatch PairBatch::slice(std::size_t begin, std::size_t end) const {
  PairBatch out;
  out.negatives_per_pair = negatives_per_pair;
  const auto k = static_cast<std::size_t>(negatives_per_pair);
  out.targets.assign(targets.begin() + begin, targets.begin() + end);
  out.contexts.assign(contexts.begin() + begin, contexts.begin() + end);
  out.negatives.assign(negatives.begin() + begin * k, negatives.begin() + end * k);
  out.scale.assign(scale.begin() + begin, scale.begin() + end);
  return out;
}

PairBatch attach_negatives(std::span<const NodePair> pairs, const AliasTable& noise, int negatives,
                           Rng& rng) {
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  PairBatch batch;
  batch.negatives_per_pair = negatives;
  batch.targets.reserve(pairs.size());
  batch.contexts.reserve(pairs.size());
  batch.negatives.reserve(pairs.size() * static_cast<std::size_t>(negatives));
  batch.scale.assign(pairs.size(), 1.0);
  for (const NodePair& p : pairs) {
    batch.targets.push_back(p.first);
    batch.contexts.push_back(p.second);
    for (int k = 0; k < negatives; ++k) {
      auto draw = static_cast<NodeId>(noise.sample(rng));
      for (int attempt = 0; draw == p.second && attempt < kMaxRedraws; ++attempt)
        draw = static_cast<NodeId>(noise.sample(rng));
      batch.negatives.push_back(draw);
    }
  }
  return batch;
}

PairBatch epoch_corpus(const Graph& graph, const WalkConfig& config, const AliasTable& noise,
                       int epoch) {
  const std::uint64_t epoch_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(epoch)});
  const auto walks = generate_walks(graph, config, epoch_seed);
  auto pairs = build_pairs(walks, config.window);
  Rng rng(derive_seed(epoch_seed, {kPairStream}));
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return attach_negatives(pairs, noise, config.negatives, rng);
}

void write_walks(std::ostream& out, const Graph& graph, std::span<const Walk> walks) {
  for (const Walk& walk : walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << graph.name(walk[i]);
    }
    out << '\n';
  }
}

}  // namespace advwalk
