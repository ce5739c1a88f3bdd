#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "advwalk/alias_table.hpp"
#include "advwalk/graph.hpp"
#include "advwalk/random.hpp"

namespace advwalk {

/// Sampling-phase parameters: walks per node, walk length, window size, negatives per pair.
struct WalkConfig {
  int walks_per_node = 1;
  int walk_length = 40;
  int window = 5;
  int negatives = 5;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless walks_per_node >= 1, walk_length >= 2,
  /// 1 <= window < walk_length and negatives >= 1.
  void validate() const;
};

using Walk = std::vector<NodeId>;

/// walks_per_node passes over all nodes, each pass in a shuffled start order. Every walk
/// draws from its own stream derived from (seed, pass, start node), so the corpus depends
/// only on `seed`.
std::vector<Walk> generate_walks(const Graph& graph, const WalkConfig& config, std::uint64_t seed);

/// All (s_i, s_j) with 0 < |i - j| <= window, in walk order. Pairs with s_i == s_j are kept.
std::vector<NodePair> build_pairs(std::span<const Walk> walks, int window);

/// Positive pairs with K negatives each and a per-pair scale factor (1 unless filled in).
struct PairBatch {
  std::vector<NodeId> targets;
  std::vector<NodeId> contexts;
  std::vector<NodeId> negatives;  // row-major, negatives_per_pair per pair
  std::vector<double> scale;
  int negatives_per_pair = 0;

  std::size_t size() const noexcept { return targets.size(); }
  std::span<const NodeId> negatives_of(std::size_t pair) const noexcept {
    return {negatives.data() + pair * static_cast<std::size_t>(negatives_per_pair),
            static_cast<std::size_t>(negatives_per_pair)};
  }
  PairBatch slice(std::size_t begin, std::size_t end) const;
};

/// Draws K negatives per pair from `noise`. A draw equal to the pair's context is redrawn,
/// up to 10 times, after which it is kept.
PairBatch attach_negatives(std::span<const NodePair> pairs, const AliasTable& noise, int negatives,
                           Rng& rng);

/// One epoch of training data: walks from the epoch's stream, pairs shuffled, negatives
/// attached. Deterministic in (config.seed, epoch).
PairBatch epoch_corpus(const Graph& graph, const WalkConfig& config, const AliasTable& noise,
                       int epoch);

/// One walk per line, node names separated by spaces.
void write_walks(std::ostream& out, const Graph& graph, std::span<const Walk> walks);

}  // namespace advwalk
