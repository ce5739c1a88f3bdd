#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "advwalk/random.hpp"

namespace advwalk {

/// Walker/Vose alias table: O(n) construction, O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;

  /// Throws DataError if any weight is negative or non-finite, or if all weights are zero.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  bool empty() const noexcept { return prob_.empty(); }

  std::size_t sample(Rng& rng) const {
    const std::size_t slot = static_cast<std::size_t>(rng() % prob_.size());
    return uniform01(rng) < prob_[slot] ? slot : alias_[slot];
  }

  /// Exact probability the table assigns to `index`, reconstructed from the slots.
  double probability(std::size_t index) const;

  std::span<const double> prob() const noexcept { return prob_; }
  std::span<const std::uint32_t> alias() const noexcept { return alias_; }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace advwalk
