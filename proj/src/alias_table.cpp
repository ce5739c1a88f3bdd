#include "advwalk/alias_table.hpp"

#include <cmath>
#include <limits>

#include "advwalk/error.hpp"

namespace advwalk {

AliasTable::AliasTable(std::span<const double> weights) {
  if (weights.empty()) throw DataError("alias table: empty weight vector");
  if (weights.size() > std::numeric_limits<std::uint32_t>::max())
    throw DataError("alias table: too many outcomes");

  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw DataError("alias table: negative or non-finite weight");
    total += w;
  }
  if (total <= 0.0) throw DataError("alias table: all weights are zero");

  const std::size_t n = weights.size();
  prob_.assign(n, 0.0);
  alias_.resize(n);

  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    alias_[i] = static_cast<std::uint32_t>(i);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t l : large) prob_[l] = 1.0;
  for (std::uint32_t s : small) prob_[s] = 1.0;
}

double AliasTable::probability(std::size_t index) const {
  const double n = static_cast<double>(prob_.size());
  double p = prob_[index];
  for (std::size_t slot = 0; slot < prob_.size(); ++slot)
    if (alias_[slot] == index && slot != index) p += 1.0 - prob_[slot];
  return p / n;
}

}  // namespace advwalk
