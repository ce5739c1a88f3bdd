#include "advwalk/eval/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace advwalk::eval {

double auc(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty())
    throw std::invalid_argument("auc: need at least one positive and one negative");
  std::vector<std::pair<double, bool>> all;
  all.reserve(positive_scores.size() + negative_scores.size());
  for (double s : positive_scores) all.emplace_back(s, true);
  for (double s : negative_scores) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t positives = 0;
    while (j < all.size() && all[j].first == all[i].first) positives += all[j++].second;
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    positive_rank_sum += average_rank * static_cast<double>(positives);
    i = j;
  }
  const auto np = static_cast<double>(positive_scores.size());
  const auto nn = static_cast<double>(negative_scores.size());
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw std::invalid_argument("accuracy: size mismatch or empty");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace advwalk::eval
