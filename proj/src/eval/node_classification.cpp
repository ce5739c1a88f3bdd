#include "advwalk/eval/node_classification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "advwalk/eval/linear_classifier.hpp"
#include "advwalk/eval/metrics.hpp"
#include "advwalk/random.hpp"

namespace advwalk::eval {

LabeledNodes label_rows(const std::vector<LabelRecord>& records,
                        const std::function<std::optional<Eigen::Index>(const std::string&)>& row_of) {
  LabeledNodes out;
  std::unordered_map<std::string, int> class_ids;
  std::unordered_set<Eigen::Index> seen;
  for (const auto& record : records) {
    const auto row = row_of(record.node);
    if (!row) {
      ++out.skipped;
      continue;
    }
    if (!seen.insert(*row).second) continue;
    auto [it, inserted] = class_ids.emplace(record.label, static_cast<int>(out.classes.size()));
    if (inserted) out.classes.push_back(record.label);
    out.rows.push_back(*row);
    out.labels.push_back(it->second);
  }
  return out;
}

ClassificationSplit stratified_split(const LabeledNodes& nodes, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("train ratio must be in (0, 1)");
  if (nodes.classes.size() < 2) throw std::invalid_argument("classification needs >= 2 classes");

  std::vector<std::vector<std::size_t>> members(nodes.classes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    members[static_cast<std::size_t>(nodes.labels[i])].push_back(i);

  Rng rng(derive_seed(seed, {0x4E43}));
  ClassificationSplit split;
  for (auto& group : members) {
    if (group.empty()) continue;
    std::shuffle(group.begin(), group.end(), rng);
    auto take = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(group.size())));
    take = std::max<std::size_t>(take, 1);
    if (group.size() >= 2) take = std::min(take, group.size() - 1);
    split.train.insert(split.train.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(take));
    split.test.insert(split.test.end(), group.begin() + static_cast<std::ptrdiff_t>(take), group.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

double node_classification(const RowMatrix<double>& embeddings, const LabeledNodes& nodes,
                           double train_ratio, std::uint64_t seed) {
  const ClassificationSplit split = stratified_split(nodes, train_ratio, seed);
  if (split.test.empty()) throw std::invalid_argument("classification split has no test nodes");

  auto gather = [&](const std::vector<std::size_t>& idx, Eigen::MatrixXd& x, std::vector<int>& y) {
    x.resize(static_cast<Eigen::Index>(idx.size()), embeddings.cols());
    y.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      x.row(static_cast<Eigen::Index>(k)) = embeddings.row(nodes.rows[idx[k]]);
      y[k] = nodes.labels[idx[k]];
    }
  };
  Eigen::MatrixXd train_x, test_x;
  std::vector<int> train_y, test_y;
  gather(split.train, train_x, train_y);
  gather(split.test, test_x, test_y);

  const auto classifier =
      LinearClassifier::fit(train_x, train_y, static_cast<int>(nodes.classes.size()));
  return accuracy(classifier.predict(test_x), test_y);
}

}  // namespace advwalk::eval
