#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "advwalk/graph.hpp"
#include "advwalk/model.hpp"

namespace advwalk::eval {

/// Labeled embedding rows. Class ids follow first appearance in the label file.
struct LabeledNodes {
  std::vector<Eigen::Index> rows;
  std::vector<int> labels;
  std::vector<std::string> classes;
  std::size_t skipped = 0;  // records whose node has no embedding row

  std::size_t size() const noexcept { return rows.size(); }
};

/// Resolves each record's node through `row_of`; unresolved records are counted in
/// `skipped`. A node listed twice keeps its first label.
LabeledNodes label_rows(const std::vector<LabelRecord>& records,
                        const std::function<std::optional<Eigen::Index>(const std::string&)>& row_of);

/// Positions into LabeledNodes.
struct ClassificationSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, round(ratio * members) nodes go to training, clamped to [1, members - 1] for
/// classes with at least two members. Throws std::invalid_argument unless 0 < ratio < 1 and
/// at least two classes exist.
ClassificationSplit stratified_split(const LabeledNodes& nodes, double ratio, std::uint64_t seed);

/// Accuracy of the one-vs-rest linear classifier on the held-out part of a stratified split.
double node_classification(const RowMatrix<double>& embeddings, const LabeledNodes& nodes,
                           double train_ratio, std::uint64_t seed);

}  // namespace advwalk::eval
