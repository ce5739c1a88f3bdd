#pragma once

#include <span>

namespace advwalk::eval {

/// Area under the ROC curve by the Mann-Whitney rank statistic; tied scores get their
/// average rank. Throws std::invalid_argument if either set is empty.
double auc(std::span<const double> positive_scores, std::span<const double> negative_scores);

/// Fraction of equal entries; spans must have the same nonzero length.
double accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace advwalk::eval
