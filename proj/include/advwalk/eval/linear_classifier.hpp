#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace advwalk::eval {

/// One-vs-rest L2-regularized logistic regression. Each class minimizes
///   0.5 (||w||^2 + b^2) + C * sum_i log(1 + exp(-y_i (w^T x_i + b)))
/// with damped Newton steps. The bias is penalized like an extra constant feature.
class LinearClassifier {
 public:
  struct Options {
    double c = 1.0;
    int max_iterations = 500;
    double tolerance = 1e-6;  // on ||grad|| relative to its value at w = 0
  };

  /// `labels` in [0, classes). Throws std::invalid_argument if fewer than two classes are
  /// present in `labels`.
  static LinearClassifier fit(const Eigen::MatrixXd& features, std::span<const int> labels,
                              int classes, const Options& options);
  static LinearClassifier fit(const Eigen::MatrixXd& features, std::span<const int> labels,
                              int classes) {
    return fit(features, labels, classes, Options{});
  }

  /// rows x classes decision values w_c^T x + b_c.
  Eigen::MatrixXd scores(const Eigen::MatrixXd& features) const;
  /// argmax of scores, lowest class on ties.
  std::vector<int> predict(const Eigen::MatrixXd& features) const;

  int classes() const noexcept { return static_cast<int>(weights_.cols()); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& bias() const noexcept { return bias_; }

 private:
  Eigen::MatrixXd weights_;  // dim x classes
  Eigen::VectorXd bias_;
};

}  // namespace advwalk::eval
