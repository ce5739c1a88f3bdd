#include "advwalk/eval/linear_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advwalk/loss.hpp"

namespace advwalk::eval {
namespace {

// Binary logistic regression on augmented features [x, 1], y in {-1, +1}.
Eigen::VectorXd fit_binary(const Eigen::MatrixXd& augmented, const Eigen::VectorXd& y,
                           const LinearClassifier::Options& options) {
  const Eigen::Index p = augmented.cols();
  const double c = options.c;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);

  auto objective = [&](const Eigen::VectorXd& t) {
    const Eigen::VectorXd margin = y.cwiseProduct(augmented * t);
    double loss = 0.5 * t.squaredNorm();
    for (Eigen::Index i = 0; i < margin.size(); ++i) loss -= c * log_sigmoid(margin[i]);
    return loss;
  };

  double grad0_norm = -1.0;
  double current = objective(theta);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd z = augmented * theta;
    Eigen::VectorXd residual(z.size());  // y * sigmoid(-y z)
    Eigen::VectorXd curvature(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double s = sigmoid(z[i]);
      residual[i] = y[i] * sigmoid(-y[i] * z[i]);
      curvature[i] = s * (1.0 - s);
    }
    const Eigen::VectorXd grad = theta - c * augmented.transpose() * residual;
    const double grad_norm = grad.norm();
    if (grad0_norm < 0.0) grad0_norm = std::max(grad_norm, 1e-300);
    if (grad_norm <= options.tolerance * grad0_norm) break;

    Eigen::MatrixXd hessian = c * augmented.transpose() * curvature.asDiagonal() * augmented;
    hessian.diagonal().array() += 1.0;
    const Eigen::VectorXd step = hessian.ldlt().solve(-grad);

    // Backtracking with the Armijo condition.
    const double slope = grad.dot(step);
    double t = 1.0;
    Eigen::VectorXd candidate = theta + step;
    double value = objective(candidate);
    while (value > current + 1e-4 * t * slope && t > 1e-10) {
      t *= 0.5;
      candidate = theta + t * step;
      value = objective(candidate);
    }
    if (!(value < current)) break;
    theta = std::move(candidate);
    current = value;
  }
  return theta;
}

}  // namespace

LinearClassifier LinearClassifier::fit(const Eigen::MatrixXd& features, std::span<const int> labels,
                                       int classes, const Options& options) {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw std::invalid_argument("LinearClassifier: feature/label count mismatch");
  if (classes < 2) throw std::invalid_argument("LinearClassifier: need at least two classes");
  std::vector<bool> present(static_cast<std::size_t>(classes), false);
  for (int label : labels) {
    if (label < 0 || label >= classes) throw std::invalid_argument("LinearClassifier: label out of range");
    present[static_cast<std::size_t>(label)] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2)
    throw std::invalid_argument("LinearClassifier: training set has a single class");

  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  Eigen::MatrixXd augmented(n, d + 1);
  augmented.leftCols(d) = features;
  augmented.col(d).setOnes();

  LinearClassifier model;
  model.weights_.resize(d, classes);
  model.bias_.resize(classes);
  // Binary problems need only one model; the other class gets the negated decision.
  const int fitted = classes == 2 ? 1 : classes;
  for (int k = 0; k < fitted; ++k) {
    const int positive = classes == 2 ? 1 : k;
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = labels[static_cast<std::size_t>(i)] == positive ? 1.0 : -1.0;
    const Eigen::VectorXd theta = fit_binary(augmented, y, options);
    model.weights_.col(positive) = theta.head(d);
    model.bias_[positive] = theta[d];
  }
  if (classes == 2) {
    model.weights_.col(0) = -model.weights_.col(1);
    model.bias_[0] = -model.bias_[1];
  }
  return model;
}

Eigen::MatrixXd LinearClassifier::scores(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd out = features * weights_;
  out.rowwise() += bias_.transpose();
  return out;
}

std::vector<int> LinearClassifier::predict(const Eigen::MatrixXd& features) const {
  const Eigen::MatrixXd s = scores(features);
  std::vector<int> out(static_cast<std::size_t>(s.rows()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    s.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace advwalk::eval
