#include <algorithm>
#include <cmath>
#include <numbers>

#include "chatmood/classify.hpp"

namespace chatmood {

Eigen::VectorXd NbModel::log_posterior(const Eigen::VectorXd& dense) const {
  Eigen::VectorXd out = log_prior;
  for (Eigen::Index c = 0; c < mean.rows(); ++c) {
    for (Eigen::Index j = 0; j < mean.cols(); ++j) {
      const double var = variance(c, j);
      const double diff = dense(j) - mean(c, j);
      out(c) += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
    }
  }
  return out;
}

LabelClass NbModel::predict(const Eigen::VectorXd& dense) const {
  return resolve_argmax(classes, log_posterior(dense));
}

NbModel train_nb(const Eigen::MatrixXd& x, const std::vector<LabelClass>& y,
                 const NbParams& params) {
  const Eigen::Index n = x.rows();
  if (n == 0) throw TrainingError("train_nb: empty training set");
  if (static_cast<std::size_t>(n) != y.size()) throw TrainingError("train_nb: label count mismatch");

  NbModel model;
  for (LabelClass c : kAllClasses)
    if (std::count(y.begin(), y.end(), c) > 0) model.classes.push_back(c);

  const Eigen::Index d = x.cols();
  const auto n_classes = static_cast<Eigen::Index>(model.classes.size());
  model.log_prior.resize(n_classes);
  model.mean = Eigen::MatrixXd::Zero(n_classes, d);
  model.variance = Eigen::MatrixXd::Zero(n_classes, d);

  // Smoothing scale: the largest per-feature variance over all samples.
  double max_var = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = x.col(j).mean();
    max_var = std::max(max_var,
                       (x.col(j).array() - mean).square().sum() / static_cast<double>(n));
  }
  const double epsilon = params.variance_smoothing * max_var;

  for (Eigen::Index c = 0; c < n_classes; ++c) {
    const LabelClass target = model.classes[static_cast<std::size_t>(c)];
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < n; ++i)
      if (y[static_cast<std::size_t>(i)] == target) members.push_back(i);
    const double nc = static_cast<double>(members.size());
    model.log_prior(c) = std::log(nc / static_cast<double>(n));
    for (Eigen::Index j = 0; j < d; ++j) {
      double sum = 0.0;
      for (Eigen::Index i : members) sum += x(i, j);
      const double mu = sum / nc;
      double ss = 0.0;
      for (Eigen::Index i : members) ss += (x(i, j) - mu) * (x(i, j) - mu);
      model.mean(c, j) = mu;
      double var = ss / nc + epsilon;
      if (var <= 0.0) var = 1e-12;  // degenerate: constant feature, zero smoothing
      model.variance(c, j) = var;
    }
  }
  return model;
}

}  // namespace chatmood
