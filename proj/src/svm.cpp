#include <algorithm>
#include <numeric>
#include <random>

#include "chatmood/classify.hpp"
#include "chatmood/seeds.hpp"

namespace chatmood {

Eigen::VectorXd SvmModel::margins(const Eigen::VectorXd& dense,
                                  const std::map<int, double>& sparse) const {
  Eigen::VectorXd out = bias;
  const Eigen::Index d = dense.size();
  for (Eigen::Index c = 0; c < weights.rows(); ++c) {
    out(c) += weights.row(c).head(d).dot(dense);
    for (const auto& [index, value] : sparse) out(c) += weights(c, d + index) * value;
  }
  return out;
}

LabelClass SvmModel::predict(const Eigen::VectorXd& dense,
                             const std::map<int, double>& sparse) const {
  return resolve_argmax(classes, margins(dense, sparse));
}

SvmModel train_svm(const DesignMatrix& x, const std::vector<LabelClass>& y,
                   const SvmParams& params, std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  if (n == 0) throw TrainingError("train_svm: empty training set");
  if (static_cast<std::size_t>(n) != y.size()) throw TrainingError("train_svm: label count mismatch");

  SvmModel model;
  for (LabelClass c : kAllClasses)
    if (std::count(y.begin(), y.end(), c) > 0) model.classes.push_back(c);
  if (model.classes.size() < 2)
    throw TrainingError("train_svm: need at least 2 classes, got " +
                        std::to_string(model.classes.size()));

  const Eigen::Index d = x.dense.cols();
  const Eigen::Index f = x.cols();
  model.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.classes.size()), f);
  model.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.classes.size()));

  for (std::size_t ci = 0; ci < model.classes.size(); ++ci) {
    const LabelClass target = model.classes[ci];
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(class_index(target))));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(f);
    double b = 0.0;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      const double eta = params.learning_rate / (1.0 + static_cast<double>(epoch));
      // Fisher-Yates with explicit draws: reproducible across standard
      // libraries, unlike std::shuffle.
      for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
      }
      for (int i : order) {
        const double label = y[static_cast<std::size_t>(i)] == target ? 1.0 : -1.0;
        double margin = b + w.head(d).dot(x.dense.row(i));
        for (const auto& [index, value] : x.sparse[static_cast<std::size_t>(i)])
          margin += w(d + index) * value;
        margin *= label;

        w *= std::max(0.0, 1.0 - eta * params.l2_lambda);
        if (margin < 1.0) {
          w.head(d) += eta * label * x.dense.row(i).transpose();
          for (const auto& [index, value] : x.sparse[static_cast<std::size_t>(i)])
            w(d + index) += eta * label * value;
          b += eta * label;
        }
      }
    }
    model.weights.row(static_cast<Eigen::Index>(ci)) = w;
    model.bias(static_cast<Eigen::Index>(ci)) = b;
  }
  return model;
}

}  // namespace chatmood
