// The three base learners (random forest, linear SVM, Gaussian naive Bayes)
// and the hard-voting ensemble over them.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chatmood/features.hpp"
#include "chatmood/label_class.hpp"

namespace chatmood {

struct ForestParams {
  int n_trees = 50;
  int max_depth = 8;
  int min_leaf = 1;
  double feature_subsample_fraction = 0.7;

  bool operator==(const ForestParams&) const = default;
};

struct SvmParams {
  double l2_lambda = 1e-4;
  int epochs = 20;
  double learning_rate = 0.1;

  bool operator==(const SvmParams&) const = default;
};

struct NbParams {
  double variance_smoothing = 1e-9;

  bool operator==(const NbParams&) const = default;
};

struct Hyperparameters {
  ForestParams forest;
  SvmParams svm;
  NbParams nb;
  FeatureOptions features;

  /// Throws ValueError on an out-of-range field.
  void validate() const;

  bool operator==(const Hyperparameters&) const = default;
};

/// One labeled training sentence with its precomputed dense metrics and
/// feature-facing word tokens (fold-independent; vectorization is not).
struct DataPoint {
  std::string id;
  LabelClass label = LabelClass::neutral;
  std::map<std::string, double> dense;
  std::vector<std::string> words;
};

using Dataset = std::vector<DataPoint>;

/// Builds training points for the labeled sentences of a store, in store
/// order. A label for an unknown sentence id is an error.
Dataset build_dataset(const SentenceStore& store,
                      const std::map<std::string, LabelClass>& labels,
                      const Resources& resources);

/// Dense block plus sparse term rows; column indices [0, dense.cols()) are
/// dense metrics, [dense.cols(), dense.cols() + sparse_dim) are terms.
struct DesignMatrix {
  Eigen::MatrixXd dense;
  std::vector<std::map<int, double>> sparse;
  int sparse_dim = 0;

  Eigen::Index rows() const { return dense.rows(); }
  Eigen::Index cols() const { return dense.cols() + sparse_dim; }
  double value(Eigen::Index row, Eigen::Index col) const;
};

/// Resolves an argmax over per-class scores aligned with `classes`: the
/// unique maximum wins; any exact tie falls back to neutral.
LabelClass resolve_argmax(const std::vector<LabelClass>& classes,
                          const Eigen::VectorXd& scores);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  LabelClass label = LabelClass::neutral;  // leaf payload

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  LabelClass predict(const Eigen::VectorXd& dense, const std::map<int, double>& sparse) const;

  bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<LabelClass> classes;  // classes present at training

  LabelClass predict(const Eigen::VectorXd& dense, const std::map<int, double>& sparse) const;

  bool operator==(const ForestModel&) const = default;
};

/// CART random forest: Gini splits, bootstrap per tree,
/// ceil(fraction * n_features) candidate features per split.
ForestModel train_forest(const DesignMatrix& x, const std::vector<LabelClass>& y,
                         const ForestParams& params, std::uint64_t seed);

struct SvmModel {
  Eigen::MatrixXd weights;          // one row per class, over all columns
  Eigen::VectorXd bias;             // per class
  std::vector<LabelClass> classes;  // row order

  Eigen::VectorXd margins(const Eigen::VectorXd& dense, const std::map<int, double>& sparse) const;
  LabelClass predict(const Eigen::VectorXd& dense, const std::map<int, double>& sparse) const;
};

/// One-vs-rest linear SVMs via stochastic subgradient descent on
/// L2-regularized hinge loss, step size learning_rate / (1 + epoch).
/// Expects standardized dense columns and L2-normalized sparse rows.
SvmModel train_svm(const DesignMatrix& x, const std::vector<LabelClass>& y,
                   const SvmParams& params, std::uint64_t seed);

struct NbModel {
  Eigen::VectorXd log_prior;        // per class
  Eigen::MatrixXd mean;             // class x dense metric
  Eigen::MatrixXd variance;         // smoothed, strictly positive
  std::vector<LabelClass> classes;  // row order

  Eigen::VectorXd log_posterior(const Eigen::VectorXd& dense) const;
  LabelClass predict(const Eigen::VectorXd& dense) const;
};

/// Gaussian naive Bayes over the dense metrics only; per-class variance is
/// smoothed by variance_smoothing * max feature variance.
NbModel train_nb(const Eigen::MatrixXd& x, const std::vector<LabelClass>& y,
                 const NbParams& params);

/// Per-metric standardization parameters of the training fold.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // zero deviations replaced by 1
};

struct Prediction {
  LabelClass label = LabelClass::neutral;
  std::array<LabelClass, 3> votes{};  // forest, svm, nb
};

/// Hard vote: a class with at least 2 votes wins; three-way disagreement
/// falls back to neutral.
LabelClass majority_vote(const std::array<LabelClass, 3>& votes);

struct EnsembleModel {
  FeatureSchema schema;  // metric_names = retained dense metrics
  Scaler scaler;
  ForestModel forest;
  SvmModel svm;
  NbModel nb;
  Hyperparameters hp;
  std::uint64_t seed = 0;
  std::vector<LabelClass> classes;

  /// Sparse transform + dense passthrough for one data point.
  FeatureVector featurize(const DataPoint& point) const;

  /// Votes all three learners. A feature vector missing a schema metric is
  /// a schema mismatch naming that metric.
  Prediction predict(const FeatureVector& features) const;
  Prediction predict(const DataPoint& point) const { return predict(featurize(point)); }
};

/// Full training pipeline on one fold: correlation pruning, vectorizer fit,
/// standardization, then the three learners with seeds derived from `seed`.
EnsembleModel train_ensemble(const Dataset& data, const Hyperparameters& hp, std::uint64_t seed);

}  // namespace chatmood
