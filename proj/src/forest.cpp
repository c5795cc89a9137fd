#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "chatmood/classify.hpp"
#include "chatmood/seeds.hpp"

namespace chatmood {

double DesignMatrix::value(Eigen::Index row, Eigen::Index col) const {
  if (col < dense.cols()) return dense(row, col);
  const auto& terms = sparse[static_cast<std::size_t>(row)];
  auto it = terms.find(static_cast<int>(col - dense.cols()));
  return it == terms.end() ? 0.0 : it->second;
}

LabelClass resolve_argmax(const std::vector<LabelClass>& classes, const Eigen::VectorXd& scores) {
  Eigen::Index best = 0;
  bool tie = false;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(best)) {
      best = i;
      tie = false;
    } else if (scores(i) == scores(best)) {
      tie = true;
    }
  }
  return tie ? LabelClass::neutral : classes[static_cast<std::size_t>(best)];
}

LabelClass DecisionTree::predict(const Eigen::VectorXd& dense,
                                 const std::map<int, double>& sparse) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    double v;
    if (n.feature < dense.size()) {
      v = dense(n.feature);
    } else {
      auto it = sparse.find(n.feature - static_cast<int>(dense.size()));
      v = it == sparse.end() ? 0.0 : it->second;
    }
    node = v <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].label;
}

LabelClass ForestModel::predict(const Eigen::VectorXd& dense,
                                const std::map<int, double>& sparse) const {
  Eigen::VectorXd votes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kAllClasses.size()));
  for (const DecisionTree& tree : trees)
    votes(static_cast<Eigen::Index>(class_index(tree.predict(dense, sparse)))) += 1.0;
  std::vector<LabelClass> all(kAllClasses.begin(), kAllClasses.end());
  return resolve_argmax(all, votes);
}

namespace {

std::array<int, 3> class_counts(const std::vector<LabelClass>& y, const std::vector<int>& idx) {
  std::array<int, 3> counts{};
  for (int i : idx) ++counts[class_index(y[static_cast<std::size_t>(i)])];
  return counts;
}

double gini(const std::array<int, 3>& counts, int n) {
  double g = 1.0;
  for (int c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    g -= p * p;
  }
  return g;
}

LabelClass counts_label(const std::array<int, 3>& counts) {
  Eigen::VectorXd scores(3);
  for (int c = 0; c < 3; ++c) scores(c) = counts[static_cast<std::size_t>(c)];
  std::vector<LabelClass> all(kAllClasses.begin(), kAllClasses.end());
  return resolve_argmax(all, scores);
}

// First k entries of a Fisher-Yates shuffle of [0, n); sorted for a stable
// evaluation order.
std::vector<int> sample_features(int n, int k, std::mt19937_64& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

struct TreeBuilder {
  const DesignMatrix& x;
  const std::vector<LabelClass>& y;
  const ForestParams& params;
  std::mt19937_64& rng;
  int n_candidates;
  DecisionTree tree;

  int build(std::vector<int> idx, int depth) {
    const int n = static_cast<int>(idx.size());
    const std::array<int, 3> counts = class_counts(y, idx);
    const bool pure = std::count(counts.begin(), counts.end(), 0) == 2;
    if (pure || depth >= params.max_depth || n < 2 * params.min_leaf)
      return make_leaf(counts);

    const std::vector<int> candidates =
        sample_features(static_cast<int>(x.cols()), n_candidates, rng);
    int best_feature = -1;
    double best_threshold = 0.0, best_score = gini(counts, n);
    std::vector<std::pair<double, int>> values(static_cast<std::size_t>(n));
    for (int f : candidates) {
      for (int i = 0; i < n; ++i) {
        const int row = idx[static_cast<std::size_t>(i)];
        values[static_cast<std::size_t>(i)] = {x.value(row, f), row};
      }
      std::sort(values.begin(), values.end());
      std::array<int, 3> left{};
      int left_n = 0;
      for (int i = 0; i + 1 < n; ++i) {
        ++left[class_index(y[static_cast<std::size_t>(values[static_cast<std::size_t>(i)].second)])];
        ++left_n;
        if (values[static_cast<std::size_t>(i)].first ==
            values[static_cast<std::size_t>(i + 1)].first)
          continue;  // identical values cannot be separated
        const int right_n = n - left_n;
        if (left_n < params.min_leaf || right_n < params.min_leaf) continue;
        std::array<int, 3> right{};
        for (int c = 0; c < 3; ++c)
          right[static_cast<std::size_t>(c)] =
              counts[static_cast<std::size_t>(c)] - left[static_cast<std::size_t>(c)];
        const double score = (static_cast<double>(left_n) * gini(left, left_n) +
                              static_cast<double>(right_n) * gini(right, right_n)) /
                             static_cast<double>(n);
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = (values[static_cast<std::size_t>(i)].first +
                            values[static_cast<std::size_t>(i + 1)].first) /
                           2.0;
        }
      }
    }
    if (best_feature < 0) return make_leaf(counts);

    std::vector<int> left_idx, right_idx;
    for (int row : idx) {
      (x.value(row, best_feature) <= best_threshold ? left_idx : right_idx).push_back(row);
    }
    const int node = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({best_feature, best_threshold, -1, -1, LabelClass::neutral});
    const int left = build(std::move(left_idx), depth + 1);
    const int right = build(std::move(right_idx), depth + 1);
    tree.nodes[static_cast<std::size_t>(node)].left = left;
    tree.nodes[static_cast<std::size_t>(node)].right = right;
    return node;
  }

  int make_leaf(const std::array<int, 3>& counts) {
    const int node = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({-1, 0.0, -1, -1, counts_label(counts)});
    return node;
  }
};

}  // namespace

ForestModel train_forest(const DesignMatrix& x, const std::vector<LabelClass>& y,
                         const ForestParams& params, std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  if (n == 0) throw TrainingError("train_forest: empty training set");
  if (static_cast<std::size_t>(n) != y.size())
    throw TrainingError("train_forest: label count mismatch");

  ForestModel model;
  for (LabelClass c : kAllClasses)
    if (std::count(y.begin(), y.end(), c) > 0) model.classes.push_back(c);

  const int n_features = static_cast<int>(x.cols());
  const int n_candidates = std::max(
      1, std::min(n_features, static_cast<int>(std::ceil(params.feature_subsample_fraction *
                                                         static_cast<double>(n_features)))));
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<int> bootstrap(static_cast<std::size_t>(n));
    for (int& i : bootstrap) i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    TreeBuilder builder{x, y, params, rng, n_candidates, {}};
    builder.build(std::move(bootstrap), 0);
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

}  // namespace chatmood
