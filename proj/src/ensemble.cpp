#include <algorithm>
#include <set>

#include "chatmood/classify.hpp"
#include "chatmood/numeric.hpp"
#include "chatmood/seeds.hpp"

namespace chatmood {

void Hyperparameters::validate() const {
  if (forest.n_trees < 1) throw ValueError("hyperparameters: n_trees must be >= 1");
  if (forest.max_depth < 1) throw ValueError("hyperparameters: max_depth must be >= 1");
  if (forest.min_leaf < 1) throw ValueError("hyperparameters: min_leaf must be >= 1");
  if (!(forest.feature_subsample_fraction > 0.0) || forest.feature_subsample_fraction > 1.0)
    throw ValueError("hyperparameters: feature_subsample_fraction must be in (0, 1]");
  if (!(svm.l2_lambda > 0.0)) throw ValueError("hyperparameters: l2_lambda must be > 0");
  if (svm.epochs < 1) throw ValueError("hyperparameters: epochs must be >= 1");
  if (!(svm.learning_rate > 0.0)) throw ValueError("hyperparameters: learning_rate must be > 0");
  if (nb.variance_smoothing < 0.0)
    throw ValueError("hyperparameters: variance_smoothing must be >= 0");
  if (features.ngram_max != 1 && features.ngram_max != 2)
    throw ValueError("hyperparameters: ngram_max must be 1 or 2");
  if (!(features.prune_threshold > 0.0) || features.prune_threshold > 1.0)
    throw ValueError("hyperparameters: prune_threshold must be in (0, 1]");
}

Dataset build_dataset(const SentenceStore& store,
                      const std::map<std::string, LabelClass>& labels,
                      const Resources& resources) {
  std::set<std::string> known;
  Dataset data;
  for (const PreparedMessage& message : store.messages) {
    for (const Sentence& sentence : message.sentences) {
      known.insert(sentence.id());
      auto it = labels.find(sentence.id());
      if (it == labels.end()) continue;
      DataPoint point;
      point.id = sentence.id();
      point.label = it->second;
      point.dense = extract_dense(sentence, resources, message);
      for (const WordToken& w : tokenize_sentence(sentence, resources).words)
        point.words.push_back(w.corrected);
      data.push_back(std::move(point));
    }
  }
  for (const auto& [id, label] : labels)
    if (!known.count(id)) throw ValueError("label references unknown sentence \"" + id + "\"");
  return data;
}

LabelClass majority_vote(const std::array<LabelClass, 3>& votes) {
  for (LabelClass c : kAllClasses) {
    if (std::count(votes.begin(), votes.end(), c) >= 2) return c;
  }
  return LabelClass::neutral;
}

FeatureVector EnsembleModel::featurize(const DataPoint& point) const {
  FeatureVector fv;
  fv.sentence_id = point.id;
  fv.dense = point.dense;
  fv.sparse = transform_terms(point.words, schema);
  return fv;
}

Prediction EnsembleModel::predict(const FeatureVector& features) const {
  const Eigen::Index d = static_cast<Eigen::Index>(schema.metric_names.size());
  Eigen::VectorXd raw(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    auto it = features.dense.find(schema.metric_names[static_cast<std::size_t>(j)]);
    if (it == features.dense.end())
      throw SchemaError("predict: missing metric \"" +
                        schema.metric_names[static_cast<std::size_t>(j)] + "\"");
    raw(j) = it->second;
  }
  const Eigen::VectorXd standardized =
      (raw - scaler.mean).array() / scaler.stddev.array();

  Prediction p;
  p.votes[0] = forest.predict(raw, features.sparse);
  p.votes[1] = svm.predict(standardized, features.sparse);
  p.votes[2] = nb.predict(standardized);
  p.label = majority_vote(p.votes);
  return p;
}

EnsembleModel train_ensemble(const Dataset& data, const Hyperparameters& hp, std::uint64_t seed) {
  hp.validate();
  if (data.empty()) throw TrainingError("train_ensemble: empty training set");

  std::vector<FeatureVector> vectors;
  std::vector<LabelClass> y;
  std::vector<std::vector<std::string>> documents;
  vectors.reserve(data.size());
  for (const DataPoint& point : data) {
    FeatureVector fv;
    fv.sentence_id = point.id;
    fv.dense = point.dense;
    vectors.push_back(std::move(fv));
    y.push_back(point.label);
    documents.push_back(point.words);
  }

  std::vector<std::string> retained = dense_metric_names();
  if (data.size() >= 2) {
    const CorrelationMatrix corr = correlation_matrix(vectors, retained);
    retained = prune_correlated(corr, hp.features.prune_threshold);
  }

  EnsembleModel model;
  model.hp = hp;
  model.seed = seed;
  model.schema = fit_vectorizer_terms(documents, hp.features);
  model.schema.metric_names = retained;
  for (LabelClass c : kAllClasses)
    if (std::count(y.begin(), y.end(), c) > 0) model.classes.push_back(c);

  DesignMatrix design;
  design.dense = dense_matrix(vectors, retained);
  design.sparse_dim = static_cast<int>(model.schema.vocabulary.size());
  design.sparse.reserve(data.size());
  for (const DataPoint& point : data)
    design.sparse.push_back(transform_terms(point.words, model.schema));

  auto [mean, stddev] = standardization_params(design.dense);
  model.scaler = {mean, stddev};

  model.forest = train_forest(design, y, hp.forest, derive_seed(seed, 1));

  DesignMatrix standardized = design;
  standardized.dense = standardize(design.dense, mean, stddev);
  model.svm = train_svm(standardized, y, hp.svm, derive_seed(seed, 2));
  model.nb = train_nb(standardized.dense, y, hp.nb);
  return model;
}

}  // namespace chatmood
