// Shared synthetic datasets for learner, evolution, and acceptance tests.
#include "fixtures.hpp"

#include <random>

namespace chatmood::testfix {

DataPoint dense_point(const std::string& id, LabelClass label,
                      const std::map<std::string, double>& overrides,
                      std::vector<std::string> words) {
  DataPoint p;
  p.id = id;
  p.label = label;
  for (const auto& name : dense_metric_names()) p.dense[name] = 0.0;
  for (const auto& [name, value] : overrides) p.dense.at(name) = value;
  p.words = std::move(words);
  return p;
}

Dataset separable_dataset(int per_class, std::uint64_t seed) {
  Dataset data;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  const struct {
    LabelClass label;
    double lex;
    const char* word;
  } classes[] = {{LabelClass::positive, 0.8, "good"},
                 {LabelClass::neutral, 0.0, "fact"},
                 {LabelClass::negative, -0.8, "bad"}};
  for (const auto& c : classes) {
    for (int i = 0; i < per_class; ++i) {
      const double lex = c.lex + jitter(rng);
      data.push_back(dense_point(std::string(c.word) + std::to_string(i), c.label,
                                 {{"lex_mean", lex}, {"lex_max", lex}, {"word_count", 3.0}},
                                 {c.word, "words", "here"}));
    }
  }
  return data;
}

Dataset random_label_dataset(int n, std::uint64_t seed) {
  Dataset data;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const std::vector<std::string> pool = {"alpha", "beta", "gamma", "delta", "epsilon",
                                         "zeta",  "eta",  "theta", "iota",  "kappa"};
  for (int i = 0; i < n; ++i) {
    std::map<std::string, double> overrides;
    for (const char* metric : {"lex_mean", "lex_max", "lex_min", "word_count",
                               "punctuation_count", "uppercase_ratio"})
      overrides[metric] = value(rng);
    std::vector<std::string> words;
    for (int w = 0; w < 4; ++w) words.push_back(pool[rng() % pool.size()]);
    data.push_back(dense_point("r" + std::to_string(i),
                               kAllClasses[rng() % kAllClasses.size()], overrides,
                               std::move(words)));
  }
  return data;
}

}  // namespace chatmood::testfix
