// Feature extraction: dense per-sentence metrics, sparse term vectors
// (count / tf-idf), and the Pearson correlation matrix with pruning.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "chatmood/lexicons.hpp"
#include "chatmood/preprocess.hpp"

namespace chatmood {

/// The canonical dense metric schema, in order.
inline constexpr std::array<const char*, 20> kDenseMetricNames = {
    "msg_char_len",    "sent_char_len",   "word_count",     "avg_word_len",
    "adjective_count", "punctuation_count", "emoticon_count", "emoji_mean",
    "emoji_min",       "emoji_max",       "lex_mean",       "lex_min",
    "lex_max",         "lex_pos_count",   "lex_neg_count",  "formality",
    "auto_correction_ratio", "exclamation_count", "question_count", "uppercase_ratio"};

std::vector<std::string> dense_metric_names();

/// One word token of a sentence with its feature-facing corrected copy.
struct WordToken {
  std::string surface;    // original spelling, outer punctuation stripped
  std::string lower;      // lowercased surface
  std::string corrected;  // spell-corrected lower (equals lower when disabled)
  bool was_corrected = false;
};

/// A sentence decomposed for metric computation.
struct TokenizedSentence {
  std::vector<WordToken> words;
  std::vector<std::string> emoticons;  // glyph occurrences in text order
  std::string masked;                  // clean text with emoticon spans blanked
};

TokenizedSentence tokenize_sentence(const Sentence& sentence, const Resources& resources);

/// All dense metrics for one sentence. Pure; absent resources yield neutral
/// defaults, degenerate sentences yield 0 counts and 0 ratios.
std::map<std::string, double> extract_dense(const Sentence& sentence, const Resources& resources,
                                            const PreparedMessage& context);

struct FeatureVector {
  std::string sentence_id;
  std::map<std::string, double> dense;  // metric name -> value
  std::map<int, double> sparse;         // term index -> weight

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureOptions {
  int ngram_max = 1;          // 1 = unigrams, 2 = unigrams + bigrams
  bool tfidf_enabled = true;  // false = raw counts, no normalization
  int vocab_cap = 1000;       // <= 0 means uncapped
  double prune_threshold = 0.9;

  bool operator==(const FeatureOptions&) const = default;
};

/// Fitted sparse vocabulary plus the active dense metric list.
struct FeatureSchema {
  std::vector<std::string> metric_names = dense_metric_names();
  std::map<std::string, int> vocabulary;  // term -> index, dense in [0, |V|)
  std::vector<double> idf;                // indexed by term index
  FeatureOptions options;

  bool operator==(const FeatureSchema&) const = default;
};

/// Expands word terms into the configured n-gram list (space-joined).
std::vector<std::string> expand_ngrams(const std::vector<std::string>& words, int ngram_max);

/// Builds vocabulary and idf from per-sentence word lists:
/// idf(t) = ln((1+N)/(1+df(t))) + 1. The cap keeps the highest-df terms,
/// ties broken lexicographically. Empty input is an error.
FeatureSchema fit_vectorizer_terms(const std::vector<std::vector<std::string>>& documents,
                                   const FeatureOptions& options);
FeatureSchema fit_vectorizer(const std::vector<Sentence>& sentences, const Resources& resources,
                             const FeatureOptions& options);

/// Sparse weights for one sentence: tf-idf L2-normalized, or raw counts in
/// count mode. Out-of-vocabulary terms are dropped.
std::map<int, double> transform_terms(const std::vector<std::string>& words,
                                      const FeatureSchema& schema);
std::map<int, double> transform(const Sentence& sentence, const FeatureSchema& schema,
                                const Resources& resources);

struct CorrelationMatrix {
  Eigen::MatrixXd r;                 // symmetric, diagonal 1
  std::vector<std::string> metrics;  // row/column names
  std::vector<bool> constant;        // zero-variance flag per metric
};

/// Pairwise Pearson r over the named dense metrics. Constant metrics get
/// r = 0 against all others and are flagged. Throws below 2 samples.
CorrelationMatrix correlation_matrix(const std::vector<FeatureVector>& vectors,
                                     const std::vector<std::string>& metrics);

/// Greedy pruning in schema order: a metric is dropped when it correlates
/// with an earlier retained metric above the threshold (|r| > threshold).
std::vector<std::string> prune_correlated(const CorrelationMatrix& matrix, double threshold);

/// n x |metrics| matrix of dense values in the given metric order. A vector
/// missing a metric is a schema mismatch.
Eigen::MatrixXd dense_matrix(const std::vector<FeatureVector>& vectors,
                             const std::vector<std::string>& metrics);

}  // namespace chatmood
