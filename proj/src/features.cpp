#include "chatmood/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "chatmood/numeric.hpp"

namespace chatmood {

std::vector<std::string> dense_metric_names() {
  return {kDenseMetricNames.begin(), kDenseMetricNames.end()};
}

namespace {

bool is_word_char(char c) {
  const auto uc = static_cast<unsigned char>(c);
  return std::isalnum(uc) != 0 || uc >= 0x80;  // multi-byte letters count
}

bool is_alpha_word(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    const auto uc = static_cast<unsigned char>(c);
    return std::isalpha(uc) != 0 || uc >= 0x80;
  });
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

TokenizedSentence tokenize_sentence(const Sentence& sentence, const Resources& resources) {
  TokenizedSentence out;
  const std::string& text = sentence.clean;
  out.masked = text;

  const std::vector<std::string> glyphs = resources.emoticons.glyphs_longest_first();
  for (std::size_t i = 0; i < text.size();) {
    bool matched = false;
    for (const std::string& g : glyphs) {
      if (!g.empty() && text.compare(i, g.size(), g) == 0) {
        out.emoticons.push_back(g);
        std::fill(out.masked.begin() + static_cast<long>(i),
                  out.masked.begin() + static_cast<long>(i + g.size()), ' ');
        i += g.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }

  const bool correct = !resources.dictionary.empty();
  std::size_t i = 0;
  while (i < out.masked.size()) {
    while (i < out.masked.size() && std::isspace(static_cast<unsigned char>(out.masked[i])) != 0) ++i;
    std::size_t j = i;
    while (j < out.masked.size() && std::isspace(static_cast<unsigned char>(out.masked[j])) == 0) ++j;
    if (j > i) {
      std::size_t b = i, e = j;
      while (b < e && !is_word_char(out.masked[b])) ++b;
      while (e > b && !is_word_char(out.masked[e - 1])) --e;
      if (e > b) {
        WordToken tok;
        tok.surface = out.masked.substr(b, e - b);
        tok.lower = to_lower(tok.surface);
        if (correct && is_alpha_word(tok.lower)) {
          SpellResult r = correct_spelling(tok.lower, resources.dictionary);
          tok.corrected = r.token;
          tok.was_corrected = r.was_corrected;
        } else {
          tok.corrected = tok.lower;
        }
        out.words.push_back(std::move(tok));
      }
    }
    i = j;
  }
  return out;
}

std::map<std::string, double> extract_dense(const Sentence& sentence, const Resources& resources,
                                            const PreparedMessage& context) {
  const TokenizedSentence tok = tokenize_sentence(sentence, resources);
  const double wc = static_cast<double>(tok.words.size());

  std::map<std::string, double> m;
  m["msg_char_len"] = static_cast<double>(context.clean_text.size());
  m["sent_char_len"] = static_cast<double>(sentence.clean.size());
  m["word_count"] = wc;

  double len_sum = 0, adjectives = 0, corrected = 0, formal = 0, informal = 0;
  std::vector<double> lex_scores;
  double lex_pos = 0, lex_neg = 0;
  for (const WordToken& w : tok.words) {
    len_sum += static_cast<double>(w.surface.size());
    if (resources.adjectives && resources.adjectives->is_adjective(w.corrected)) ++adjectives;
    if (w.was_corrected) ++corrected;
    if (resources.formality.is_formal(w.surface)) ++formal;
    if (resources.formality.is_informal(w.surface)) ++informal;
    if (auto entry = resources.polarity.lookup(w.corrected)) {
      lex_scores.push_back(entry->score);
      if (entry->klass == LabelClass::positive) ++lex_pos;
      if (entry->klass == LabelClass::negative) ++lex_neg;
    }
  }
  m["avg_word_len"] = wc > 0 ? len_sum / wc : 0.0;
  m["adjective_count"] = adjectives;

  double punct = 0, bangs = 0, questions = 0, upper = 0, letters = 0;
  for (char c : tok.masked) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::ispunct(uc) != 0) ++punct;
    if (c == '!') ++bangs;
    if (c == '?') ++questions;
    if (std::isalpha(uc) != 0) {
      ++letters;
      if (std::isupper(uc) != 0) ++upper;
    }
  }
  m["punctuation_count"] = punct;
  m["exclamation_count"] = bangs;
  m["question_count"] = questions;
  m["uppercase_ratio"] = letters > 0 ? upper / letters : 0.0;

  m["emoticon_count"] = static_cast<double>(tok.emoticons.size());
  double emo_sum = 0;
  double emo_min = std::numeric_limits<double>::infinity();
  double emo_max = -std::numeric_limits<double>::infinity();
  std::size_t emo_n = 0;
  for (const std::string& g : tok.emoticons) {
    if (auto entry = resources.emoticons.find(g)) {
      const double s = entry->score();
      emo_sum += s;
      emo_min = std::min(emo_min, s);
      emo_max = std::max(emo_max, s);
      ++emo_n;
    }
  }
  m["emoji_mean"] = emo_n > 0 ? emo_sum / static_cast<double>(emo_n) : 0.0;
  m["emoji_min"] = emo_n > 0 ? emo_min : 0.0;
  m["emoji_max"] = emo_n > 0 ? emo_max : 0.0;

  if (lex_scores.empty()) {
    m["lex_mean"] = m["lex_min"] = m["lex_max"] = 0.0;
  } else {
    double sum = 0;
    for (double s : lex_scores) sum += s;
    m["lex_mean"] = sum / static_cast<double>(lex_scores.size());
    m["lex_min"] = *std::min_element(lex_scores.begin(), lex_scores.end());
    m["lex_max"] = *std::max_element(lex_scores.begin(), lex_scores.end());
  }
  m["lex_pos_count"] = lex_pos;
  m["lex_neg_count"] = lex_neg;

  m["formality"] = wc > 0 ? (formal - informal) / wc : 0.0;
  m["auto_correction_ratio"] = wc > 0 ? corrected / wc : 0.0;
  return m;
}

std::vector<std::string> expand_ngrams(const std::vector<std::string>& words, int ngram_max) {
  std::vector<std::string> terms = words;
  if (ngram_max >= 2) {
    for (std::size_t i = 0; i + 1 < words.size(); ++i)
      terms.push_back(words[i] + " " + words[i + 1]);
  }
  return terms;
}

FeatureSchema fit_vectorizer_terms(const std::vector<std::vector<std::string>>& documents,
                                   const FeatureOptions& options) {
  if (documents.empty()) throw ValueError("fit_vectorizer: empty corpus");
  const double n_docs = static_cast<double>(documents.size());

  std::map<std::string, int> df;
  for (const auto& words : documents) {
    std::set<std::string> seen;
    for (const std::string& t : expand_ngrams(words, options.ngram_max)) seen.insert(t);
    for (const std::string& t : seen) ++df[t];
  }

  std::vector<std::pair<std::string, int>> kept(df.begin(), df.end());
  if (options.vocab_cap > 0 && kept.size() > static_cast<std::size_t>(options.vocab_cap)) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(static_cast<std::size_t>(options.vocab_cap));
    std::sort(kept.begin(), kept.end());
  }

  FeatureSchema schema;
  schema.options = options;
  schema.idf.reserve(kept.size());
  for (const auto& [term, count] : kept) {
    schema.vocabulary.emplace(term, static_cast<int>(schema.idf.size()));
    schema.idf.push_back(std::log((1.0 + n_docs) / (1.0 + count)) + 1.0);
  }
  return schema;
}

FeatureSchema fit_vectorizer(const std::vector<Sentence>& sentences, const Resources& resources,
                             const FeatureOptions& options) {
  std::vector<std::vector<std::string>> documents;
  documents.reserve(sentences.size());
  for (const Sentence& s : sentences) {
    std::vector<std::string> words;
    for (const WordToken& w : tokenize_sentence(s, resources).words) words.push_back(w.corrected);
    documents.push_back(std::move(words));
  }
  return fit_vectorizer_terms(documents, options);
}

std::map<int, double> transform_terms(const std::vector<std::string>& words,
                                      const FeatureSchema& schema) {
  std::map<int, double> counts;
  for (const std::string& t : expand_ngrams(words, schema.options.ngram_max)) {
    auto it = schema.vocabulary.find(t);
    if (it != schema.vocabulary.end()) counts[it->second] += 1.0;
  }
  if (!schema.options.tfidf_enabled) return counts;

  double norm_sq = 0;
  for (auto& [index, value] : counts) {
    value *= schema.idf[static_cast<std::size_t>(index)];
    norm_sq += value * value;
  }
  if (norm_sq > 0) {
    const double norm = std::sqrt(norm_sq);
    for (auto& [index, value] : counts) value /= norm;
  }
  return counts;
}

std::map<int, double> transform(const Sentence& sentence, const FeatureSchema& schema,
                                const Resources& resources) {
  std::vector<std::string> words;
  for (const WordToken& w : tokenize_sentence(sentence, resources).words)
    words.push_back(w.corrected);
  return transform_terms(words, schema);
}

Eigen::MatrixXd dense_matrix(const std::vector<FeatureVector>& vectors,
                             const std::vector<std::string>& metrics) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(vectors.size()),
                    static_cast<Eigen::Index>(metrics.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < metrics.size(); ++j) {
      auto it = vectors[i].dense.find(metrics[j]);
      if (it == vectors[i].dense.end())
        throw SchemaError("feature vector \"" + vectors[i].sentence_id +
                          "\": missing metric \"" + metrics[j] + "\"");
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = it->second;
    }
  }
  return x;
}

CorrelationMatrix correlation_matrix(const std::vector<FeatureVector>& vectors,
                                     const std::vector<std::string>& metrics) {
  if (vectors.size() < 2) throw ValueError("correlation_matrix: need at least 2 samples");
  const Eigen::MatrixXd x = dense_matrix(vectors, metrics);
  const auto d = static_cast<Eigen::Index>(metrics.size());

  CorrelationMatrix out;
  out.metrics = metrics;
  out.constant.resize(metrics.size());
  out.r = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = x.col(j).mean();
    out.constant[static_cast<std::size_t>(j)] = (x.col(j).array() - mean).abs().maxCoeff() == 0.0;
  }
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      double r = 0.0;
      if (!out.constant[static_cast<std::size_t>(a)] && !out.constant[static_cast<std::size_t>(b)])
        r = pearson(x.col(a), x.col(b));
      out.r(a, b) = out.r(b, a) = r;
    }
  }
  return out;
}

std::vector<std::string> prune_correlated(const CorrelationMatrix& matrix, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw ValueError("prune_correlated: threshold must be in (0, 1]");
  std::vector<std::string> retained;
  std::vector<Eigen::Index> kept_idx;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(matrix.metrics.size()); ++j) {
    bool drop = false;
    for (Eigen::Index i : kept_idx) {
      if (std::abs(matrix.r(i, j)) > threshold) {
        drop = true;
        break;
      }
    }
    if (!drop) {
      kept_idx.push_back(j);
      retained.push_back(matrix.metrics[static_cast<std::size_t>(j)]);
    }
  }
  return retained;
}

}  // namespace chatmood
