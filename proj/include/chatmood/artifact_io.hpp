// JSON conversions for persisted types, the artifact envelope, and file IO.
#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "chatmood/classify.hpp"
#include "chatmood/corpus.hpp"
#include "chatmood/preprocess.hpp"

namespace chatmood {

// Every persisted artifact is a JSON envelope with a format_version marker
// and a kind discriminator around the actual payload.
inline constexpr std::string_view kFormatVersion = "1";
inline constexpr std::string_view kKindCorpus = "corpus";
inline constexpr std::string_view kKindSentenceStore = "sentence_store";
inline constexpr std::string_view kKindPseudonyms = "pseudonyms";
inline constexpr std::string_view kKindFeatures = "features";
inline constexpr std::string_view kKindModel = "model";
inline constexpr std::string_view kKindEvaluation = "evaluation";

// nlohmann ADL hooks: `nlohmann::json j = hp;` and `j.get<Hyperparameters>()`.
void to_json(nlohmann::json& j, const ForestParams& p);
void from_json(const nlohmann::json& j, ForestParams& p);
void to_json(nlohmann::json& j, const SvmParams& p);
void from_json(const nlohmann::json& j, SvmParams& p);
void to_json(nlohmann::json& j, const NbParams& p);
void from_json(const nlohmann::json& j, NbParams& p);
void to_json(nlohmann::json& j, const FeatureOptions& o);
void from_json(const nlohmann::json& j, FeatureOptions& o);
void to_json(nlohmann::json& j, const Hyperparameters& hp);
void from_json(const nlohmann::json& j, Hyperparameters& hp);

void to_json(nlohmann::json& j, const LabelClass& c);
void from_json(const nlohmann::json& j, LabelClass& c);

void to_json(nlohmann::json& j, const Message& m);
void from_json(const nlohmann::json& j, Message& m);
void to_json(nlohmann::json& j, const Corpus& c);
void from_json(const nlohmann::json& j, Corpus& c);

void to_json(nlohmann::json& j, const Sentence& s);
void from_json(const nlohmann::json& j, Sentence& s);
void to_json(nlohmann::json& j, const PreparedMessage& m);
void from_json(const nlohmann::json& j, PreparedMessage& m);
void to_json(nlohmann::json& j, const SentenceStore& s);
void from_json(const nlohmann::json& j, SentenceStore& s);
void to_json(nlohmann::json& j, const PseudonymMap& p);
void from_json(const nlohmann::json& j, PseudonymMap& p);

void to_json(nlohmann::json& j, const FeatureSchema& s);
void from_json(const nlohmann::json& j, FeatureSchema& s);
void to_json(nlohmann::json& j, const Scaler& s);
void from_json(const nlohmann::json& j, Scaler& s);
void to_json(nlohmann::json& j, const TreeNode& n);
void from_json(const nlohmann::json& j, TreeNode& n);
void to_json(nlohmann::json& j, const DecisionTree& t);
void from_json(const nlohmann::json& j, DecisionTree& t);
void to_json(nlohmann::json& j, const ForestModel& f);
void from_json(const nlohmann::json& j, ForestModel& f);
void to_json(nlohmann::json& j, const SvmModel& s);
void from_json(const nlohmann::json& j, SvmModel& s);
void to_json(nlohmann::json& j, const NbModel& n);
void from_json(const nlohmann::json& j, NbModel& n);
void to_json(nlohmann::json& j, const EnsembleModel& m);
void from_json(const nlohmann::json& j, EnsembleModel& m);

/// Per-sentence features staged between preprocessing and training: the
/// dense metrics plus the corrected word stream feeding the vectorizer.
struct SentenceFeatures {
  std::string id;
  std::map<std::string, double> dense;
  std::vector<std::string> words;

  bool operator==(const SentenceFeatures&) const = default;
};

struct FeatureTable {
  std::vector<SentenceFeatures> rows;  // store order

  const SentenceFeatures* find(const std::string& id) const;

  bool operator==(const FeatureTable&) const = default;
};

void to_json(nlohmann::json& j, const SentenceFeatures& f);
void from_json(const nlohmann::json& j, SentenceFeatures& f);
void to_json(nlohmann::json& j, const FeatureTable& t);
void from_json(const nlohmann::json& j, FeatureTable& t);

/// Extracts features for every sentence of the store, in store order.
FeatureTable compute_feature_table(const SentenceStore& store, const Resources& resources);

/// Joins labels against a feature table; a label for an id missing from the
/// table is an error. Rows keep table order.
Dataset dataset_from_table(const FeatureTable& table,
                           const std::map<std::string, LabelClass>& labels);

/// Every table row as an unlabeled data point (label defaults to neutral).
Dataset all_points(const FeatureTable& table);

nlohmann::json make_envelope(std::string_view kind, nlohmann::json payload);

/// Unwraps an envelope: wrong format_version is a version error, a missing
/// or mismatched kind a schema error. Returns the payload.
nlohmann::json open_envelope(const nlohmann::json& document, std::string_view expected_kind);

/// Parses JSON text; malformed input is a parse error with a byte offset.
nlohmann::json parse_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

void save_artifact(const std::string& path, std::string_view kind, const nlohmann::json& payload);
nlohmann::json load_artifact(const std::string& path, std::string_view expected_kind);

void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);
void save_sentence_store(const SentenceStore& store, const std::string& path);
SentenceStore load_sentence_store(const std::string& path);
void save_pseudonyms(const PseudonymMap& map, const std::string& path);
PseudonymMap load_pseudonyms(const std::string& path);
void save_feature_table(const FeatureTable& table, const std::string& path);
FeatureTable load_feature_table(const std::string& path);
void save_model(const EnsembleModel& model, const std::string& path);
EnsembleModel load_model(const std::string& path);

}  // namespace chatmood
