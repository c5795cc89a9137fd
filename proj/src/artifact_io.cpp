#include "chatmood/artifact_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "chatmood/errors.hpp"

namespace chatmood {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows))
    throw SchemaError("matrix shape does not match its data");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = data.at(i);
    if (row.size() != static_cast<std::size_t>(cols))
      throw SchemaError("matrix shape does not match its data");
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = row.at(jj).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

// Narrows nlohmann's own exceptions (missing keys, wrong types) to the
// artifact schema error the callers contract on.
template <typename T>
T payload_as(const json& payload) {
  try {
    return payload.get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("artifact payload: ") + e.what());
  }
}

}  // namespace

void to_json(json& j, const ForestParams& p) {
  j = json{{"n_trees", p.n_trees},
           {"max_depth", p.max_depth},
           {"min_leaf", p.min_leaf},
           {"feature_subsample_fraction", p.feature_subsample_fraction}};
}

void from_json(const json& j, ForestParams& p) {
  j.at("n_trees").get_to(p.n_trees);
  j.at("max_depth").get_to(p.max_depth);
  j.at("min_leaf").get_to(p.min_leaf);
  j.at("feature_subsample_fraction").get_to(p.feature_subsample_fraction);
}

void to_json(json& j, const SvmParams& p) {
  j = json{{"l2_lambda", p.l2_lambda}, {"epochs", p.epochs}, {"learning_rate", p.learning_rate}};
}

void from_json(const json& j, SvmParams& p) {
  j.at("l2_lambda").get_to(p.l2_lambda);
  j.at("epochs").get_to(p.epochs);
  j.at("learning_rate").get_to(p.learning_rate);
}

void to_json(json& j, const NbParams& p) {
  j = json{{"variance_smoothing", p.variance_smoothing}};
}

void from_json(const json& j, NbParams& p) {
  j.at("variance_smoothing").get_to(p.variance_smoothing);
}

void to_json(json& j, const FeatureOptions& o) {
  j = json{{"ngram_max", o.ngram_max},
           {"tfidf_enabled", o.tfidf_enabled},
           {"vocab_cap", o.vocab_cap},
           {"prune_threshold", o.prune_threshold}};
}

void from_json(const json& j, FeatureOptions& o) {
  j.at("ngram_max").get_to(o.ngram_max);
  j.at("tfidf_enabled").get_to(o.tfidf_enabled);
  j.at("vocab_cap").get_to(o.vocab_cap);
  j.at("prune_threshold").get_to(o.prune_threshold);
}

void to_json(json& j, const Hyperparameters& hp) {
  j = json{{"forest", hp.forest}, {"svm", hp.svm}, {"nb", hp.nb}, {"features", hp.features}};
}

void from_json(const json& j, Hyperparameters& hp) {
  j.at("forest").get_to(hp.forest);
  j.at("svm").get_to(hp.svm);
  j.at("nb").get_to(hp.nb);
  j.at("features").get_to(hp.features);
}

void to_json(json& j, const LabelClass& c) { j = std::string(to_string(c)); }

void from_json(const json& j, LabelClass& c) {
  if (!j.is_string()) throw SchemaError("label class must be a string");
  c = label_class_from_string(j.get<std::string>());
}

void to_json(json& j, const Message& m) {
  j = json{{"id", m.id},
           {"sender", m.sender},
           {"timestamp", m.timestamp},
           {"stream", m.stream},
           {"topic", m.topic},
           {"content", m.content},
           {"removed_by_cleaning", m.removed_by_cleaning}};
}

void from_json(const json& j, Message& m) {
  j.at("id").get_to(m.id);
  j.at("sender").get_to(m.sender);
  j.at("timestamp").get_to(m.timestamp);
  j.at("stream").get_to(m.stream);
  j.at("topic").get_to(m.topic);
  j.at("content").get_to(m.content);
  j.at("removed_by_cleaning").get_to(m.removed_by_cleaning);
}

void to_json(json& j, const Corpus& c) {
  j = json{{"source", std::string(to_string(c.source()))}, {"messages", c.messages()}};
}

void from_json(const json& j, Corpus& c) {
  auto messages = j.at("messages").get<std::vector<Message>>();
  const auto source = corpus_source_from_string(j.at("source").get<std::string>());
  c = Corpus(std::move(messages), source);
}

void to_json(json& j, const Sentence& s) {
  j = json{{"message_id", s.message_id},
           {"index", s.index},
           {"raw", s.raw},
           {"clean", s.clean},
           {"tokens", s.tokens}};
}

void from_json(const json& j, Sentence& s) {
  j.at("message_id").get_to(s.message_id);
  j.at("index").get_to(s.index);
  j.at("raw").get_to(s.raw);
  j.at("clean").get_to(s.clean);
  j.at("tokens").get_to(s.tokens);
}

void to_json(json& j, const PreparedMessage& m) {
  j = json{{"id", m.id},
           {"sender", m.sender},
           {"timestamp", m.timestamp},
           {"stream", m.stream},
           {"topic", m.topic},
           {"clean_text", m.clean_text},
           {"removed_by_cleaning", m.removed_by_cleaning},
           {"sentences", m.sentences}};
}

void from_json(const json& j, PreparedMessage& m) {
  j.at("id").get_to(m.id);
  j.at("sender").get_to(m.sender);
  j.at("timestamp").get_to(m.timestamp);
  j.at("stream").get_to(m.stream);
  j.at("topic").get_to(m.topic);
  j.at("clean_text").get_to(m.clean_text);
  j.at("removed_by_cleaning").get_to(m.removed_by_cleaning);
  j.at("sentences").get_to(m.sentences);
}

void to_json(json& j, const SentenceStore& s) { j = json{{"messages", s.messages}}; }

void from_json(const json& j, SentenceStore& s) { j.at("messages").get_to(s.messages); }

void to_json(json& j, const PseudonymMap& p) {
  j = json{{"persons", p.persons()}, {"emails", p.emails()}, {"links", p.links()}};
}

void from_json(const json& j, PseudonymMap& p) {
  using Map = std::map<std::string, std::string>;
  p = PseudonymMap(j.at("persons").get<Map>(), j.at("emails").get<Map>(),
                   j.at("links").get<Map>());
}

void to_json(json& j, const FeatureSchema& s) {
  j = json{{"metric_names", s.metric_names},
           {"vocabulary", s.vocabulary},
           {"idf", s.idf},
           {"options", s.options}};
}

void from_json(const json& j, FeatureSchema& s) {
  j.at("metric_names").get_to(s.metric_names);
  j.at("vocabulary").get_to(s.vocabulary);
  j.at("idf").get_to(s.idf);
  j.at("options").get_to(s.options);
}

void to_json(json& j, const Scaler& s) {
  j = json{{"mean", vector_to_json(s.mean)}, {"stddev", vector_to_json(s.stddev)}};
}

void from_json(const json& j, Scaler& s) {
  s.mean = vector_from_json(j.at("mean"));
  s.stddev = vector_from_json(j.at("stddev"));
}

void to_json(json& j, const TreeNode& n) {
  j = json{{"feature", n.feature},
           {"threshold", n.threshold},
           {"left", n.left},
           {"right", n.right},
           {"label", n.label}};
}

void from_json(const json& j, TreeNode& n) {
  j.at("feature").get_to(n.feature);
  j.at("threshold").get_to(n.threshold);
  j.at("left").get_to(n.left);
  j.at("right").get_to(n.right);
  j.at("label").get_to(n.label);
}

void to_json(json& j, const DecisionTree& t) { j = json{{"nodes", t.nodes}}; }

void from_json(const json& j, DecisionTree& t) { j.at("nodes").get_to(t.nodes); }

void to_json(json& j, const ForestModel& f) {
  j = json{{"trees", f.trees}, {"classes", f.classes}};
}

void from_json(const json& j, ForestModel& f) {
  j.at("trees").get_to(f.trees);
  j.at("classes").get_to(f.classes);
}

void to_json(json& j, const SvmModel& s) {
  j = json{{"weights", matrix_to_json(s.weights)},
           {"bias", vector_to_json(s.bias)},
           {"classes", s.classes}};
}

void from_json(const json& j, SvmModel& s) {
  s.weights = matrix_from_json(j.at("weights"));
  s.bias = vector_from_json(j.at("bias"));
  j.at("classes").get_to(s.classes);
}

void to_json(json& j, const NbModel& n) {
  j = json{{"log_prior", vector_to_json(n.log_prior)},
           {"mean", matrix_to_json(n.mean)},
           {"variance", matrix_to_json(n.variance)},
           {"classes", n.classes}};
}

void from_json(const json& j, NbModel& n) {
  n.log_prior = vector_from_json(j.at("log_prior"));
  n.mean = matrix_from_json(j.at("mean"));
  n.variance = matrix_from_json(j.at("variance"));
  j.at("classes").get_to(n.classes);
}

void to_json(json& j, const EnsembleModel& m) {
  j = json{{"schema", m.schema}, {"scaler", m.scaler}, {"forest", m.forest},
           {"svm", m.svm},       {"nb", m.nb},         {"hp", m.hp},
           {"seed", m.seed},     {"classes", m.classes}};
}

void from_json(const json& j, EnsembleModel& m) {
  j.at("schema").get_to(m.schema);
  j.at("scaler").get_to(m.scaler);
  j.at("forest").get_to(m.forest);
  j.at("svm").get_to(m.svm);
  j.at("nb").get_to(m.nb);
  j.at("hp").get_to(m.hp);
  j.at("seed").get_to(m.seed);
  j.at("classes").get_to(m.classes);
}

const SentenceFeatures* FeatureTable::find(const std::string& id) const {
  for (const SentenceFeatures& row : rows)
    if (row.id == id) return &row;
  return nullptr;
}

void to_json(json& j, const SentenceFeatures& f) {
  j = json{{"id", f.id}, {"dense", f.dense}, {"words", f.words}};
}

void from_json(const json& j, SentenceFeatures& f) {
  j.at("id").get_to(f.id);
  j.at("dense").get_to(f.dense);
  j.at("words").get_to(f.words);
}

void to_json(json& j, const FeatureTable& t) { j = json{{"sentences", t.rows}}; }

void from_json(const json& j, FeatureTable& t) { j.at("sentences").get_to(t.rows); }

FeatureTable compute_feature_table(const SentenceStore& store, const Resources& resources) {
  FeatureTable table;
  for (const PreparedMessage& message : store.messages) {
    for (const Sentence& sentence : message.sentences) {
      SentenceFeatures row;
      row.id = sentence.id();
      row.dense = extract_dense(sentence, resources, message);
      for (const WordToken& w : tokenize_sentence(sentence, resources).words)
        row.words.push_back(w.corrected);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Dataset dataset_from_table(const FeatureTable& table,
                           const std::map<std::string, LabelClass>& labels) {
  std::set<std::string> known;
  Dataset data;
  for (const SentenceFeatures& row : table.rows) {
    known.insert(row.id);
    auto it = labels.find(row.id);
    if (it == labels.end()) continue;
    data.push_back({row.id, it->second, row.dense, row.words});
  }
  for (const auto& [id, label] : labels) {
    (void)label;
    if (!known.count(id)) throw ValueError("label references unknown sentence \"" + id + "\"");
  }
  return data;
}

Dataset all_points(const FeatureTable& table) {
  Dataset data;
  for (const SentenceFeatures& row : table.rows)
    data.push_back({row.id, LabelClass::neutral, row.dense, row.words});
  return data;
}

json make_envelope(std::string_view kind, json payload) {
  return json{{"format_version", std::string(kFormatVersion)},
              {"kind", std::string(kind)},
              {"payload", std::move(payload)}};
}

json open_envelope(const json& document, std::string_view expected_kind) {
  if (!document.is_object()) throw SchemaError("artifact is not a JSON object");
  auto version = document.find("format_version");
  if (version == document.end() || !version->is_string())
    throw SchemaError("artifact lacks a format_version string");
  if (version->get<std::string>() != kFormatVersion)
    throw VersionError("unsupported format_version \"" + version->get<std::string>() +
                       "\" (expected \"" + std::string(kFormatVersion) + "\")");
  auto kind = document.find("kind");
  if (kind == document.end() || !kind->is_string())
    throw SchemaError("artifact lacks a kind string");
  if (kind->get<std::string>() != expected_kind)
    throw SchemaError("artifact kind \"" + kind->get<std::string>() + "\" (expected \"" +
                      std::string(expected_kind) + "\")");
  auto payload = document.find("payload");
  if (payload == document.end()) throw SchemaError("artifact lacks a payload");
  return *payload;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file \"" + path + "\"");
  return std::move(buffer).str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file \"" + path + "\"");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out.good()) throw IoError("cannot write file \"" + path + "\"");
}

void save_artifact(const std::string& path, std::string_view kind, const json& payload) {
  write_text_file(path, make_envelope(kind, payload).dump(2) + "\n");
}

json load_artifact(const std::string& path, std::string_view expected_kind) {
  return open_envelope(parse_json(read_text_file(path)), expected_kind);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  save_artifact(path, kKindCorpus, corpus);
}

Corpus load_corpus(const std::string& path) {
  return payload_as<Corpus>(load_artifact(path, kKindCorpus));
}

void save_sentence_store(const SentenceStore& store, const std::string& path) {
  save_artifact(path, kKindSentenceStore, store);
}

SentenceStore load_sentence_store(const std::string& path) {
  return payload_as<SentenceStore>(load_artifact(path, kKindSentenceStore));
}

void save_pseudonyms(const PseudonymMap& map, const std::string& path) {
  save_artifact(path, kKindPseudonyms, map);
}

PseudonymMap load_pseudonyms(const std::string& path) {
  return payload_as<PseudonymMap>(load_artifact(path, kKindPseudonyms));
}

void save_feature_table(const FeatureTable& table, const std::string& path) {
  save_artifact(path, kKindFeatures, table);
}

FeatureTable load_feature_table(const std::string& path) {
  return payload_as<FeatureTable>(load_artifact(path, kKindFeatures));
}

void save_model(const EnsembleModel& model, const std::string& path) {
  save_artifact(path, kKindModel, model);
}

EnsembleModel load_model(const std::string& path) {
  return payload_as<EnsembleModel>(load_artifact(path, kKindModel));
}

}  // namespace chatmood
