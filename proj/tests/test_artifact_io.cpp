#include "chatmood/artifact_io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "chatmood/errors.hpp"
#include "fixtures.hpp"

namespace chatmood {
namespace {

using nlohmann::json;

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

Corpus sample_corpus() {
  std::vector<Message> messages;
  messages.push_back({"7", "ann", 1700000100, "dev", "release", "Ship it! :)", false});
  messages.push_back({"9", "bob", 1700000200, "dev", "release", "Looks \"fine\" to me\nreally",
                      false});
  messages.push_back({"12", "ann", 1700000300, "ops", "incident", "", true});
  return Corpus(std::move(messages), CorpusSource::zulip_export);
}

SentenceStore sample_store() {
  SentenceStore store;
  PreparedMessage m;
  m.id = "7";
  m.sender = "[[person_1]]";
  m.timestamp = 1700000100;
  m.stream = "dev";
  m.topic = "release";
  m.clean_text = "Ship it! :)";
  m.sentences.push_back({"7", 0, "Ship it!", "Ship it!", {"ship", "it"}});
  m.sentences.push_back({"7", 1, ":)", ":)", {}});
  store.messages.push_back(m);
  PreparedMessage removed;
  removed.id = "12";
  removed.sender = "[[person_1]]";
  removed.timestamp = 1700000300;
  removed.stream = "ops";
  removed.topic = "incident";
  removed.removed_by_cleaning = true;
  store.messages.push_back(removed);
  return store;
}

TEST(Envelope, RoundTripReturnsPayload) {
  const json payload = {{"x", 1}, {"y", "z"}};
  const json doc = make_envelope(kKindCorpus, payload);
  EXPECT_EQ(doc.at("format_version"), "1");
  EXPECT_EQ(doc.at("kind"), "corpus");
  EXPECT_EQ(open_envelope(doc, kKindCorpus), payload);
}

TEST(Envelope, Version99IsVersionError) {
  json doc = make_envelope(kKindCorpus, json::object());
  doc["format_version"] = "99";
  try {
    open_envelope(doc, kKindCorpus);
    FAIL() << "expected VersionError";
  } catch (const VersionError& e) {
    EXPECT_NE(std::string(e.what()).find("99"), std::string::npos);
  }
}

TEST(Envelope, MalformedEnvelopesAreSchemaErrors) {
  EXPECT_THROW(open_envelope(json::array(), kKindCorpus), SchemaError);
  EXPECT_THROW(open_envelope(json{{"kind", "corpus"}}, kKindCorpus), SchemaError);
  EXPECT_THROW(open_envelope(json{{"format_version", 1}, {"kind", "corpus"}}, kKindCorpus),
               SchemaError);
  json no_payload = {{"format_version", "1"}, {"kind", "corpus"}};
  EXPECT_THROW(open_envelope(no_payload, kKindCorpus), SchemaError);
}

TEST(Envelope, KindMismatchIsSchemaError) {
  const json doc = make_envelope(kKindModel, json::object());
  try {
    open_envelope(doc, kKindCorpus);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("model"), std::string::npos);
    EXPECT_NE(what.find("corpus"), std::string::npos);
  }
}

TEST(Files, WriteThenReadIsIdentity) {
  const std::string path = temp_path("artifact_io_files.txt");
  const std::string content = "h\xc3\xa9llo\nworld\n\ttabs\n";
  write_text_file(path, content);
  EXPECT_EQ(read_text_file(path), content);
}

TEST(Files, MissingFileNamesPath) {
  const std::string path = temp_path("no_such_file_here.json");
  try {
    read_text_file(path);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
  }
}

TEST(Files, UnwritablePathIsIoError) {
  EXPECT_THROW(write_text_file(temp_path("missing_dir/x.json"), "x"), IoError);
}

TEST(Files, MalformedJsonIsParseError) {
  try {
    parse_json("{\"a\": ");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST(CorpusIo, SaveLoadRoundTrip) {
  const Corpus corpus = sample_corpus();
  const std::string path = temp_path("corpus_round_trip.json");
  save_corpus(corpus, path);
  EXPECT_EQ(load_corpus(path), corpus);
  EXPECT_EQ(load_corpus(path).source(), CorpusSource::zulip_export);
}

TEST(CorpusIo, RandomizedJsonRoundTrip) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> snippets = {"plain", "with space", "\"quoted\"", "line\nbreak",
                                             "caf\xc3\xa9", ":-)", "", "a,b,c"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Message> messages;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      Message m;
      m.id = "m" + std::to_string(i);
      m.sender = snippets[rng() % snippets.size()];
      m.timestamp = 1000 + static_cast<std::int64_t>(rng() % 100000);
      m.stream = snippets[rng() % snippets.size()];
      m.topic = snippets[rng() % snippets.size()];
      m.content = snippets[rng() % snippets.size()];
      m.removed_by_cleaning = (rng() % 2) == 0;
      messages.push_back(std::move(m));
    }
    const auto source = (rng() % 2) ? CorpusSource::zulip_export : CorpusSource::generic_jsonl;
    const Corpus corpus(std::move(messages), source);
    const json j = corpus;
    EXPECT_EQ(j.get<Corpus>(), corpus);
  }
}

TEST(CorpusIo, WrongKindOnDiskIsSchemaError) {
  const std::string path = temp_path("kind_mismatch.json");
  save_sentence_store(sample_store(), path);
  EXPECT_THROW(load_corpus(path), SchemaError);
}

TEST(CorpusIo, Version99OnDiskIsVersionError) {
  const std::string path = temp_path("version_99.json");
  json doc = make_envelope(kKindCorpus, json(sample_corpus()));
  doc["format_version"] = "99";
  write_text_file(path, doc.dump());
  EXPECT_THROW(load_corpus(path), VersionError);
}

TEST(StoreIo, SaveLoadRoundTrip) {
  const SentenceStore store = sample_store();
  const std::string path = temp_path("store_round_trip.json");
  save_sentence_store(store, path);
  const SentenceStore loaded = load_sentence_store(path);
  EXPECT_EQ(loaded, store);
  EXPECT_EQ(loaded.sentence_count(), store.sentence_count());
  EXPECT_EQ(loaded.removed_count(), 1u);
}

TEST(StoreIo, MissingPayloadKeyIsSchemaError) {
  const std::string path = temp_path("store_bad_payload.json");
  write_text_file(path, make_envelope(kKindSentenceStore, json::object()).dump());
  EXPECT_THROW(load_sentence_store(path), SchemaError);
}

TEST(PseudonymIo, RoundTripKeepsNumbering) {
  PseudonymMap map;
  map.person_placeholder("Ada Lovelace");
  map.person_placeholder("Bob Law");
  map.email_placeholder("ada@example.com");
  map.link_placeholder("https://example.com/a");
  const std::string path = temp_path("pseudonyms_round_trip.json");
  save_pseudonyms(map, path);
  PseudonymMap loaded = load_pseudonyms(path);
  EXPECT_EQ(loaded, map);
  EXPECT_EQ(loaded.person_placeholder("Ada Lovelace"), "[[person_1]]");
  EXPECT_EQ(loaded.person_placeholder("Cara New"), "[[person_3]]");
}

TEST(PseudonymIo, DuplicatePlaceholderRejected) {
  const json payload = {{"persons", {{"a", "[[person_1]]"}, {"b", "[[person_1]]"}}},
                        {"emails", json::object()},
                        {"links", json::object()}};
  EXPECT_THROW(payload.get<PseudonymMap>(), ValueError);
}

TEST(FeatureTableIo, MatchesBuildDataset) {
  PseudonymMap pseudonyms;
  const SentenceStore store =
      prepare_corpus(sample_corpus(), PreprocessOptions{}, pseudonyms);
  const Resources resources;
  const FeatureTable table = compute_feature_table(store, resources);
  ASSERT_GT(table.rows.size(), 0u);

  std::map<std::string, LabelClass> labels;
  labels.emplace(table.rows.front().id, LabelClass::positive);
  labels.emplace(table.rows.back().id, LabelClass::negative);
  const Dataset via_table = dataset_from_table(table, labels);
  const Dataset direct = build_dataset(store, labels, resources);
  ASSERT_EQ(via_table.size(), direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    EXPECT_EQ(via_table[i].id, direct[i].id);
    EXPECT_EQ(via_table[i].label, direct[i].label);
    EXPECT_EQ(via_table[i].dense, direct[i].dense);
    EXPECT_EQ(via_table[i].words, direct[i].words);
  }
}

TEST(FeatureTableIo, SaveLoadRoundTrip) {
  FeatureTable table;
  table.rows.push_back({"m1:0", {{"lex_mean", 0.25}, {"word_count", 3.0}}, {"good", "stuff"}});
  table.rows.push_back({"m1:1", {{"lex_mean", -1.0 / 3.0}}, {}});
  const std::string path = temp_path("features_round_trip.json");
  save_feature_table(table, path);
  EXPECT_EQ(load_feature_table(path), table);
}

TEST(FeatureTableIo, UnknownLabelIdThrows) {
  FeatureTable table;
  table.rows.push_back({"m1:0", {}, {}});
  std::map<std::string, LabelClass> labels = {{"m9:0", LabelClass::positive}};
  try {
    dataset_from_table(table, labels);
    FAIL() << "expected ValueError";
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("m9:0"), std::string::npos);
  }
}

TEST(FeatureTableIo, AllPointsCoversEveryRow) {
  FeatureTable table;
  table.rows.push_back({"a:0", {{"word_count", 1.0}}, {"x"}});
  table.rows.push_back({"a:1", {{"word_count", 2.0}}, {"y"}});
  const Dataset points = all_points(table);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].id, "a:0");
  EXPECT_EQ(points[1].label, LabelClass::neutral);
  EXPECT_EQ(points[1].words, std::vector<std::string>{"y"});
}

TEST(ModelIo, HyperparametersJsonRoundTrip) {
  Hyperparameters hp;
  hp.forest = {37, 11, 2, 0.45};
  hp.svm = {3e-4, 17, 0.05};
  hp.nb = {1e-7};
  hp.features = {2, false, 321, 0.77};
  const json j = hp;
  EXPECT_EQ(j.get<Hyperparameters>(), hp);
}

TEST(ModelIo, RandomizedForestJsonRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    ForestModel forest;
    forest.classes = {LabelClass::positive, LabelClass::neutral, LabelClass::negative};
    const int n_trees = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < n_trees; ++t) {
      DecisionTree tree;
      const int nodes = 1 + static_cast<int>(rng() % 7);
      for (int k = 0; k < nodes; ++k) {
        TreeNode node;
        node.feature = static_cast<int>(rng() % 5) - 1;
        node.threshold = real(rng);
        node.left = static_cast<int>(rng() % 8) - 1;
        node.right = static_cast<int>(rng() % 8) - 1;
        node.label = kAllClasses[rng() % 3];
        tree.nodes.push_back(node);
      }
      forest.trees.push_back(std::move(tree));
    }
    const json j = forest;
    EXPECT_EQ(j.get<ForestModel>(), forest);
  }
}

TEST(ModelIo, EigenPartsRoundTripBitwise) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> real(-10.0, 10.0);
  SvmModel svm;
  svm.weights = Eigen::MatrixXd::NullaryExpr(3, 7, [&] { return real(rng); });
  svm.bias = Eigen::VectorXd::NullaryExpr(3, [&] { return real(rng); });
  svm.classes = {LabelClass::positive, LabelClass::neutral, LabelClass::negative};
  const json js = svm;
  const SvmModel svm2 = js.get<SvmModel>();
  ASSERT_EQ(svm2.weights.rows(), 3);
  ASSERT_EQ(svm2.weights.cols(), 7);
  EXPECT_TRUE((svm2.weights.array() == svm.weights.array()).all());
  EXPECT_TRUE((svm2.bias.array() == svm.bias.array()).all());
  EXPECT_EQ(svm2.classes, svm.classes);

  NbModel nb;
  nb.log_prior = Eigen::VectorXd::NullaryExpr(3, [&] { return real(rng); });
  nb.mean = Eigen::MatrixXd::NullaryExpr(3, 4, [&] { return real(rng); });
  nb.variance = Eigen::MatrixXd::NullaryExpr(3, 4, [&] { return real(rng) * real(rng) + 0.1; });
  nb.classes = svm.classes;
  const json jn = nb;
  const NbModel nb2 = jn.get<NbModel>();
  EXPECT_TRUE((nb2.log_prior.array() == nb.log_prior.array()).all());
  EXPECT_TRUE((nb2.mean.array() == nb.mean.array()).all());
  EXPECT_TRUE((nb2.variance.array() == nb.variance.array()).all());
}

TEST(ModelIo, EmptyMatrixRoundTrip) {
  SvmModel svm;
  svm.weights = Eigen::MatrixXd(0, 5);
  svm.bias = Eigen::VectorXd(0);
  const json j = svm;
  const SvmModel back = j.get<SvmModel>();
  EXPECT_EQ(back.weights.rows(), 0);
  EXPECT_EQ(back.weights.cols(), 5);
  EXPECT_EQ(back.bias.size(), 0);
}

TEST(ModelIo, MatrixShapeMismatchIsSchemaError) {
  json j = {{"weights", {{"rows", 2}, {"cols", 2}, {"data", {{1.0, 2.0}}}}},
            {"bias", json::array()},
            {"classes", json::array()}};
  EXPECT_THROW(j.get<SvmModel>(), SchemaError);
}

TEST(ModelIo, TrainedModelRoundTripPredictsIdentically) {
  const Dataset data = testfix::separable_dataset(12);
  Hyperparameters hp;
  hp.forest.n_trees = 15;
  const EnsembleModel model = train_ensemble(data, hp, 7);
  const std::string path = temp_path("model_round_trip.json");
  save_model(model, path);
  const EnsembleModel loaded = load_model(path);

  EXPECT_EQ(loaded.schema, model.schema);
  EXPECT_EQ(loaded.forest, model.forest);
  EXPECT_EQ(loaded.hp, model.hp);
  EXPECT_EQ(loaded.seed, model.seed);
  EXPECT_EQ(loaded.classes, model.classes);
  EXPECT_TRUE((loaded.scaler.mean.array() == model.scaler.mean.array()).all());
  EXPECT_TRUE((loaded.scaler.stddev.array() == model.scaler.stddev.array()).all());
  EXPECT_TRUE((loaded.svm.weights.array() == model.svm.weights.array()).all());
  EXPECT_TRUE((loaded.svm.bias.array() == model.svm.bias.array()).all());
  EXPECT_TRUE((loaded.nb.mean.array() == model.nb.mean.array()).all());
  EXPECT_TRUE((loaded.nb.variance.array() == model.nb.variance.array()).all());
  EXPECT_TRUE((loaded.nb.log_prior.array() == model.nb.log_prior.array()).all());

  for (const DataPoint& point : data) {
    const Prediction a = model.predict(point);
    const Prediction b = loaded.predict(point);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.votes, b.votes);
  }
}

TEST(ModelIo, SavedArtifactIsStableAcrossRewrites) {
  const Dataset data = testfix::separable_dataset(6);
  const EnsembleModel model = train_ensemble(data, Hyperparameters{}, 3);
  const std::string first = temp_path("model_stable_1.json");
  const std::string second = temp_path("model_stable_2.json");
  save_model(model, first);
  save_model(load_model(first), second);
  EXPECT_EQ(read_text_file(first), read_text_file(second));
}

}  // namespace
}  // namespace chatmood
