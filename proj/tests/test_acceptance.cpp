// Acceptance suite: ten numbered criteria, each printing one PASS/FAIL line.
#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chatmood/artifact_io.hpp"
#include "chatmood/cli.hpp"
#include "chatmood/classify.hpp"
#include "chatmood/corpus.hpp"
#include "chatmood/evaluate.hpp"
#include "chatmood/evolve.hpp"
#include "chatmood/features.hpp"
#include "chatmood/labels.hpp"
#include "chatmood/lexicons.hpp"
#include "chatmood/mood.hpp"
#include "chatmood/numeric.hpp"
#include "chatmood/preprocess.hpp"

namespace chatmood {
namespace {

// Prints the criterion verdict when the test body finishes, early returns and
// caught failures included.
struct CriterionLine {
  int number;
  std::string name;

  ~CriterionLine() {
    std::cout << "criterion " << number << ": "
              << (::testing::Test::HasFailure() ? "FAIL" : "PASS") << "  " << name << "\n";
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// |a - b| within 1e-9 of |b|; a near-zero reference demands a near-zero value.
void expect_rel(double actual, double reference) {
  if (std::abs(reference) > 1e-12)
    EXPECT_LE(std::abs(actual - reference), 1e-9 * std::abs(reference))
        << actual << " vs " << reference;
  else
    EXPECT_LE(std::abs(actual - reference), 1e-12) << actual << " vs " << reference;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// The reference confusion matrix used by the regression criteria; rows are
// truth, columns predictions, canonical class order.
ConfusionMatrix reference_matrix() {
  ConfusionMatrix cm;
  const std::array<std::array<int, 3>, 3> cells = {{{36, 46, 7}, {10, 173, 11}, {2, 64, 29}}};
  for (int t = 0; t < 3; ++t)
    for (int p = 0; p < 3; ++p) cm.at(kAllClasses[t], kAllClasses[p]) = cells[t][p];
  return cm;
}

// A 300-sentence synthetic chat whose labels follow the lexicon by
// construction: every sentence draws all its words from one class pool.
struct World {
  std::string root;
  std::string config;
  std::string run_dir;
  Resources resources;
  SentenceStore store;
  std::map<std::string, LabelClass> truth;  // sentence id -> class, all 300
  Dataset data;                             // one point per sentence
};

const std::array<std::vector<std::string>, 3> kPools = {{
    {"love", "great", "awesome", "happy", "glad", "nice", "good", "excellent", "perfect",
     "wonderful", "fantastic", "thanks"},
    {"meeting", "build", "release", "branch", "server", "agenda", "version", "update", "report",
     "schedule", "notes", "plan"},
    {"hate", "terrible", "awful", "sad", "angry", "broken", "worst", "wrong", "annoying", "crash",
     "bug", "problem"},
}};

const World& world() {
  static const World w = [] {
    World out;
    out.root = ::testing::TempDir() + "acceptance";
    out.run_dir = out.root + "/out/accept";
    std::filesystem::remove_all(out.root);
    std::filesystem::create_directories(out.root + "/res");

    std::string polarity;
    for (const std::string& word : kPools[0]) polarity += word + "\tpositive\t0.8\n";
    for (const std::string& word : kPools[1]) polarity += word + "\tneutral\n";
    for (const std::string& word : kPools[2]) polarity += word + "\tnegative\t-0.8\n";
    write_text_file(out.root + "/res/polarity.tsv", polarity);
    write_text_file(out.root + "/res/emoticons.tsv",
                    ":)\t0.8\t0.15\t0.05\n:(\t0.05\t0.15\t0.8\n");
    out.resources = load_resources(out.root + "/res");

    std::mt19937_64 rng(2468);
    const std::array<std::string, 3> senders = {"dana", "eli", "finn"};
    const std::int64_t base = 1722470400;  // 2024-08-01T00:00:00Z
    std::string jsonl;
    for (int i = 0; i < 300; ++i) {
      const int cls = i % 3;
      const std::vector<std::string>& pool = kPools[static_cast<std::size_t>(cls)];
      const int n_words = 3 + static_cast<int>(rng() % 3);
      std::string text;
      for (int k = 0; k < n_words; ++k) {
        if (k) text += " ";
        text += pool[rng() % pool.size()];
      }
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
      const bool emoticon = cls != 1 && rng() % 2 == 0;
      text += emoticon ? (cls == 0 ? " :)" : " :(") : ".";

      const nlohmann::json line = {
          {"id", "m" + std::to_string(i + 1)},
          {"sender", senders[static_cast<std::size_t>(i) % 3]},
          {"timestamp", base + (i / 30) * 86400 + (i % 30) * 120},
          {"stream", "dev"},
          {"topic", "mood"},
          {"content", text},
      };
      jsonl += line.dump() + "\n";
      out.truth["m" + std::to_string(i + 1) + ":0"] = kAllClasses[static_cast<std::size_t>(cls)];
    }
    write_text_file(out.root + "/chat.jsonl", jsonl);

    std::istringstream in(jsonl);
    const Corpus parsed = parse_generic_jsonl(in);
    PreprocessOptions options;
    options.roster = {senders.begin(), senders.end()};
    PseudonymMap pseudonyms;
    out.store = prepare_corpus(parsed, options, pseudonyms);
    out.data = build_dataset(out.store, out.truth, out.resources);

    // Nine of every ten sentences carry a label in the CLI fixture; the rest
    // are left for the scoring step.
    std::vector<LabelRecord> records;
    for (int i = 0; i < 300; ++i)
      if (i % 10 != 9)
        records.push_back({"m" + std::to_string(i + 1) + ":0",
                           kAllClasses[static_cast<std::size_t>(i % 3)], "ann", 1, 0});
    std::filesystem::create_directories(out.run_dir);
    save_labels(records, out.run_dir + "/labels.csv");

    out.config = out.root + "/run.cfg";
    write_text_file(out.config, "name = accept\n"
                                "corpus = " + out.root + "/chat.jsonl\n"
                                "source = jsonl\n"
                                "resources = " + out.root + "/res\n"
                                "output_dir = " + out.root + "/out\n"
                                "seed = 11\n"
                                "repeats = 3\n"
                                "population = 4\n"
                                "generations = 2\n"
                                "tournament = 2\n"
                                "elitism = 1\n"
                                "fitness_splits = 1\n"
                                "test_fraction = 0.2\n");
    return out;
  }();
  return w;
}

int run_command(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, CliStreams{in, out, err, false});
  if (code != 0) ADD_FAILURE() << "command failed: " << err.str();
  return code;
}

TEST(Acceptance, Criterion01ReportRegression) {
  CriterionLine line{1, "classification-report regression"};
  try {
    const auto start = Clock::now();
    const ClassificationReport rep = report(reference_matrix());

    const std::array<double, 3> precision = {0.75, 0.61, 0.62};
    const std::array<double, 3> recall = {0.40, 0.89, 0.31};
    const std::array<double, 3> f1 = {0.53, 0.73, 0.41};
    const std::array<int, 3> frequency = {89, 194, 95};
    for (int c = 0; c < 3; ++c) {
      const ClassMetrics& m = rep.per_class[static_cast<std::size_t>(c)];
      EXPECT_DOUBLE_EQ(round2(m.precision), precision[static_cast<std::size_t>(c)]) << c;
      EXPECT_DOUBLE_EQ(round2(m.recall), recall[static_cast<std::size_t>(c)]) << c;
      EXPECT_DOUBLE_EQ(round2(m.f1), f1[static_cast<std::size_t>(c)]) << c;
      EXPECT_EQ(m.frequency, frequency[static_cast<std::size_t>(c)]) << c;
    }
    EXPECT_EQ(rep.total, 378);
    EXPECT_NEAR(rep.accuracy * 100.0, 62.97, 0.005);
    EXPECT_LT(seconds_since(start), 1.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion02ConfusionStructure) {
  CriterionLine line{2, "confusion-matrix cross-class structure"};
  try {
    const auto start = Clock::now();
    const ConfusionMatrix cm = reference_matrix();
    const auto cross = [&cm](LabelClass a, LabelClass b) {
      return cm.at(a, b) + cm.at(b, a);
    };
    EXPECT_EQ(cross(LabelClass::positive, LabelClass::negative), 9);
    EXPECT_EQ(cross(LabelClass::positive, LabelClass::neutral), 56);
    EXPECT_EQ(cross(LabelClass::negative, LabelClass::neutral), 75);
    EXPECT_LT(seconds_since(start), 1.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion03VotingExhaustiveness) {
  CriterionLine line{3, "voting exhaustiveness"};
  try {
    const auto start = Clock::now();
    int checked = 0;
    for (LabelClass a : kAllClasses)
      for (LabelClass b : kAllClasses)
        for (LabelClass c : kAllClasses) {
          std::array<int, 3> counts{};
          for (LabelClass v : {a, b, c}) ++counts[static_cast<std::size_t>(class_index(v))];
          LabelClass expected = LabelClass::neutral;  // three-way disagreement
          for (int k = 0; k < 3; ++k)
            if (counts[static_cast<std::size_t>(k)] >= 2) expected = kAllClasses[static_cast<std::size_t>(k)];
          EXPECT_EQ(majority_vote({a, b, c}), expected)
              << to_string(a) << " " << to_string(b) << " " << to_string(c);
          ++checked;
        }
    EXPECT_EQ(checked, 27);
    EXPECT_LT(seconds_since(start), 1.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion04SeparableFixture) {
  CriterionLine line{4, "separable-fixture cross-validation accuracy"};
  try {
    const auto start = Clock::now();
    const CrossValidation cv =
        cross_validate(Hyperparameters{}, world().data, 20, 0.1, 424242);
    EXPECT_EQ(cv.accuracies.size(), 20u);
    EXPECT_TRUE(cv.warnings.empty());
    EXPECT_GE(cv.mean, 0.95) << "mean accuracy " << cv.mean;
    EXPECT_LT(seconds_since(start), 120.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion05ChanceLevelSanity) {
  CriterionLine line{5, "shuffled-label chance band"};
  try {
    const auto start = Clock::now();
    Dataset shuffled = world().data;
    std::vector<LabelClass> labels;
    labels.reserve(shuffled.size());
    for (const DataPoint& p : shuffled) labels.push_back(p.label);
    std::mt19937_64 rng(314159);
    for (std::size_t i = labels.size() - 1; i > 0; --i)
      std::swap(labels[i], labels[rng() % (i + 1)]);
    for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].label = labels[i];

    const CrossValidation cv = cross_validate(Hyperparameters{}, shuffled, 20, 0.1, 424243);
    EXPECT_GE(cv.mean, 0.23) << "mean accuracy " << cv.mean;
    EXPECT_LE(cv.mean, 0.43) << "mean accuracy " << cv.mean;
    EXPECT_LT(seconds_since(start), 120.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion06OracleEquivalence) {
  CriterionLine line{6, "numeric oracle equivalence"};
  try {
    const auto start = Clock::now();
    std::mt19937_64 rng(97531);
    const std::vector<std::string> alphabet = {"alpha", "beta",  "gamma",
                                               "delta", "omega", "sigma"};

    for (int trial = 0; trial < 100; ++trial) {
      // tf-idf against a from-scratch recount.
      const std::size_t n_docs = 2 + rng() % 6;
      std::vector<std::vector<std::string>> docs(n_docs);
      for (auto& doc : docs) {
        const std::size_t len = 1 + rng() % 8;
        for (std::size_t k = 0; k < len; ++k) doc.push_back(alphabet[rng() % alphabet.size()]);
      }
      FeatureOptions options;
      options.ngram_max = 1;
      options.vocab_cap = 0;
      const FeatureSchema schema = fit_vectorizer_terms(docs, options);
      const std::vector<std::string>& probe = docs[rng() % n_docs];
      const std::map<int, double> got = transform_terms(probe, schema);

      std::map<std::string, double> tf;
      for (const std::string& term : probe) tf[term] += 1.0;
      std::map<int, double> expected;
      double norm_sq = 0.0;
      for (const auto& [term, count] : tf) {
        int df = 0;
        for (const auto& doc : docs)
          if (std::find(doc.begin(), doc.end(), term) != doc.end()) ++df;
        const double idf =
            std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
        const double w = count * idf;
        expected[schema.vocabulary.at(term)] = w;
        norm_sq += w * w;
      }
      for (auto& [index, w] : expected) w /= std::sqrt(norm_sq);
      EXPECT_EQ(got.size(), expected.size());
      for (const auto& [index, w] : expected) {
        const auto it = got.find(index);
        if (it == got.end())
          ADD_FAILURE() << "term index " << index << " missing";
        else
          expect_rel(it->second, w);
      }

      // Pearson against the raw-sums formula.
      const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng() % 18);
      Eigen::VectorXd x(n), y(n);
      const double alpha = 4.0 * unit(rng) - 2.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        x(i) = 10.0 * unit(rng) - 5.0;
        y(i) = alpha * x(i) + 6.0 * unit(rng) - 3.0;
      }
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        sx += x(i); sy += y(i);
        sxx += x(i) * x(i); syy += y(i) * y(i); sxy += x(i) * y(i);
      }
      const double nd = static_cast<double>(n);
      const double denom = std::sqrt(sxx - sx * sx / nd) * std::sqrt(syy - sy * sy / nd);
      if (denom > 1e-9) expect_rel(pearson(x, y), (sxy - sx * sy / nd) / denom);

      // Gaussian class scores against a literal density sum.
      const Eigen::Index dims = 1 + static_cast<Eigen::Index>(rng() % 5);
      NbModel nb;
      nb.classes = {kAllClasses.begin(), kAllClasses.end()};
      nb.log_prior = Eigen::VectorXd(3);
      double prior_sum = 0.0;
      Eigen::Vector3d priors;
      for (int c = 0; c < 3; ++c) {
        priors(c) = 0.1 + unit(rng);
        prior_sum += priors(c);
      }
      for (int c = 0; c < 3; ++c) nb.log_prior(c) = std::log(priors(c) / prior_sum);
      nb.mean = Eigen::MatrixXd(3, dims);
      nb.variance = Eigen::MatrixXd(3, dims);
      for (int c = 0; c < 3; ++c)
        for (Eigen::Index j = 0; j < dims; ++j) {
          nb.mean(c, j) = 4.0 * unit(rng) - 2.0;
          nb.variance(c, j) = 0.1 + 2.0 * unit(rng);
        }
      Eigen::VectorXd probe_x(dims);
      for (Eigen::Index j = 0; j < dims; ++j) probe_x(j) = 4.0 * unit(rng) - 2.0;
      const Eigen::VectorXd posterior = nb.log_posterior(probe_x);
      for (int c = 0; c < 3; ++c) {
        double lp = nb.log_prior(c);
        for (Eigen::Index j = 0; j < dims; ++j) {
          const double var = nb.variance(c, j);
          const double diff = probe_x(j) - nb.mean(c, j);
          lp += -0.5 * std::log(2.0 * 3.14159265358979323846 * var) - diff * diff / (2.0 * var);
        }
        expect_rel(posterior(c), lp);
      }

      // Trendline against the closed-form normal equations.
      const std::size_t points_n = 2 + rng() % 14;
      std::vector<std::pair<double, double>> points;
      for (std::size_t i = 0; i < points_n; ++i)
        points.emplace_back(static_cast<double>(i), 5.0 + 6.0 * unit(rng) - 3.0);
      const Trend trend = fit_trend(points);
      double tsx = 0, tsy = 0, tsxx = 0, tsxy = 0;
      for (const auto& [px, py] : points) {
        tsx += px; tsy += py; tsxx += px * px; tsxy += px * py;
      }
      const double tn = static_cast<double>(points_n);
      const double slope = (tn * tsxy - tsx * tsy) / (tn * tsxx - tsx * tsx);
      expect_rel(trend.slope, slope);
      expect_rel(trend.intercept, (tsy - slope * tsx) / tn);
    }
    EXPECT_LT(seconds_since(start), 30.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion07EvolutionMonotonicDeterministic) {
  CriterionLine line{7, "evolution monotonicity and determinism"};
  try {
    const auto start = Clock::now();
    Dataset half;
    for (std::size_t i = 0; i < world().data.size(); i += 2) half.push_back(world().data[i]);

    EvolutionConfig cfg;
    cfg.population_size = 6;
    cfg.generations = 20;
    cfg.tournament_size = 2;
    cfg.elitism_count = 1;
    cfg.fitness_splits = 1;
    cfg.test_fraction = 0.2;
    cfg.seed = 7777;
    const EvolutionResult first = run_evolution(half, cfg);
    const EvolutionResult second = run_evolution(half, cfg);

    EXPECT_EQ(first.history.rows.size(), 21u);  // initial population + 20
    for (std::size_t g = 1; g < first.history.rows.size(); ++g)
      EXPECT_GE(first.history.rows[g].best_fitness, first.history.rows[g - 1].best_fitness)
          << "generation " << g;
    EXPECT_EQ(first.history, second.history);
    EXPECT_EQ(history_to_csv(first.history), history_to_csv(second.history));
    EXPECT_LT(seconds_since(start), 300.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion08EmotionalityArithmetic) {
  CriterionLine line{8, "daily emotionality arithmetic"};
  try {
    EXPECT_EQ(class_to_score(LabelClass::positive), 1);
    EXPECT_EQ(class_to_score(LabelClass::neutral), 0);
    EXPECT_EQ(class_to_score(LabelClass::negative), -1);

    const std::int64_t day0 = 1722470400;  // 2024-08-01T00:00:00Z
    const std::vector<MoodObservation> observations = {
        {day0, LabelClass::positive},          {day0 + 100, LabelClass::positive},
        {day0 + 200, LabelClass::negative},    {day0 + 86400, LabelClass::neutral},
        {day0 + 2 * 86400, LabelClass::negative}, {day0 + 2 * 86400 + 50, LabelClass::negative},
    };
    const MoodSeries series = daily_series(observations, 0);
    EXPECT_EQ(series.days.size(), 3u);
    if (series.days.size() == 3) {
      EXPECT_EQ(series.days[0].date, "2024-08-01");
      EXPECT_NEAR(series.days[0].mean_score, 1.0 / 3.0, 1e-9);
      EXPECT_EQ(series.days[0].count, 3);
      EXPECT_EQ(series.days[1].mean_score, 0.0);
      EXPECT_EQ(series.days[2].mean_score, -1.0);
      EXPECT_EQ(series.days[2].count, 2);
    }
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion09AgreementArithmetic) {
  CriterionLine line{9, "rater agreement arithmetic"};
  try {
    std::vector<LabelClass> a, b;
    for (int i = 0; i < 200; ++i) {
      const LabelClass mine = kAllClasses[static_cast<std::size_t>(i % 3)];
      a.push_back(mine);
      b.push_back(i < 132 ? mine : kAllClasses[static_cast<std::size_t>((i + 1) % 3)]);
    }
    const Agreement agree = agreement(a, b);
    EXPECT_EQ(agree.raw, 0.66);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

TEST(Acceptance, Criterion10RoundTripDeterminism) {
  CriterionLine line{10, "artifact round-trips and pipeline determinism"};
  try {
    const auto start = Clock::now();
    const World& w = world();
    const auto artifact = [&w](const std::string& file) { return w.run_dir + "/" + file; };
    const auto pipeline = [&w] {
      run_command({"--config", w.config, "--deterministic", "ingest"});
      run_command({"--config", w.config, "--deterministic", "featurize"});
      run_command({"--config", w.config, "--deterministic", "train"});
      run_command({"--config", w.config, "--deterministic", "evaluate"});
      run_command({"--config", w.config, "--deterministic", "score"});
      run_command({"--config", w.config, "--deterministic", "report", "--source", "labels"});
      run_command({"--config", w.config, "--deterministic", "report", "--source", "predicted"});
    };
    pipeline();
    if (::testing::Test::HasFailure()) return;

    // Every artifact reloads to an equal value: saving the reloaded value
    // reproduces the original bytes.
    const std::string echo = w.root + "/echo";
    const std::vector<std::string> files = {
        "corpus.json", "store.json",      "pseudonyms.json", "features.json", "model.json",
        "history.csv", "evaluation.json", "report.csv",      "labels.csv",    "predicted.csv",
        "mood_labels.csv", "mood_predicted.csv", "mood_labels.svg", "mood_predicted.svg"};
    save_corpus(load_corpus(artifact("corpus.json")), echo);
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("corpus.json")));
    save_sentence_store(load_sentence_store(artifact("store.json")), echo);
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("store.json")));
    save_pseudonyms(load_pseudonyms(artifact("pseudonyms.json")), echo);
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("pseudonyms.json")));
    save_feature_table(load_feature_table(artifact("features.json")), echo);
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("features.json")));
    save_model(load_model(artifact("model.json")), echo);
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("model.json")));
    save_artifact(echo, kKindEvaluation, load_artifact(artifact("evaluation.json"), kKindEvaluation));
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("evaluation.json")));
    save_labels(load_labels(artifact("predicted.csv")), echo);
    EXPECT_EQ(read_text_file(echo), read_text_file(artifact("predicted.csv")));

    // Byte-identical artifacts after a full re-run.
    std::map<std::string, std::string> before;
    for (const std::string& file : files) before[file] = read_text_file(artifact(file));
    pipeline();
    for (const std::string& file : files)
      EXPECT_EQ(read_text_file(artifact(file)), before[file]) << file;

    // The two mood series cover the same dates.
    const MoodSeries from_labels = series_from_csv(before["mood_labels.csv"]);
    const MoodSeries from_predictions = series_from_csv(before["mood_predicted.csv"]);
    EXPECT_EQ(from_labels.days.size(), from_predictions.days.size());
    for (std::size_t i = 0; i < std::min(from_labels.days.size(), from_predictions.days.size()); ++i)
      EXPECT_EQ(from_labels.days[i].date, from_predictions.days[i].date);

    EXPECT_LT(seconds_since(start), 60.0);
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
  }
}

}  // namespace
}  // namespace chatmood
