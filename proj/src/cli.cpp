#include "chatmood/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "chatmood/artifact_io.hpp"
#include "chatmood/config.hpp"
#include "chatmood/errors.hpp"
#include "chatmood/evaluate.hpp"
#include "chatmood/evolve.hpp"
#include "chatmood/mood.hpp"
#include "chatmood/seeds.hpp"

namespace chatmood {

namespace {

constexpr const char* kGuidance =
    "Classify the mood each sentence carries.\n"
    "  p  positive   e.g. love, happiness, euphoria, surprise, sympathy\n"
    "  n  neutral    e.g. facts, ambivalence, interest, indifference, apathy\n"
    "  x  negative   e.g. fear, hate, anger, trouble, regret\n"
    "  u  undo the previous label    s  skip for now    q  save and quit\n";

std::string format4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

}  // namespace

LabelSession::LabelSession(const SentenceStore& store, std::vector<LabelRecord> existing,
                           std::string rater, int round, std::uint64_t seed, std::int64_t now)
    : store_(&store),
      records_(std::move(existing)),
      session_start_(records_.size()),
      rater_(std::move(rater)),
      round_(round),
      now_(now) {
  if (round_ < 1) throw ValueError("labeling round must be >= 1, got " + std::to_string(round_));
  if (rater_.empty()) throw ValueError("rater name must not be empty");
  validate_labels(records_);

  std::set<std::string> this_round;
  std::set<std::string> previous_round;
  for (const LabelRecord& r : records_) {
    if (r.rater != rater_) continue;
    if (r.round == round_) this_round.insert(r.sentence_id);
    if (r.round == round_ - 1) previous_round.insert(r.sentence_id);
  }
  for (const PreparedMessage& message : store.messages) {
    for (const Sentence& sentence : message.sentences) {
      const std::string id = sentence.id();
      if (this_round.count(id)) continue;
      if (round_ > 1 && !previous_round.count(id)) continue;
      queue_.push_back(id);
    }
  }
  std::mt19937_64 rng(derive_seed(seed, 0x1A, static_cast<std::uint64_t>(round_)));
  for (std::size_t i = queue_.size(); i > 1; --i)
    std::swap(queue_[i - 1], queue_[rng() % i]);
}

int LabelSession::run(std::istream& in, std::ostream& out) {
  if (queue_.empty()) {
    out << "nothing to label for rater \"" << rater_ << "\", round " << round_ << "\n";
    return 0;
  }
  out << kGuidance;
  std::size_t i = 0;
  std::string line;
  while (i < queue_.size()) {
    const std::string& id = queue_[i];
    const Sentence* sentence = store_->find_sentence(id);
    out << "\n(" << i + 1 << "/" << queue_.size() << ") " << id << "\n  " << sentence->clean
        << "\n[p/n/x/u/s/q]> " << std::flush;
    if (!std::getline(in, line)) break;  // end of input acts like quit
    char key = 0;
    for (const char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        key = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        break;
      }
    }
    switch (key) {
      case 'p':
      case 'n':
      case 'x': {
        const LabelClass cls = key == 'p'   ? LabelClass::positive
                               : key == 'n' ? LabelClass::neutral
                                            : LabelClass::negative;
        records_.push_back({id, cls, rater_, round_, now_});
        out << "  -> " << to_string(cls) << "\n";
        ++i;
        break;
      }
      case 'u': {
        if (records_.size() == session_start_) {
          out << "  nothing to undo\n";
          break;
        }
        const LabelRecord undone = records_.back();
        records_.pop_back();
        queue_.insert(queue_.begin() + static_cast<long>(i), undone.sentence_id);
        out << "  undid " << undone.sentence_id << "\n";
        break;
      }
      case 's':
        out << "  skipped\n";
        ++i;
        break;
      case 'q':
        return static_cast<int>(records_.size() - session_start_);
      case 0:
        break;  // blank line; ask again
      default:
        out << "  unknown key '" << key << "'\n";
        break;
    }
  }
  return static_cast<int>(records_.size() - session_start_);
}

namespace {

struct CommandContext {
  RunConfig config;
  bool deterministic = false;
  CliStreams streams;
};

std::string artifact_path(const RunConfig& config, const char* file) {
  return config.run_dir() + "/" + file;
}

void require_artifact(const std::string& path, const char* producer) {
  if (!std::filesystem::exists(path))
    throw IoError("missing artifact \"" + path + "\"; run the " + producer + " command first");
}

void ensure_run_dir(const RunConfig& config) {
  std::filesystem::create_directories(config.run_dir());
}

std::int64_t session_time(const CommandContext& ctx) {
  return ctx.deterministic ? 0 : static_cast<std::int64_t>(std::time(nullptr));
}

std::vector<LabelRecord> load_labels_if_present(const std::string& path) {
  if (!std::filesystem::exists(path)) return {};
  return load_labels(path);
}

Dataset labeled_dataset(const CommandContext& ctx) {
  const std::string features = artifact_path(ctx.config, "features.json");
  const std::string labels = artifact_path(ctx.config, "labels.csv");
  require_artifact(features, "featurize");
  require_artifact(labels, "label");
  const auto effective = effective_labels(load_labels(labels));
  if (effective.empty()) throw ValueError("the label file holds no labels; nothing to learn from");
  return dataset_from_table(load_feature_table(features), effective);
}

void cmd_ingest(CommandContext& ctx) {
  const RunConfig& config = ctx.config;
  if (config.corpus_path.empty())
    throw ConfigError("no corpus input configured; set corpus = <path> in the config");
  std::ifstream in(config.corpus_path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file \"" + config.corpus_path + "\"");
  const Corpus corpus =
      config.source_kind == "zulip" ? parse_zulip_export(in) : parse_generic_jsonl(in);

  const Resources resources = load_resources(config.resource_dir);
  PreprocessOptions options;
  for (const std::string& glyph : resources.emoticons.glyphs_longest_first())
    options.split.emoticons.push_back(glyph);
  if (!config.resource_dir.empty()) {
    const std::string abbreviations = config.resource_dir + "/abbreviations.txt";
    if (std::filesystem::exists(abbreviations))
      for (std::string& entry : load_abbreviations_file(abbreviations))
        options.split.abbreviations.push_back(std::move(entry));
  }
  std::set<std::string> senders;
  for (const Message& message : corpus.messages()) senders.insert(message.sender);
  options.roster.assign(senders.begin(), senders.end());

  PseudonymMap pseudonyms;
  const SentenceStore store = prepare_corpus(corpus, options, pseudonyms);

  ensure_run_dir(config);
  save_corpus(corpus, artifact_path(config, "corpus.json"));
  save_sentence_store(store, artifact_path(config, "store.json"));
  save_pseudonyms(pseudonyms, artifact_path(config, "pseudonyms.json"));
  ctx.streams.out << corpus.size() << " messages, " << store.sentence_count() << " sentences, "
                  << store.removed_count() << " removed by cleaning\n"
                  << "artifacts in " << config.run_dir() << "\n";
}

void cmd_featurize(CommandContext& ctx) {
  const std::string store_path = artifact_path(ctx.config, "store.json");
  require_artifact(store_path, "ingest");
  const SentenceStore store = load_sentence_store(store_path);
  const Resources resources = load_resources(ctx.config.resource_dir);
  const FeatureTable table = compute_feature_table(store, resources);
  ensure_run_dir(ctx.config);
  save_feature_table(table, artifact_path(ctx.config, "features.json"));
  ctx.streams.out << table.rows.size() << " sentences featurized\n";
}

void cmd_label(CommandContext& ctx, const std::string& rater, int round, bool assume_tty) {
  if (!ctx.streams.stdin_is_tty && !assume_tty)
    throw ConfigError(
        "standard input is not a terminal, so interactive labeling cannot run; "
        "prepare the label CSV by hand (sentence_id,class,rater,round,labeled_at) "
        "or rerun from a console");
  const std::string store_path = artifact_path(ctx.config, "store.json");
  require_artifact(store_path, "ingest");
  const SentenceStore store = load_sentence_store(store_path);
  const std::string labels_path = artifact_path(ctx.config, "labels.csv");

  LabelSession session(store, load_labels_if_present(labels_path), rater, round, ctx.config.seed,
                       session_time(ctx));
  const int added = session.run(ctx.streams.in, ctx.streams.out);
  ensure_run_dir(ctx.config);
  save_labels(session.records(), labels_path);
  ctx.streams.out << added << " labels added for rater \"" << rater << "\", round " << round
                  << " (" << session.records().size() << " records total)\n";
}

void cmd_train(CommandContext& ctx) {
  const Dataset data = labeled_dataset(ctx);
  const EvolutionResult result = run_evolution(data, ctx.config.evolution);
  ensure_run_dir(ctx.config);
  const std::string model_path = artifact_path(ctx.config, "model.json");
  const std::string history_path = artifact_path(ctx.config, "history.csv");
  save_model(result.best, model_path);
  write_text_file(history_path, history_to_csv(result.history));
  const GenerationStats& last = result.history.rows.back();
  ctx.streams.out << "trained on " << data.size() << " labeled sentences; best fitness "
                  << format4(last.best_fitness) << " after " << last.generation
                  << " generations\nmodel -> " << model_path << "\nhistory -> " << history_path
                  << "\n";
}

void cmd_evaluate(CommandContext& ctx) {
  const Dataset data = labeled_dataset(ctx);
  const std::string model_path = artifact_path(ctx.config, "model.json");
  require_artifact(model_path, "train");
  const Hyperparameters hp = load_model(model_path).hp;

  ConfusionMatrix pooled{};
  std::vector<double> accuracies;
  std::vector<std::string> warnings;
  for (int r = 0; r < ctx.config.repeats; ++r) {
    const std::uint64_t split_seed =
        derive_seed(ctx.config.seed, 0xCF, static_cast<std::uint64_t>(r));
    try {
      const auto [train, test] =
          stratified_split(data, ctx.config.evolution.test_fraction, split_seed);
      const EnsembleModel model = train_ensemble(train, hp, derive_seed(split_seed, 1));
      std::vector<LabelClass> predicted;
      std::vector<LabelClass> truth;
      for (const DataPoint& point : test) {
        predicted.push_back(model.predict(point).label);
        truth.push_back(point.label);
      }
      const ConfusionMatrix matrix = confusion(predicted, truth);
      pooled += matrix;
      accuracies.push_back(static_cast<double>(matrix.trace()) /
                           static_cast<double>(matrix.total()));
    } catch (const Error& e) {
      accuracies.push_back(0.0);
      warnings.push_back("repeat " + std::to_string(r) + ": " + e.what());
    }
  }
  for (const std::string& warning : warnings) ctx.streams.err << "warning: " << warning << "\n";
  if (pooled.total() == 0) throw TrainingError("every evaluation repeat failed");

  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  double ss = 0.0;
  for (double a : accuracies) ss += (a - mean) * (a - mean);
  const double stddev = std::sqrt(ss / static_cast<double>(accuracies.size()));

  std::ostream& out = ctx.streams.out;
  for (std::size_t r = 0; r < accuracies.size(); ++r)
    out << "repeat " << r << ": " << format4(accuracies[r]) << "\n";
  out << "mean " << format4(mean) << "  stddev " << format4(stddev) << "  over "
      << accuracies.size() << " repeats\n\n";
  const ClassificationReport rep = report(pooled);
  out << confusion_to_text(pooled) << "\n" << report_to_text(rep);

  ensure_run_dir(ctx.config);
  const nlohmann::json payload = {
      {"repeats", ctx.config.repeats}, {"accuracies", accuracies}, {"mean", mean},
      {"stddev", stddev},             {"confusion", pooled},       {"report", rep},
  };
  save_artifact(artifact_path(ctx.config, "evaluation.json"), kKindEvaluation, payload);
  write_text_file(artifact_path(ctx.config, "report.csv"), report_to_csv(rep));
}

void cmd_score(CommandContext& ctx) {
  const std::string features_path = artifact_path(ctx.config, "features.json");
  const std::string model_path = artifact_path(ctx.config, "model.json");
  require_artifact(features_path, "featurize");
  require_artifact(model_path, "train");
  const FeatureTable table = load_feature_table(features_path);
  const EnsembleModel model = load_model(model_path);
  const auto labeled =
      effective_labels(load_labels_if_present(artifact_path(ctx.config, "labels.csv")));

  std::vector<LabelRecord> predicted;
  const std::int64_t now = session_time(ctx);
  for (const DataPoint& point : all_points(table)) {
    if (labeled.count(point.id)) continue;
    predicted.push_back({point.id, model.predict(point).label, "model", 1, now});
  }
  ensure_run_dir(ctx.config);
  save_labels(predicted, artifact_path(ctx.config, "predicted.csv"));
  ctx.streams.out << "scored " << predicted.size() << " of " << table.rows.size()
                  << " sentences (" << labeled.size() << " already labeled)\n";
}

void cmd_report(CommandContext& ctx, const std::string& source) {
  const std::string store_path = artifact_path(ctx.config, "store.json");
  require_artifact(store_path, "ingest");
  const bool from_labels = source == "labels";
  const std::string labels_path =
      artifact_path(ctx.config, from_labels ? "labels.csv" : "predicted.csv");
  require_artifact(labels_path, from_labels ? "label" : "score");

  const SentenceStore store = load_sentence_store(store_path);
  const auto effective = effective_labels(load_labels(labels_path));
  if (effective.empty()) throw ValueError("the label file holds no labels; nothing to report on");

  std::vector<MoodObservation> observations;
  for (const auto& [id, cls] : effective) {
    const Sentence* sentence = store.find_sentence(id);
    if (!sentence) throw ValueError("label references unknown sentence \"" + id + "\"");
    const PreparedMessage* message = store.find_message(sentence->message_id);
    observations.push_back({message->timestamp, cls});
  }
  const MoodSeries series = daily_series(observations, ctx.config.timezone_offset_minutes);

  ensure_run_dir(ctx.config);
  const std::string csv_path = artifact_path(ctx.config, ("mood_" + source + ".csv").c_str());
  const std::string svg_path = artifact_path(ctx.config, ("mood_" + source + ".svg").c_str());
  write_text_file(csv_path, series_to_csv(series));
  write_text_file(svg_path, series_to_svg(series));

  std::ostream& out = ctx.streams.out;
  out << series.days.size() << " days from " << series.days.front().date << " to "
      << series.days.back().date << " (" << observations.size() << " labeled sentences)\n";
  if (series.trend)
    out << "trend slope " << format4(series.trend->slope) << " per day, intercept "
        << format4(series.trend->intercept) << "\n";
  else
    out << "trend needs at least two days\n";
  out << "series -> " << csv_path << "\nchart -> " << svg_path << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, CliStreams streams) {
  CLI::App app{"team mood analysis over chat logs"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool deterministic = false;
  app.add_option("--config", config_path, "run configuration file");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "override the configured seed");
  app.add_flag("--deterministic", deterministic,
               "freeze wall-clock timestamps for reproducible artifacts");

  CLI::App* ingest =
      app.add_subcommand("ingest", "parse the chat export and preprocess its sentences");
  CLI::App* label = app.add_subcommand("label", "label sentences from the console");
  std::string rater;
  int round = 1;
  bool assume_tty = false;
  label->add_option("--rater", rater, "rater name recorded with each label")->required();
  label->add_option("--round", round, "labeling round")->check(CLI::PositiveNumber);
  label->add_flag("--assume-tty", assume_tty)->group("");
  CLI::App* featurize =
      app.add_subcommand("featurize", "compute per-sentence features for the store");
  CLI::App* train = app.add_subcommand("train", "evolve ensemble hyperparameters and fit a model");
  CLI::App* evaluate = app.add_subcommand("evaluate", "repeated split evaluation of the model");
  CLI::App* score = app.add_subcommand("score", "predict labels for unlabeled sentences");
  CLI::App* report = app.add_subcommand("report", "render the team mood time series");

  double ratio = 0.0;
  CLI::Option* ratio_opt = train->add_option("--ratio", ratio, "test split fraction");
  CLI::Option* eval_ratio_opt = evaluate->add_option("--ratio", ratio, "test split fraction");
  int repeats = 0;
  CLI::Option* repeats_opt = evaluate->add_option("--repeats", repeats, "evaluation repetitions");
  std::string source = "labels";
  report->add_option("--source", source, "label source for the series")
      ->check(CLI::IsMember({"labels", "predicted"}));
  int timezone_offset = 0;
  CLI::Option* tz_opt = report->add_option("--timezone-offset", timezone_offset,
                                           "minutes added to timestamps before day bucketing")
                            ->check(CLI::Range(-1440, 1440));

  for (CLI::App* sub : {ingest, label, featurize, train, evaluate, score, report})
    sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("chatmood");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, streams.out, streams.err);
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (*seed_opt) {
      config.seed = seed;
      config.evolution.seed = seed;
    }
    if (*ratio_opt || *eval_ratio_opt) config.evolution.test_fraction = ratio;
    if (*repeats_opt) config.repeats = repeats;
    if (*tz_opt) config.timezone_offset_minutes = timezone_offset;
    config.validate();

    CommandContext ctx{std::move(config), deterministic, streams};
    if (ingest->parsed()) cmd_ingest(ctx);
    if (label->parsed()) cmd_label(ctx, rater, round, assume_tty);
    if (featurize->parsed()) cmd_featurize(ctx);
    if (train->parsed()) cmd_train(ctx);
    if (evaluate->parsed()) cmd_evaluate(ctx);
    if (score->parsed()) cmd_score(ctx);
    if (report->parsed()) cmd_report(ctx, source);
    return 0;
  } catch (const Error& e) {
    streams.err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chatmood
